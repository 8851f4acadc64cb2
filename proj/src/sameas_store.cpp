#include "cbld/sameas_store.hpp"

namespace cbld {

SameAsStore SameAsStore::from_triples(const TripleSet& g) {
    SameAsStore store;
    for (const Triple& t : g) {
        if (t.predicate != wk::owl_same_as()) continue;
        if (const Iri* obj = std::get_if<Iri>(&t.object)) {
            store.add(t.subject, *obj);
        }
    }
    return store;
}

SameAsStore SameAsStore::from_file(const std::filesystem::path& path) {
    return from_triples(read_ntriples_file(path));
}

void SameAsStore::add(const Iri& local, const Iri& external) {
    if (links_[local].insert(external).second) ++size_;
}

std::vector<Iri> SameAsStore::find(const Iri& local) const {
    auto it = links_.find(local);
    if (it == links_.end()) return {};
    return {it->second.begin(), it->second.end()};
}

TripleSet SameAsStore::to_triples() const {
    TripleSet g;
    for (const auto& [local, externals] : links_) {
        for (const Iri& ext : externals) {
            g.insert({local, wk::owl_same_as(), ext});
        }
    }
    return g;
}

}  // namespace cbld
