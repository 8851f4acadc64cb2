#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <vector>

#include "cbld/rdf.hpp"

namespace cbld {

// Read-mostly lookup table of owl:sameAs links keyed by local entity IRI.
// Loaded once at startup; concurrent reads are safe afterwards.
class SameAsStore {
public:
    SameAsStore() = default;

    static SameAsStore from_triples(const TripleSet& g);
    static SameAsStore from_file(const std::filesystem::path& path);

    void add(const Iri& local, const Iri& external);

    // External IRIs mapped to `local`, sorted; empty when none.
    std::vector<Iri> find(const Iri& local) const;

    TripleSet to_triples() const;

    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }

private:
    std::map<Iri, std::set<Iri>> links_;
    std::size_t size_ = 0;
};

}  // namespace cbld
