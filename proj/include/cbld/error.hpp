#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cbld {

enum class ErrorKind {
    invalid_type,
    invalid_permalink,
    invalid_field,
    invalid_literal,
    invalid_trust,
    invalid_date,
    wrong_payload,
    parse_error,
    unparseable_url,
    invalid_key,
    unknown_entity,
    rate_exceeded,
    foreign_redirect,
    upstream_error,
    unsupported_scheme,
    malformed_credentials,
    not_acceptable,
    schema_error,
    io_error,
    checkpoint_corrupt,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message),
          kind_(kind),
          message_(message) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& message() const noexcept { return message_; }

    // Same kind, message extended with context (e.g. a page index).
    Error with_context(const std::string& context) const {
        return Error(kind_, message_ + " (" + context + ")");
    }

private:
    ErrorKind kind_;
    std::string message_;
};

}  // namespace cbld
