#pragma once

#include <stdexcept>
#include <string>

namespace qteich {

// Mathematical failure on well-formed input: singular weight, mismatched
// classification, null-space dimension off by one. CLI exit code 1.
class DomainError : public std::runtime_error {
public:
    DomainError(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// Malformed input: bad indices, broken gluing, schema violations. CLI exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qteich
