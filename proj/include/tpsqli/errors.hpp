#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tpsqli {

// Input violates a documented contract (bad arguments, schema rule, range).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A file or document could not be parsed. byte_offset() is 0 when unknown.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what, std::size_t byte_offset = 0)
        : std::runtime_error(what), byte_offset_(byte_offset) {}
    std::size_t byte_offset() const noexcept { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

// Fatal transport-level failure (unreachable seed, bind failure, ...).
// Individual request failures during a scan are reported as trial outcomes,
// not exceptions.
class FetchError : public std::runtime_error {
public:
    explicit FetchError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tpsqli
