#pragma once

#include <stdexcept>
#include <string>

namespace mtcforge {

// Raised for malformed inputs: bad fibers, singular monodromies, shape mismatches.
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Raised when a valid input falls outside the families the pipeline handles.
class UnsupportedError : public std::domain_error {
public:
    explicit UnsupportedError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace mtcforge
