#pragma once

#include <stdexcept>
#include <string>

namespace agd {

// Invalid arguments or malformed structures handed to an operation.
class invalid_input : public std::invalid_argument {
public:
    explicit invalid_input(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed file content; message carries row/column location when known.
class parse_error : public invalid_input {
public:
    explicit parse_error(const std::string& what) : invalid_input(what) {}
};

// Inputs that are structurally valid but statistically unusable
// (constant target, single-class labels, zero-variance differences).
class degenerate_error : public std::runtime_error {
public:
    explicit degenerate_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace agd
