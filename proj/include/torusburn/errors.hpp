#pragma once

#include <stdexcept>
#include <string>

namespace torusburn {

/// Instance exceeds a memory or search-space guard. The guard refuses up
/// front instead of attempting the computation.
class ResourceLimitError : public std::runtime_error {
public:
    explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical routine failed to converge or left its validity domain.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace torusburn
