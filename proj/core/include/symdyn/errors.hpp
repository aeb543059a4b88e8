#pragma once

#include <stdexcept>
#include <string>

namespace symdyn {

// Thrown when a configured cap (depth, word length, trial count, state
// budget) would be exceeded. CLI maps this to exit code 3.
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace symdyn
