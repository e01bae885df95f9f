#pragma once

#include <stdexcept>
#include <string>

namespace weyl {

// Exit-code contract: 0 success, 1 verification failure, 2 config error,
// 3 numerical failure. The CLI maps these exception types to 2 and 3.

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace weyl
