#pragma once

#include <stdexcept>
#include <string>

namespace biastrace {

// Exit-code contract: 0 ok, 1 usage/IO, 2 data/contract violation.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Bad invocation or missing/unreadable files.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed data, schema mismatch, or violated operation contract.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace biastrace
