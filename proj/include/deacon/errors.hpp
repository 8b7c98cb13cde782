#pragma once

#include <stdexcept>
#include <string>

namespace deacon {

// Resource limit exceeded (memory budget, brute-force cap, exponent budget).
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// 64-bit arithmetic would wrap around. Values are exact or we refuse.
class OverflowError : public std::runtime_error {
public:
    explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};

// Checkpoint file rejected (version or config hash mismatch, malformed data).
class CheckpointError : public std::runtime_error {
public:
    explicit CheckpointError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace deacon
