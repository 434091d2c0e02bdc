// Error taxonomy and small shared utilities.
//
// Every failure the pipeline can produce maps onto one of three exception
// families so the CLI can translate them into stable exit codes:
//   ConfigError        -> exit 2 (bad flags, bad masks, bad experiment config)
//   DataError          -> exit 3 (schema mismatch, gaps, empty joins, bad files)
//   TrainingDiverged   -> exit 4 (NaN loss during optimization)

#ifndef SENTIFORGE_COMMON_HPP
#define SENTIFORGE_COMMON_HPP

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sentiforge {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

class TrainingDiverged : public std::runtime_error {
public:
    explicit TrainingDiverged(const std::string& what) : std::runtime_error(what) {}
};

// Transient network failure after the retry budget is exhausted.
class RetryableError : public std::runtime_error {
public:
    explicit RetryableError(const std::string& what) : std::runtime_error(what) {}
};

// Counts non-fatal oddities (skipped records, missing store keys, zero-filled
// buckets). Safe to bump from several threads.
class WarningTally {
public:
    void bump(std::uint64_t n = 1) noexcept { count_.fetch_add(n, std::memory_order_relaxed); }
    std::uint64_t count() const noexcept { return count_.load(std::memory_order_relaxed); }
    void reset() noexcept { count_.store(0, std::memory_order_relaxed); }

private:
    std::atomic<std::uint64_t> count_{0};
};

}  // namespace sentiforge

#endif  // SENTIFORGE_COMMON_HPP
