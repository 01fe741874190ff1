#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace newspop {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input data violates a format or precondition (bad file, degenerate set).
class DataError : public Error {
public:
    using Error::Error;
};

/// A quantity is mathematically undefined for the given arguments.
class DomainError : public Error {
public:
    using Error::Error;
};

/// 64-bit FNV-1a, used for config and data fingerprints.
class Fingerprint {
public:
    Fingerprint& add(std::string_view bytes) {
        for (unsigned char c : bytes) {
            state_ ^= c;
            state_ *= 0x100000001b3ULL;
        }
        // field separator so ("ab","c") != ("a","bc")
        state_ ^= 0xff;
        state_ *= 0x100000001b3ULL;
        return *this;
    }
    Fingerprint& add(std::uint64_t v) { return add(std::to_string(v)); }
    Fingerprint& add(double v);

    std::uint64_t value() const { return state_; }
    std::string hex() const;

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

/// Seeded engine for one named stream. Streams with different ids are
/// independent, so adding draws to one table never shifts another.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace newspop
