#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace tilesplit {

// ============================================================
// Errors
// ============================================================

/// Base class for all domain errors.  CLI maps these to exit code 1;
/// ParseError maps to exit code 2.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : Error {
    using Error::Error;
};
struct InvalidScheme : Error {
    using Error::Error;
};
struct NotIrreducible : Error {
    using Error::Error;
};
struct NotFixedScale : Error {
    using Error::Error;
};
struct NotPrimitive : Error {
    using Error::Error;
};
struct NoConvergence : Error {
    using Error::Error;
};
struct CommensurableScheme : Error {
    using Error::Error;
};
struct IncommensurableInput : Error {
    using Error::Error;
};
struct SlideInfeasible : Error {
    using Error::Error;
};
struct NumericVerdictNotAccepted : Error {
    using Error::Error;
};
struct SingularBeyondRankOne : Error {
    using Error::Error;
};

// ============================================================
// Deterministic PRNG (splitmix64)
// ============================================================

/// Small, fast, seedable generator.  Used for rule choice, random boxes and
/// Monte-Carlo sampling so every run is reproducible from its seed.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_double() { return (next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) { return next() % n; }

  private:
    std::uint64_t state_;
};

/// Stateless hash of (seed, index); lets parallel loops draw independent
/// values without sharing generator state (order-independent results).
inline std::uint64_t hash_mix(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(seed ^ (0x632be59bd9b4e019ull * (index + 1)));
    return g.next();
}

inline double hash_mix_double(std::uint64_t seed, std::uint64_t index) {
    return (hash_mix(seed, index) >> 11) * 0x1.0p-53;
}

// ============================================================
// FNV-1a 64 (config hashing for reports)
// ============================================================

inline std::uint64_t fnv1a64(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string fnv1a64_hex(const std::string& s) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(s.data(), s.size())));
    return buf;
}

// ============================================================
// Logging (TILESPLIT_LOG = debug | info | warn | error)
// ============================================================

enum class LogLevel { Debug = 0, Info = 1, Warn = 2, Error = 3 };

inline LogLevel log_level() {
    static LogLevel level = [] {
        const char* env = std::getenv("TILESPLIT_LOG");
        if (!env) return LogLevel::Warn;
        std::string v(env);
        if (v == "debug") return LogLevel::Debug;
        if (v == "info") return LogLevel::Info;
        if (v == "warn") return LogLevel::Warn;
        if (v == "error") return LogLevel::Error;
        return LogLevel::Warn;
    }();
    return level;
}

template <typename... Args>
void log(LogLevel lvl, const char* fmt, Args... args) {
    if (lvl < log_level()) return;
    static const char* names[] = {"debug", "info", "warn", "error"};
    std::fprintf(stderr, "[%s] ", names[static_cast<int>(lvl)]);
    std::fprintf(stderr, fmt, args...);
    std::fprintf(stderr, "\n");
}

}  // namespace tilesplit
