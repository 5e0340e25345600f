#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace wag {

// Error taxonomy. The CLI maps these onto exit codes: validation and
// precondition failures are usage errors (3), budget exhaustion is
// "incomplete" (2).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Lifted priorities not constant on the relevant observation cells.
struct VisibilityError : std::runtime_error {
    explicit VisibilityError(const std::string& msg) : std::runtime_error(msg) {}
};

struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

// An oracle asked to run outside its completeness envelope refuses.
struct OracleError : std::runtime_error {
    explicit OracleError(const std::string& msg) : std::runtime_error(msg) {}
};

// Exact rational arithmetic for stochastic games. Qualitative analysis only
// needs supports, so the values stay tiny; int64 with normalization is ample.
struct Rat {
    long long num = 0;
    long long den = 1;

    Rat() = default;
    Rat(long long n, long long d) : num(n), den(d) { normalize(); }
    static Rat zero() { return Rat(); }
    static Rat one() { return Rat(1, 1); }

    void normalize() {
        if (den == 0) throw ValidationError("rational with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }

    bool is_zero() const { return num == 0; }
    bool positive() const { return num > 0; }

    friend Rat operator+(const Rat& a, const Rat& b) {
        __int128 n = (__int128)a.num * b.den + (__int128)b.num * a.den;
        __int128 d = (__int128)a.den * b.den;
        __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw ValidationError("rational overflow");
        return Rat((long long)n, (long long)d);
    }
    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

  private:
    static __int128 gcd128(__int128 a, __int128 b) {
        while (b) { __int128 t = a % b; a = b; b = t; }
        return a;
    }
};

// Parses "p/q" or "p". Used by the stochastic game file format.
Rat parse_rat(const std::string& s);

// FNV-1a 64-bit, used for input fingerprints in run reports.
inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Deterministic RNG for corpus generation (splitmix64). We avoid
// std::uniform_int_distribution so generated corpora are byte-stable
// across standard library implementations.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    // uniform in [0, bound)
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }
    int range(int lo, int hi) { return lo + (int)below((std::uint64_t)(hi - lo + 1)); }
};

} // namespace wag
