#pragma once

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qdesign/errors.hpp"

namespace qdesign {

/// Exact integers and rationals; all parameter arithmetic is exact.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// q^e as an exact integer.
inline Int int_pow(unsigned q, unsigned e) {
    Int r = 1;
    for (unsigned i = 0; i < e; ++i) r *= q;
    return r;
}

/// Decompose n = p^e with p prime; nullopt if n is not a prime power (or n < 2).
inline std::optional<std::pair<unsigned, unsigned>> prime_power_decompose(std::uint64_t n) {
    if (n < 2) return std::nullopt;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            unsigned e = 0;
            std::uint64_t m = n;
            while (m % p == 0) { m /= p; ++e; }
            if (m != 1) return std::nullopt;
            return std::make_pair(static_cast<unsigned>(p), e);
        }
    }
    return std::make_pair(static_cast<unsigned>(n), 1u); // n itself prime
}

inline bool is_prime_power(std::uint64_t n) { return prime_power_decompose(n).has_value(); }

/// Distinct prime factors of n by trial division.
inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> ps;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

/// Worker count: explicit request > QDESIGN_THREADS > hardware concurrency.
inline unsigned resolve_threads(unsigned requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("QDESIGN_THREADS")) {
        long n = std::strtol(env, nullptr, 10);
        if (n > 0) return static_cast<unsigned>(n);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

} // namespace qdesign
