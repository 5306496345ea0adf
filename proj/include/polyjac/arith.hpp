#ifndef POLYJAC_ARITH_HPP
#define POLYJAC_ARITH_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace polyjac {

using boost::multiprecision::cpp_int;

/// Domain error thrown by all modules; the CLI maps it to exit code 1.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace arith {

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

inline uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m) {
    if (m == 1) return 0;
    uint64_t r = 1;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

// inverse of a modulo m, gcd(a, m) must be 1
inline uint64_t invmod(uint64_t a, uint64_t m) {
    int64_t t = 0, new_t = 1;
    int64_t r = static_cast<int64_t>(m), new_r = static_cast<int64_t>(a % m);
    while (new_r != 0) {
        int64_t q = r / new_r;
        t = std::exchange(new_t, t - q * new_t);
        r = std::exchange(new_r, r - q * new_r);
    }
    if (r != 1) throw error("invmod: arguments not coprime");
    return static_cast<uint64_t>(t < 0 ? t + static_cast<int64_t>(m) : t);
}

/// Ascending table of all primes <= limit. Immutable once built, safe to share
/// across threads.
class PrimeTable {
public:
    PrimeTable() = default;
    PrimeTable(uint64_t limit, std::vector<uint32_t> primes)
        : limit_(limit), primes_(std::move(primes)) {}

    uint64_t limit() const { return limit_; }
    const std::vector<uint32_t>& primes() const { return primes_; }
    std::size_t size() const { return primes_.size(); }
    bool empty() const { return primes_.empty(); }

    // pi(x); requires x <= limit to be meaningful
    std::size_t count_upto(uint64_t x) const {
        return static_cast<std::size_t>(
            std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
    }

    bool contains(uint64_t p) const {
        return std::binary_search(primes_.begin(), primes_.end(), p);
    }

private:
    uint64_t limit_ = 0;
    std::vector<uint32_t> primes_;
};

namespace detail {

inline std::vector<uint32_t> simple_sieve(uint32_t limit) {
    std::vector<uint32_t> primes;
    if (limit < 2) return primes;
    std::vector<uint8_t> composite(limit + 1, 0);
    for (uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(static_cast<uint32_t>(i));
        for (uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
    }
    return primes;
}

} // namespace detail

constexpr std::size_t kDefaultSegment = std::size_t{1} << 18;
constexpr uint64_t kSimpleSieveCutoff = uint64_t{1} << 21;

/// All primes <= limit. Uses a flat sieve for small limits and a segmented
/// sieve (byte array per segment, default segment sized for cache residency)
/// beyond kSimpleSieveCutoff; needed for limits up to 1e8.
inline PrimeTable sieve_primes(uint64_t limit, std::size_t segment_size = kDefaultSegment) {
    if (limit >= (uint64_t{1} << 32))
        throw error("sieve_primes: limit " + std::to_string(limit) + " exceeds 2^32");
    if (segment_size == 0) segment_size = kDefaultSegment;
    if (limit <= kSimpleSieveCutoff)
        return PrimeTable(limit, detail::simple_sieve(static_cast<uint32_t>(limit)));

    const uint32_t root = static_cast<uint32_t>(std::sqrt(static_cast<double>(limit))) + 1;
    std::vector<uint32_t> base = detail::simple_sieve(root);

    std::vector<uint32_t> primes;
    primes.reserve(static_cast<std::size_t>(
        static_cast<double>(limit) / std::log(static_cast<double>(limit)) * 1.1));
    std::vector<uint8_t> segment(segment_size);
    std::vector<uint64_t> next(base.size());
    for (std::size_t k = 0; k < base.size(); ++k)
        next[k] = uint64_t{base[k]} * base[k];

    for (uint64_t low = 2; low <= limit; low += segment_size) {
        const uint64_t high = std::min(low + segment_size - 1, limit);
        std::fill(segment.begin(), segment.begin() + (high - low + 1), 1);
        for (std::size_t k = 0; k < base.size(); ++k) {
            const uint64_t p = base[k];
            if (p * p > high) break;
            uint64_t j = next[k];
            for (; j <= high; j += p) segment[j - low] = 0;
            next[k] = j;
        }
        for (uint64_t n = low; n <= high; ++n)
            if (segment[n - low]) primes.push_back(static_cast<uint32_t>(n));
    }
    return PrimeTable(limit, std::move(primes));
}

struct CrtResult {
    cpp_int value;   // unique representative in [0, modulus)
    cpp_int modulus; // product of the input primes
};

/// Combine residues modulo pairwise distinct primes. Arbitrary precision: the
/// modulus outgrows 64 bits quickly.
inline CrtResult crt_combine(const std::vector<std::pair<uint64_t, uint64_t>>& residues) {
    {
        std::vector<uint64_t> ps;
        ps.reserve(residues.size());
        for (const auto& [r, p] : residues) {
            (void)r;
            if (p < 2) throw error("crt_combine: modulus " + std::to_string(p) + " is not prime");
            ps.push_back(p);
        }
        std::sort(ps.begin(), ps.end());
        if (std::adjacent_find(ps.begin(), ps.end()) != ps.end())
            throw error("crt_combine: duplicate prime");
    }
    cpp_int x = 0, m = 1;
    for (const auto& [r, p] : residues) {
        const uint64_t rp = r % p;
        // Garner step: x stays the combined residue mod m
        const uint64_t m_mod_p = static_cast<uint64_t>(m % p);
        const uint64_t x_mod_p = static_cast<uint64_t>(x % p);
        const uint64_t t = mulmod((rp + p - x_mod_p) % p, invmod(m_mod_p, p), p);
        x += m * t;
        m *= p;
    }
    return {std::move(x), std::move(m)};
}

/// tau(d), the number of positive divisors
inline uint64_t divisor_count(uint64_t d) {
    if (d == 0) throw error("divisor_count: d must be positive");
    uint64_t count = 1;
    for (uint64_t q = 2; q * q <= d; ++q) {
        if (d % q) continue;
        uint64_t e = 0;
        while (d % q == 0) { d /= q; ++e; }
        count *= e + 1;
    }
    if (d > 1) count *= 2;
    return count;
}

/// Euler totient
inline uint64_t euler_phi(uint64_t d) {
    if (d == 0) throw error("euler_phi: d must be positive");
    uint64_t phi = d;
    for (uint64_t q = 2; q * q <= d; ++q) {
        if (d % q) continue;
        while (d % q == 0) d /= q;
        phi -= phi / q;
    }
    if (d > 1) phi -= phi / d;
    return phi;
}

} // namespace arith
} // namespace polyjac

#endif
