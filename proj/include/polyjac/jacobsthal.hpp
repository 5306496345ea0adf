#ifndef POLYJAC_JACOBSTHAL_HPP
#define POLYJAC_JACOBSTHAL_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polyjac/arith.hpp"
#include "polyjac/parallel.hpp"
#include "polyjac/polynomials.hpp"

namespace polyjac {

constexpr uint64_t kDefaultPeriodBudget = 10'000'000;

/// Length of the maximal sifted run, or infinite when every index in one full
/// period is sifted.
struct RunResult {
    bool infinite = false;
    uint64_t value = 0;
};

struct JacobsthalResult {
    bool infinite = false;
    uint64_t value = 0;                 // meaningful only when !infinite
    std::optional<uint64_t> witness_x;  // smallest maximizing shift; absent when value 0
    uint64_t period = 1;                // product of the distinct primes
};

namespace jacdetail {

inline void check_distinct_primes(std::span<const uint64_t> primes) {
    std::vector<uint64_t> sorted(primes.begin(), primes.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw error("prime set contains duplicates");
    for (uint64_t p : sorted)
        if (p < 2) throw error("prime set contains " + std::to_string(p));
}

// saturating product; anything past the cap reports cap+1
inline uint64_t period_product(std::span<const uint64_t> primes, uint64_t cap) {
    uint64_t product = 1;
    for (uint64_t p : primes) {
        if (product > cap / p) return cap + 1;
        product *= p;
    }
    return product;
}

} // namespace jacdetail

/// Largest m such that every i in [1, m] is sifted: some prime k with
/// x_k + f(i) divisible by primes[k]. Infinite when the whole period [1, L]
/// is sifted (the predicate has period L = prod primes).
inline RunResult run_length(const IntPolynomial& f, std::span<const uint64_t> residues,
                            std::span<const uint64_t> primes, uint64_t scan_cap) {
    if (primes.empty()) throw error("run_length: empty prime set");
    if (residues.size() != primes.size())
        throw error("run_length: residue/prime vector size mismatch");
    jacdetail::check_distinct_primes(primes);
    const uint64_t period = jacdetail::period_product(primes, uint64_t{1} << 62);

    for (uint64_t i = 1;; ++i) {
        if (i > period) return {true, 0};
        if (i > scan_cap)
            throw error("run_length: scan cap " + std::to_string(scan_cap) +
                        " exceeded before an unsifted index; a cap >= the period " +
                        std::to_string(period) + " always resolves");
        bool sifted = false;
        for (std::size_t k = 0; k < primes.size(); ++k) {
            const uint64_t p = primes[k];
            if ((residues[k] % p + f.eval_mod(i, p)) % p == 0) {
                sifted = true;
                break;
            }
        }
        if (!sifted) return {false, i - 1};
    }
}

/// Exact j_f over the radical of N, by exhaustive search over all shifts
/// x in [0, L). The scan for one x walks i upward until the first unsifted
/// index; an x surviving a full period is an infinite witness.
inline JacobsthalResult exact_jf(const IntPolynomial& f, std::span<const uint64_t> primes,
                                 uint64_t period_budget = kDefaultPeriodBudget,
                                 unsigned threads = 0) {
    if (f.degree() < 1) throw error("exact_jf: polynomial must be non-constant");
    jacdetail::check_distinct_primes(primes);
    if (primes.empty()) return {false, 0, std::nullopt, 1};
    const uint64_t L = jacdetail::period_product(primes, uint64_t{1} << 62);
    if (L > period_budget)
        throw error("exact_jf: period " + std::to_string(L) + " exceeds budget " +
                    std::to_string(period_budget) + "; rerun with a budget of at least " +
                    std::to_string(L));

    // gcd(r, L) > 1 indicator over one period
    std::vector<uint8_t> shares_factor(L, 0);
    for (uint64_t p : primes)
        for (uint64_t j = 0; j < L; j += p) shares_factor[j] = 1;

    struct Best {
        bool infinite = false;
        uint64_t value = 0;
        std::optional<uint64_t> witness;
    };
    const unsigned t = resolve_thread_count(threads);
    std::vector<Best> chunk_best(t);

    parallel_chunks(0, L, t, [&](unsigned chunk, uint64_t lo, uint64_t hi) {
        Best best;
        for (uint64_t x = lo; x < hi; ++x) {
            uint64_t i = 1;
            for (;; ++i) {
                if (i > L) break; // full period sifted
                if (!shares_factor[(x + f.eval_mod(i, L)) % L]) break;
            }
            if (i > L) {
                best.infinite = true;
                best.witness = x;
                best.value = 0;
                break; // larger x in this chunk cannot improve
            }
            const uint64_t run = i - 1;
            if (run > best.value && !best.infinite) {
                best.value = run;
                best.witness = x;
            }
        }
        chunk_best[chunk] = best;
    });

    // chunks are ascending in x, so keeping the first chunk on ties keeps the
    // smallest witness
    Best overall;
    for (const Best& b : chunk_best) {
        if (!b.witness.has_value()) continue;
        bool take;
        if (!overall.witness.has_value()) take = true;
        else if (b.infinite != overall.infinite) take = b.infinite;
        else if (b.infinite) take = false; // both infinite: keep the earlier witness
        else take = b.value > overall.value;
        if (take) overall = b;
    }

    JacobsthalResult out;
    out.period = L;
    out.infinite = overall.infinite;
    out.value = overall.value;
    out.witness_x = overall.witness;
    if (!out.infinite && out.value == 0) out.witness_x.reset();
    return out;
}

} // namespace polyjac

#endif
