#ifndef POLYJAC_ASYMPTOTICS_HPP
#define POLYJAC_ASYMPTOTICS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "polyjac/arith.hpp"
#include "polyjac/factorization.hpp"
#include "polyjac/parallel.hpp"
#include "polyjac/polynomials.hpp"

namespace polyjac {

/// Partial sums of w_p/p over primes p <= X at each checkpoint X.
struct PartialSumSeries {
    std::string weight_kind;         // "max_preimage" or "root_count"
    std::vector<uint64_t> checkpoints;
    std::vector<double> sums;
};

struct MEstimate {
    double slope = 0;
    double intercept = 0;
    uint64_t window_lo = 0;
    uint64_t window_hi = 0;
};

// elementary-step budget for the generic per-prime enumeration
constexpr uint64_t kGenericMpBudget = 5'000'000'000ull;

namespace asymdetail {

inline void check_ascending(std::span<const uint64_t> checkpoints) {
    for (std::size_t i = 1; i < checkpoints.size(); ++i)
        if (checkpoints[i] <= checkpoints[i - 1])
            throw error("checkpoints must be strictly ascending");
}

// weights w_p for all primes in the table, in table order
inline std::vector<uint32_t> mp_weights(const IntPolynomial& f, const arith::PrimeTable& table,
                                        uint64_t budget, unsigned threads) {
    if (f.degree() < 1) throw error("max-preimage weights need a non-constant polynomial");
    const auto& primes = table.primes();
    std::vector<uint32_t> weights(primes.size());
    if (const auto power = f.as_power_map()) {
        const auto [c, d] = *power;
        for (std::size_t i = 0; i < primes.size(); ++i) {
            const uint64_t p = primes[i];
            weights[i] = (c % static_cast<int64_t>(p) == 0)
                             ? 0
                             : static_cast<uint32_t>(power_preimage_closed_form(d, p));
        }
        return weights;
    }
    uint64_t cost = 0;
    for (uint32_t p : primes) cost += p;
    if (cost > budget)
        throw error("generic max-preimage enumeration needs " + std::to_string(cost) +
                    " steps, over the budget " + std::to_string(budget) +
                    "; only power maps go higher");
    parallel_chunks(0, primes.size(), resolve_thread_count(threads),
                    [&](unsigned, uint64_t lo, uint64_t hi) {
                        for (uint64_t i = lo; i < hi; ++i)
                            weights[i] = static_cast<uint32_t>(max_preimage(f, primes[i]).max_count);
                    });
    return weights;
}

inline std::vector<uint32_t> root_weights(const IntPolynomial& q, const arith::PrimeTable& table,
                                          unsigned threads) {
    const auto& primes = table.primes();
    std::vector<uint32_t> weights(primes.size());
    parallel_chunks(0, primes.size(), resolve_thread_count(threads),
                    [&](unsigned, uint64_t lo, uint64_t hi) {
                        for (uint64_t i = lo; i < hi; ++i)
                            weights[i] = static_cast<uint32_t>(root_count_mod_p(q, primes[i]));
                    });
    return weights;
}

// Kahan accumulation in ascending-prime order; deterministic regardless of
// how the weights were computed.
inline PartialSumSeries accumulate_series(std::string weight_kind, const arith::PrimeTable& table,
                                          std::span<const uint32_t> weights,
                                          std::span<const uint64_t> checkpoints) {
    PartialSumSeries series;
    series.weight_kind = std::move(weight_kind);
    series.checkpoints.assign(checkpoints.begin(), checkpoints.end());
    series.sums.resize(checkpoints.size());
    long double sum = 0.0L, comp = 0.0L;
    std::size_t next = 0;
    const auto& primes = table.primes();
    for (std::size_t i = 0; i <= primes.size(); ++i) {
        const uint64_t p = i < primes.size() ? primes[i] : ~uint64_t{0};
        while (next < checkpoints.size() && checkpoints[next] < p)
            series.sums[next++] = static_cast<double>(sum);
        if (i == primes.size()) break;
        const long double term = static_cast<long double>(weights[i]) / p - comp;
        const long double t = sum + term;
        comp = (t - sum) - term;
        sum = t;
    }
    return series;
}

} // namespace asymdetail

/// Partial sums of M_p(f)/p at each checkpoint. Power maps take the
/// gcd(p-1,d) closed form; anything else enumerates fibers per prime, within
/// the step budget.
inline PartialSumSeries mp_partial_sums(const IntPolynomial& f,
                                        std::span<const uint64_t> checkpoints,
                                        uint64_t budget = kGenericMpBudget, unsigned threads = 0) {
    asymdetail::check_ascending(checkpoints);
    if (checkpoints.empty()) return {"max_preimage", {}, {}};
    const arith::PrimeTable table = arith::sieve_primes(checkpoints.back());
    const auto weights = asymdetail::mp_weights(f, table, budget, threads);
    return asymdetail::accumulate_series("max_preimage", table, weights, checkpoints);
}

/// Two-point slope of the partial sums against ln ln X.
inline MEstimate estimate_M(const IntPolynomial& f, uint64_t x1, uint64_t x2,
                            uint64_t budget = kGenericMpBudget, unsigned threads = 0) {
    if (x1 >= x2 || x1 < 16) throw error("estimate_M: window must satisfy 16 <= X1 < X2");
    const std::vector<uint64_t> checkpoints{x1, x2};
    const PartialSumSeries series = mp_partial_sums(f, checkpoints, budget, threads);
    const double l1 = std::log(std::log(static_cast<double>(x1)));
    const double l2 = std::log(std::log(static_cast<double>(x2)));
    MEstimate est;
    est.slope = (series.sums[1] - series.sums[0]) / (l2 - l1);
    est.intercept = series.sums[1] - est.slope * l2;
    est.window_lo = x1;
    est.window_hi = x2;
    return est;
}

/// Arithmetic mean of M_p(f) over primes in [p_lo, p_hi].
inline double natural_average_mp(const IntPolynomial& f, uint64_t p_lo, uint64_t p_hi,
                                 uint64_t budget = kGenericMpBudget, unsigned threads = 0) {
    if (p_lo >= p_hi) throw error("natural_average_mp: empty prime range");
    const arith::PrimeTable table = arith::sieve_primes(p_hi);
    const auto weights = asymdetail::mp_weights(f, table, budget, threads);
    uint64_t total = 0, count = 0;
    const auto& primes = table.primes();
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (primes[i] < p_lo) continue;
        total += weights[i];
        ++count;
    }
    if (count == 0) throw error("natural_average_mp: no primes in range");
    return static_cast<double>(total) / static_cast<double>(count);
}

/// Partial sums of r_p(q)/p for irreducible q.
inline PartialSumSeries root_count_sums(const IntPolynomial& q,
                                        std::span<const uint64_t> checkpoints,
                                        unsigned threads = 0) {
    asymdetail::check_ascending(checkpoints);
    const FactorizationProfile profile = factor_profile(q);
    if (profile.factors.size() != 1 || profile.factors[0].multiplicity != 1)
        throw error("root_count_sums: polynomial is reducible over the rationals");
    const IntPolynomial& primitive = profile.factors[0].poly;
    if (checkpoints.empty()) return {"root_count", {}, {}};
    const arith::PrimeTable table = arith::sieve_primes(checkpoints.back());
    const auto weights = asymdetail::root_weights(primitive, table, threads);
    return asymdetail::accumulate_series("root_count", table, weights, checkpoints);
}

/// Psi(x, z): integers up to x with no prime factor above z, n = 1 included.
inline uint64_t smooth_count(uint64_t x, uint64_t z) {
    if (x == 0) return 0;
    const arith::PrimeTable table = arith::sieve_primes(std::min(x, z));
    const auto& primes = table.primes();
    // counts products of primes[i..] bounded by the running limit
    struct Rec {
        const std::vector<uint32_t>& primes;
        uint64_t operator()(uint64_t limit, std::size_t i) const {
            uint64_t total = 1; // the current product itself
            for (std::size_t j = i; j < primes.size() && primes[j] <= limit; ++j)
                total += (*this)(limit / primes[j], j);
            return total;
        }
    };
    return Rec{primes}(x, 0);
}

/// CSV rows: X, sum, lnlnX, running slope between consecutive checkpoints.
inline std::string series_to_csv(const PartialSumSeries& series) {
    std::string out = "X,sum,lnlnX,running_slope\n";
    char buf[128];
    for (std::size_t i = 0; i < series.checkpoints.size(); ++i) {
        const double lnln = std::log(std::log(static_cast<double>(series.checkpoints[i])));
        double slope = std::numeric_limits<double>::quiet_NaN();
        if (i > 0) {
            const double prev = std::log(std::log(static_cast<double>(series.checkpoints[i - 1])));
            slope = (series.sums[i] - series.sums[i - 1]) / (lnln - prev);
        }
        std::snprintf(buf, sizeof(buf), "%llu,%.12g,%.12g,%.12g",
                      static_cast<unsigned long long>(series.checkpoints[i]), series.sums[i], lnln,
                      slope);
        out += buf;
        out += '\n';
    }
    return out;
}

} // namespace polyjac

#endif
