#ifndef POLYJAC_CONSTRUCTION_HPP
#define POLYJAC_CONSTRUCTION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "polyjac/arith.hpp"
#include "polyjac/factorization.hpp"
#include "polyjac/polynomials.hpp"

namespace polyjac {

/// Tunables for the three-step residue construction.
struct ConstructionParams {
    uint64_t y = 0;
    double A = 0.9;  // z_0 = (ln y)^A; keeps the step-2 window open from y ~ 150
    double B = 10.0; // only scales the reported target formula
    std::optional<double> m_value;            // M(f) override for the formula
    uint64_t greedy_fallback_threshold = 100; // below this y, pure greedy
    uint64_t m_cap = 100'000'000;             // bound on the adaptive scan
    bool target_mode = false;
    uint64_t target_m = 0;
};

/// Residue choice x_p per prime p <= y.
using Assignment = std::map<uint64_t, uint64_t>;

struct ConstructionDiagnostics {
    uint64_t r_after_two_steps = 0;      // unsifted count in [1, m] before step 3
    uint64_t step3_primes_available = 0; // pi(y) - pi(y/2)
    uint64_t step3_primes_used = 0;
    std::optional<double> target_m_formula_value;
    std::optional<double> z0;
    std::optional<double> z1;
    bool fallback = false;
    bool capped = false;
};

/// Machine-checkable witness that j_f(P(y)) >= m: the residue assignment plus
/// one witness prime per index.
struct SieveCertificate {
    IntPolynomial poly;
    uint64_t y = 0;
    double A = 0.9;
    double B = 10.0;
    uint64_t m_cap = 0;
    std::string mode; // "adaptive" or "target"
    std::optional<uint64_t> target_m;
    uint64_t m = 0;
    Assignment assignment;
    std::vector<std::pair<uint64_t, uint64_t>> witnesses; // (i, p_i), i = 1..m
    ConstructionDiagnostics diagnostics;
};

class target_unreachable_error : public error {
public:
    target_unreachable_error(uint64_t target, uint64_t reachable)
        : error("target m " + std::to_string(target) + " unreachable; maximal reachable m is " +
                std::to_string(reachable)),
          max_reachable(reachable) {}
    uint64_t max_reachable;
};

/// The displayed target length (y/B)(ln y)^{l-1}((lnln y)^2/lnlnln y)^h
/// ((ln y lnlnln y)/(lnln y)^2)^M.
inline double target_m_formula(double y, uint32_t linear_count, uint32_t nonlinear_count, double M,
                               double B) {
    if (y < 19) throw error("target_m_formula: y must be at least 19");
    if (B <= 0 || M <= 0) throw error("target_m_formula: B and M must be positive");
    const double l1 = std::log(y);
    const double l2 = std::log(l1);
    const double l3 = std::log(l2);
    return y / B * std::pow(l1, static_cast<double>(linear_count) - 1.0) *
           std::pow(l2 * l2 / l3, static_cast<double>(nonlinear_count)) *
           std::pow(l1 * l3 / (l2 * l2), M);
}

namespace constructdetail {

struct ZBounds {
    double z0 = 0;
    double z1 = 0;
    bool below_threshold = false;
    bool degenerate = false; // z0 >= z1

    bool fallback() const { return below_threshold || degenerate; }
};

inline ZBounds compute_z(const ConstructionParams& params) {
    ZBounds b;
    if (params.y < params.greedy_fallback_threshold) {
        b.below_threshold = true;
        return b;
    }
    const double l1 = std::log(static_cast<double>(params.y));
    const double l2 = std::log(l1);
    const double l3 = std::log(l2);
    b.z0 = std::pow(l1, params.A);
    b.z1 = std::exp(l3 * l1 / (params.A * l2));
    if (b.z0 < 2)
        throw error("construction: z0 = " + std::to_string(b.z0) + " below 2; increase A");
    b.degenerate = b.z0 >= b.z1;
    return b;
}

// flat copy of an assignment for fast scanning, ascending primes
inline std::vector<std::pair<uint64_t, uint64_t>> flatten(const Assignment& a) {
    return {a.begin(), a.end()};
}

inline bool is_sifted(const IntPolynomial& f, uint64_t i,
                      const std::vector<std::pair<uint64_t, uint64_t>>& entries) {
    for (const auto& [p, xp] : entries)
        if ((xp + f.eval_mod(i, p)) % p == 0) return true;
    return false;
}

} // namespace constructdetail

/// Step 1: x_p = 0 on [2, z_0] and (z_1, y/2). In fallback mode every prime
/// p <= y/2 gets 0 instead. Primes at or above y/2 stay untouched for step 3.
inline Assignment step1_assign(const ConstructionParams& params, const arith::PrimeTable& table) {
    if (table.limit() < params.y) throw error("step1_assign: prime table does not cover y");
    const auto bounds = constructdetail::compute_z(params);
    Assignment out;
    for (uint32_t p : table.primes()) {
        if (p > params.y) break;
        if (bounds.fallback()) {
            if (2 * uint64_t{p} <= params.y) out.emplace(p, 0);
            continue;
        }
        if (2 * uint64_t{p} >= params.y) continue;
        const double pd = static_cast<double>(p);
        if (pd <= bounds.z0 || pd > bounds.z1) out.emplace(p, 0);
    }
    return out;
}

namespace constructdetail {

// step-2 residue for one prime: aim every index at the most popular non-zero
// value, or 0 when f attains none
inline uint64_t step2_residue(const IntPolynomial& f, uint64_t p) {
    const PreimageProfile mp = max_preimage(f, p);
    if (mp.max_count == 0) return 0;
    return (p - (*mp.argmax_value % p)) % p;
}

} // namespace constructdetail

/// Step 2: for primes in (z_0, z_1], point x_p at the value with the largest
/// fiber. Empty in fallback mode or when the range holds no primes.
inline Assignment step2_assign(const IntPolynomial& f, const ConstructionParams& params,
                               const arith::PrimeTable& table) {
    const auto bounds = constructdetail::compute_z(params);
    Assignment out;
    if (bounds.fallback()) return out;
    for (uint32_t p : table.primes()) {
        if (2 * uint64_t{p} >= params.y) break;
        const double pd = static_cast<double>(p);
        if (pd > bounds.z0 && pd <= bounds.z1)
            out.emplace(p, constructdetail::step2_residue(f, p));
    }
    return out;
}

/// Indices in [1, m] untouched by the assignment.
inline std::vector<uint64_t> unsifted_after(const IntPolynomial& f, const Assignment& assignment,
                                            uint64_t m) {
    const auto entries = constructdetail::flatten(assignment);
    std::vector<uint64_t> out;
    for (uint64_t i = 1; i <= m; ++i)
        if (!constructdetail::is_sifted(f, i, entries)) out.push_back(i);
    return out;
}

/// Step 3: greedy assignment of the primes in (y/2, y]. Adaptive mode first
/// fixes m as the largest value whose unsifted count fits into the pool
/// (bounded by m_cap); target mode takes params.target_m or reports the
/// maximal reachable m. Each pool prime sifts the smallest index still
/// uncovered; leftovers get x_p = 0.
inline SieveCertificate step3_greedy(const IntPolynomial& f, const ConstructionParams& params,
                                     const arith::PrimeTable& table, const Assignment& partial) {
    const auto bounds = constructdetail::compute_z(params);
    const auto entries = constructdetail::flatten(partial);

    std::vector<uint64_t> pool;
    for (uint32_t p : table.primes())
        if (2 * uint64_t{p} > params.y && p <= params.y) pool.push_back(p);

    // adaptive scan: pending unsifted indices while they still fit the pool
    const auto adaptive_scan = [&](std::vector<uint64_t>& pending, bool& capped) -> uint64_t {
        for (uint64_t i = 1; i <= params.m_cap; ++i) {
            if (constructdetail::is_sifted(f, i, entries)) continue;
            pending.push_back(i);
            if (pending.size() > pool.size()) {
                pending.pop_back();
                return i - 1;
            }
        }
        capped = true;
        return params.m_cap;
    };

    SieveCertificate cert;
    cert.poly = f;
    cert.y = params.y;
    cert.A = params.A;
    cert.B = params.B;
    cert.m_cap = params.m_cap;
    cert.mode = params.target_mode ? "target" : "adaptive";
    if (params.target_mode) cert.target_m = params.target_m;

    std::vector<uint64_t> pending;
    if (params.target_mode) {
        pending = unsifted_after(f, partial, params.target_m);
        if (pending.size() > pool.size()) {
            std::vector<uint64_t> reachable_pending;
            bool capped = false;
            const uint64_t reachable = adaptive_scan(reachable_pending, capped);
            throw target_unreachable_error(params.target_m, reachable);
        }
        cert.m = params.target_m;
    } else {
        bool capped = false;
        cert.m = adaptive_scan(pending, capped);
        cert.diagnostics.capped = capped;
    }

    cert.assignment = partial;
    std::vector<std::pair<uint64_t, uint64_t>> new_entries;
    std::size_t next_target = 0;
    uint64_t used = 0;
    for (uint64_t p : pool) {
        while (next_target < pending.size() &&
               constructdetail::is_sifted(f, pending[next_target], new_entries))
            ++next_target;
        if (next_target >= pending.size()) {
            cert.assignment.emplace(p, 0); // leftover
            continue;
        }
        const uint64_t i = pending[next_target];
        const uint64_t xp = (p - f.eval_mod(i, p)) % p;
        cert.assignment.emplace(p, xp);
        new_entries.emplace_back(p, xp);
        ++next_target;
        ++used;
    }

    cert.diagnostics.r_after_two_steps = pending.size();
    cert.diagnostics.step3_primes_available = pool.size();
    cert.diagnostics.step3_primes_used = used;
    cert.diagnostics.fallback = bounds.fallback();
    if (!bounds.below_threshold) {
        cert.diagnostics.z0 = bounds.z0;
        cert.diagnostics.z1 = bounds.z1;
    }

    // witness primes, smallest first for determinism
    const auto full = constructdetail::flatten(cert.assignment);
    cert.witnesses.reserve(cert.m);
    for (uint64_t i = 1; i <= cert.m; ++i) {
        uint64_t witness = 0;
        for (const auto& [p, xp] : full) {
            if ((xp + f.eval_mod(i, p)) % p == 0) {
                witness = p;
                break;
            }
        }
        if (witness == 0) throw error("step3_greedy: internal: index " + std::to_string(i) +
                                      " left unsifted");
        cert.witnesses.emplace_back(i, witness);
    }
    return cert;
}

/// The full three-step construction. The factorization profile feeds only the
/// reported target formula; pass one explicitly for degree > 8.
inline SieveCertificate construct_witness(const IntPolynomial& f, const ConstructionParams& params,
                                          const std::optional<FactorizationProfile>& profile = {}) {
    if (f.degree() < 1) throw error("construct_witness: polynomial must be non-constant");
    if (params.y < 2) throw error("construct_witness: y must be at least 2");
    const arith::PrimeTable table = arith::sieve_primes(params.y);

    Assignment partial = step1_assign(params, table);
    for (const auto& [p, xp] : step2_assign(f, params, table)) {
        if (!partial.emplace(p, xp).second)
            throw error("construct_witness: internal: step ranges overlap at p = " +
                        std::to_string(p));
    }
    SieveCertificate cert = step3_greedy(f, params, table, partial);

    if (params.y >= 19) {
        std::optional<FactorizationProfile> prof = profile;
        if (!prof) prof = factor_profile(f); // throws above degree 8: supply one
        double m_value;
        if (params.m_value) {
            m_value = *params.m_value;
        } else if (const auto power = f.as_power_map()) {
            m_value = static_cast<double>(arith::divisor_count(power->second));
        } else {
            m_value = static_cast<double>(f.degree()); // generic polynomials
        }
        cert.diagnostics.target_m_formula_value =
            target_m_formula(static_cast<double>(params.y), prof->linear_count,
                             prof->nonlinear_count, m_value, params.B);
    }
    return cert;
}

struct VerifyReport {
    bool ok = true;
    std::vector<std::string> reasons;

    void fail(std::string reason) {
        ok = false;
        if (reasons.size() < 32) reasons.push_back(std::move(reason));
    }
};

/// Recompute everything the certificate claims: primality and range of the
/// assignment, exact coverage of [1, m], and every witness congruence.
inline VerifyReport verify_certificate(const SieveCertificate& cert, const IntPolynomial& f,
                                       uint64_t y) {
    VerifyReport report;
    const arith::PrimeTable table = arith::sieve_primes(y);
    for (const auto& [p, xp] : cert.assignment) {
        if (p > y) report.fail("assignment prime " + std::to_string(p) + " exceeds y");
        if (!table.contains(p)) report.fail("assignment key " + std::to_string(p) + " is not prime");
        if (xp >= p) report.fail("residue " + std::to_string(xp) + " out of range mod " +
                                 std::to_string(p));
    }
    if (cert.witnesses.size() != cert.m)
        report.fail("witness list length " + std::to_string(cert.witnesses.size()) +
                    " does not match m = " + std::to_string(cert.m));
    for (std::size_t k = 0; k < cert.witnesses.size(); ++k) {
        const auto [i, p] = cert.witnesses[k];
        if (i != k + 1) {
            report.fail("witness index " + std::to_string(i) + " at position " + std::to_string(k));
            break;
        }
        const auto it = cert.assignment.find(p);
        if (it == cert.assignment.end()) {
            report.fail("witness prime " + std::to_string(p) + " for i = " + std::to_string(i) +
                        " has no assigned residue");
            continue;
        }
        if ((it->second + f.eval_mod(i, p)) % p != 0)
            report.fail("witness congruence fails at i = " + std::to_string(i) + ", p = " +
                        std::to_string(p));
    }
    return report;
}

// ---- certificate (de)serialization ----------------------------------------

// hand-rolled writer: pair arrays stay on one line each
inline std::string serialize_certificate(const SieveCertificate& cert) {
    const auto num = [](auto v) { return nlohmann::json(v).dump(); };
    const auto opt = [&num](const std::optional<double>& v) {
        return v ? num(*v) : std::string("null");
    };
    std::string out = "{\n";
    out += "  \"poly\": " + nlohmann::json(cert.poly.coefficients()).dump() + ",\n";
    out += "  \"y\": " + num(cert.y) + ",\n";
    out += "  \"params\": {\"A\": " + num(cert.A) + ", \"B\": " + num(cert.B) +
           ", \"m_cap\": " + num(cert.m_cap) + ", \"mode\": \"" + cert.mode + "\"";
    if (cert.target_m) out += ", \"target_m\": " + num(*cert.target_m);
    out += "},\n";
    out += "  \"m\": " + num(cert.m) + ",\n";
    out += "  \"assignment\": [";
    bool first = true;
    for (const auto& [p, xp] : cert.assignment) {
        out += first ? "\n    " : ",\n    ";
        out += "[" + num(p) + "," + num(xp) + "]";
        first = false;
    }
    out += first ? "],\n" : "\n  ],\n";
    out += "  \"witnesses\": [";
    first = true;
    for (const auto& [i, p] : cert.witnesses) {
        out += first ? "\n    " : ",\n    ";
        out += "[" + num(i) + "," + num(p) + "]";
        first = false;
    }
    out += first ? "],\n" : "\n  ],\n";
    out += "  \"diagnostics\": {\n";
    out += "    \"R_after_two_steps\": " + num(cert.diagnostics.r_after_two_steps) + ",\n";
    out += "    \"step3_primes_available\": " + num(cert.diagnostics.step3_primes_available) + ",\n";
    out += "    \"step3_primes_used\": " + num(cert.diagnostics.step3_primes_used) + ",\n";
    out += "    \"target_m_formula_value\": " + opt(cert.diagnostics.target_m_formula_value) + ",\n";
    out += "    \"z0\": " + opt(cert.diagnostics.z0) + ",\n";
    out += "    \"z1\": " + opt(cert.diagnostics.z1) + ",\n";
    out += std::string("    \"fallback\": ") + (cert.diagnostics.fallback ? "true" : "false") + ",\n";
    out += std::string("    \"capped\": ") + (cert.diagnostics.capped ? "true" : "false") + "\n";
    out += "  }\n}\n";
    return out;
}

inline SieveCertificate parse_certificate(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw error(std::string("certificate parse: ") + e.what());
    }
    try {
        SieveCertificate cert;
        cert.poly = IntPolynomial(j.at("poly").get<std::vector<int64_t>>());
        cert.y = j.at("y").get<uint64_t>();
        const auto& params = j.at("params");
        cert.A = params.at("A").get<double>();
        cert.B = params.at("B").get<double>();
        cert.m_cap = params.at("m_cap").get<uint64_t>();
        cert.mode = params.at("mode").get<std::string>();
        if (params.contains("target_m")) cert.target_m = params.at("target_m").get<uint64_t>();
        cert.m = j.at("m").get<uint64_t>();
        for (const auto& entry : j.at("assignment")) {
            if (!entry.is_array() || entry.size() != 2)
                throw error("certificate parse: malformed assignment entry");
            const uint64_t p = entry[0].get<uint64_t>();
            if (!cert.assignment.emplace(p, entry[1].get<uint64_t>()).second)
                throw error("certificate parse: duplicate assignment prime " + std::to_string(p));
        }
        for (const auto& entry : j.at("witnesses")) {
            if (!entry.is_array() || entry.size() != 2)
                throw error("certificate parse: malformed witness entry");
            cert.witnesses.emplace_back(entry[0].get<uint64_t>(), entry[1].get<uint64_t>());
        }
        const auto& diag = j.at("diagnostics");
        cert.diagnostics.r_after_two_steps = diag.at("R_after_two_steps").get<uint64_t>();
        cert.diagnostics.step3_primes_available = diag.at("step3_primes_available").get<uint64_t>();
        cert.diagnostics.step3_primes_used = diag.at("step3_primes_used").get<uint64_t>();
        if (!diag.at("target_m_formula_value").is_null())
            cert.diagnostics.target_m_formula_value = diag.at("target_m_formula_value").get<double>();
        if (!diag.at("z0").is_null()) cert.diagnostics.z0 = diag.at("z0").get<double>();
        if (!diag.at("z1").is_null()) cert.diagnostics.z1 = diag.at("z1").get<double>();
        cert.diagnostics.fallback = diag.at("fallback").get<bool>();
        cert.diagnostics.capped = diag.at("capped").get<bool>();
        return cert;
    } catch (const nlohmann::json::exception& e) {
        throw error(std::string("certificate parse: ") + e.what());
    }
}

} // namespace polyjac

#endif
