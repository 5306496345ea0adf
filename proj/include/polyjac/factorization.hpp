#ifndef POLYJAC_FACTORIZATION_HPP
#define POLYJAC_FACTORIZATION_HPP

#include <algorithm>
#include <array>
#include <bitset>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyjac/arith.hpp"
#include "polyjac/polynomials.hpp"

namespace polyjac {

struct FactorEntry {
    IntPolynomial poly;     // primitive, irreducible over Q, positive leading coefficient
    uint32_t multiplicity = 1;
};

/// Complete factorization over the rationals: f = content * prod(factors^mult).
struct FactorizationProfile {
    int64_t content = 1;
    std::vector<FactorEntry> factors;
    uint32_t linear_count = 0;    // distinct degree-1 factors
    uint32_t nonlinear_count = 0; // distinct degree >= 2 factors
};

constexpr int kFactorizerMaxDegree = 8;

namespace zdetail {

using Z = cpp_int;
using ZPoly = std::vector<Z>; // ascending, trimmed

inline void trim(ZPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int deg(const ZPoly& a) { return static_cast<int>(a.size()) - 1; }

inline ZPoly from_int_poly(const IntPolynomial& f) {
    ZPoly a(f.coefficients().begin(), f.coefficients().end());
    trim(a);
    return a;
}

inline IntPolynomial to_int_poly(const ZPoly& a) {
    std::vector<int64_t> c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < std::numeric_limits<int64_t>::min() || a[i] > std::numeric_limits<int64_t>::max())
            throw error("factorizer: coefficient exceeds 64-bit range");
        c[i] = static_cast<int64_t>(a[i]);
    }
    return IntPolynomial(std::move(c));
}

inline ZPoly add(const ZPoly& a, const ZPoly& b) {
    ZPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    trim(r);
    return r;
}

inline ZPoly sub(const ZPoly& a, const ZPoly& b) {
    ZPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
}

inline ZPoly mul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

inline ZPoly scale(const ZPoly& a, const Z& c) {
    if (c == 0) return {};
    ZPoly r = a;
    for (auto& x : r) x *= c;
    return r;
}

inline ZPoly derivative(const ZPoly& a) {
    if (a.size() <= 1) return {};
    ZPoly r(a.size() - 1);
    for (std::size_t k = 1; k < a.size(); ++k) r[k - 1] = a[k] * static_cast<int64_t>(k);
    return r;
}

inline Z eval(const ZPoly& a, const Z& t) {
    Z acc = 0;
    for (std::size_t k = a.size(); k-- > 0;) acc = acc * t + a[k];
    return acc;
}

inline Z content_abs(const ZPoly& a) {
    Z g = 0;
    for (const auto& c : a) g = boost::multiprecision::gcd(g, c);
    return g < 0 ? Z(-g) : g;
}

// primitive part with positive leading coefficient
inline ZPoly primitive(const ZPoly& a) {
    if (a.empty()) return {};
    Z g = content_abs(a);
    if (a.back() < 0) g = -g;
    ZPoly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] / g;
    return r;
}

// exact division; nullopt when b does not divide a in Z[x]
inline std::optional<ZPoly> divexact(const ZPoly& a, const ZPoly& b) {
    if (b.empty()) throw error("factorizer: division by zero polynomial");
    if (a.empty()) return ZPoly{};
    if (a.size() < b.size()) return std::nullopt;
    ZPoly rem = a;
    ZPoly q(a.size() - b.size() + 1, 0);
    while (rem.size() >= b.size()) {
        const Z lead = rem.back();
        const std::size_t k = rem.size() - b.size();
        if (lead % b.back() != 0) return std::nullopt;
        const Z qk = lead / b.back();
        q[k] = qk;
        for (std::size_t i = 0; i < b.size(); ++i) rem[k + i] -= qk * b[i];
        trim(rem);
        if (rem.empty()) break;
    }
    if (!rem.empty()) return std::nullopt;
    trim(q);
    return q;
}

// pseudo-remainder of a by b (deg a >= deg b)
inline ZPoly prem(ZPoly a, const ZPoly& b) {
    const Z lb = b.back();
    while (!a.empty() && a.size() >= b.size()) {
        const Z la = a.back();
        const std::size_t shift = a.size() - b.size();
        ZPoly next(std::max<std::size_t>(a.size() - 1, b.size() + shift - 1), 0);
        // lb*a - la*x^shift*b drops the leading term
        for (std::size_t i = 0; i + 1 < a.size(); ++i) next[i] = lb * a[i];
        for (std::size_t i = 0; i + 1 < b.size(); ++i) next[shift + i] -= la * b[i];
        trim(next);
        a = std::move(next);
    }
    return a;
}

// gcd in Z[x] via primitive PRS, primitive output with positive leading coeff
inline ZPoly gcd_poly(ZPoly a, ZPoly b) {
    trim(a);
    trim(b);
    if (a.empty()) return b.empty() ? ZPoly{} : primitive(b);
    if (b.empty()) return primitive(a);
    a = primitive(a);
    b = primitive(b);
    if (a.size() < b.size()) std::swap(a, b);
    while (!b.empty()) {
        ZPoly r = prem(a, b);
        a = std::move(b);
        b = r.empty() ? ZPoly{} : primitive(r);
    }
    return a;
}

// Yun squarefree decomposition of a primitive polynomial:
// returns (squarefree part, multiplicity) pairs, parts pairwise coprime.
inline std::vector<std::pair<ZPoly, uint32_t>> squarefree_decompose(const ZPoly& a) {
    std::vector<std::pair<ZPoly, uint32_t>> parts;
    const ZPoly da = derivative(a);
    ZPoly g = gcd_poly(a, da);
    if (deg(g) == 0) {
        parts.emplace_back(primitive(a), 1);
        return parts;
    }
    ZPoly b = *divexact(a, g);
    ZPoly c = *divexact(da, g);
    ZPoly d = sub(c, derivative(b));
    uint32_t i = 1;
    while (deg(b) > 0) {
        ZPoly piece = gcd_poly(b, d);
        if (deg(piece) > 0) parts.emplace_back(piece, i);
        b = *divexact(b, piece);
        c = *divexact(d, piece);
        d = sub(c, derivative(b));
        ++i;
    }
    return parts;
}

// ---- mod-p helpers for the feasibility prefilter -------------------------

using polydetail::ModPoly;

inline int deg_of(const ModPoly& a) { return static_cast<int>(a.size()) - 1; }

inline ModPoly zpoly_mod(const ZPoly& a, uint64_t p) {
    ModPoly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        Z c = a[i] % static_cast<int64_t>(p);
        if (c < 0) c += static_cast<int64_t>(p);
        r[i] = static_cast<uint64_t>(c);
    }
    polydetail::mp_trim(r);
    return r;
}

inline ModPoly mp_divexact_monic(ModPoly a, const ModPoly& b, uint64_t p) {
    // b monic, divides a
    ModPoly q(a.size() - b.size() + 1, 0);
    while (a.size() >= b.size()) {
        const uint64_t lead = a.back();
        const std::size_t k = a.size() - b.size();
        q[k] = lead;
        for (std::size_t i = 0; i < b.size(); ++i) {
            const uint64_t sub = arith::mulmod(lead, b[i], p);
            a[k + i] = (a[k + i] + p - sub) % p;
        }
        polydetail::mp_trim(a);
        if (a.size() < b.size()) break;
    }
    return q;
}

inline ModPoly mp_pow(ModPoly base, uint64_t e, const ModPoly& mod, uint64_t p) {
    ModPoly r{1};
    base = polydetail::mp_rem(std::move(base), mod, p);
    while (e) {
        if (e & 1) r = polydetail::mp_mulmod(r, base, mod, p);
        base = polydetail::mp_mulmod(base, base, mod, p);
        e >>= 1;
    }
    return r;
}

// multiset of irreducible-factor degrees of a squarefree monic g over F_p
inline std::vector<int> distinct_degree_profile(ModPoly g, uint64_t p) {
    std::vector<int> degrees;
    ModPoly w = polydetail::mp_rem({0, 1}, g, p);
    int i = 1;
    while (deg_of(g) >= 2 * i) {
        w = mp_pow(w, p, g, p);
        ModPoly wx = w;
        if (wx.size() < 2) wx.resize(2, 0);
        wx[1] = (wx[1] + p - 1) % p;
        polydetail::mp_trim(wx);
        ModPoly gi = polydetail::mp_gcd(g, wx, p);
        if (!gi.empty() && gi.size() > 1) {
            const int count = (static_cast<int>(gi.size()) - 1) / i;
            for (int c = 0; c < count; ++c) degrees.push_back(i);
            g = mp_divexact_monic(std::move(g), gi, p);
            w = polydetail::mp_rem(std::move(w), g, p);
        }
        ++i;
    }
    if (g.size() > 1) degrees.push_back(static_cast<int>(g.size()) - 1);
    return degrees;
}

} // namespace zdetail

namespace zdetail {

// Degrees d in [1, deg/2] that some factor over Q could have, bounded by the
// subset sums of mod-p factorization degrees across several good primes.
// Empty result certifies irreducibility.
inline std::vector<int> feasible_factor_degrees(const ZPoly& g) {
    static constexpr std::array<uint64_t, 15> kProbes = {3,  5,  7,  11, 13, 17, 19, 23,
                                                         29, 31, 37, 41, 43, 47, 53};
    const int n = deg(g);
    std::bitset<16> feasible;
    for (int d = 1; d <= n / 2; ++d) feasible.set(d);
    int used = 0;
    for (uint64_t p : kProbes) {
        if (used >= 6) break;
        ModPoly gm = zpoly_mod(g, p);
        if (deg_of(gm) != n) continue; // leading coefficient vanished
        polydetail::mp_make_monic(gm, p);
        { // skip primes where the reduction is not squarefree
            ModPoly der(gm.size() - 1);
            for (std::size_t k = 1; k < gm.size(); ++k)
                der[k - 1] = arith::mulmod(gm[k], k % p, p);
            polydetail::mp_trim(der);
            const ModPoly gc = polydetail::mp_gcd(gm, der, p);
            if (gc.size() > 1) continue; // not squarefree mod p
        }
        const std::vector<int> degrees = distinct_degree_profile(gm, p);
        std::bitset<16> sums;
        sums.set(0);
        for (int d : degrees) sums |= sums << d;
        feasible &= sums;
        ++used;
        if (feasible.none()) break;
    }
    std::vector<int> out;
    for (int d = 1; d <= n / 2; ++d)
        if (feasible.test(d)) out.push_back(d);
    return out;
}

inline std::vector<Z> divisors_signed(const Z& value, bool positive_only) {
    Z av = value < 0 ? Z(-value) : value;
    if (av > Z("10000000000000000"))
        throw error("factorizer: evaluation too large for divisor enumeration; supply --factors");
    const uint64_t v = static_cast<uint64_t>(av);
    std::vector<uint64_t> divs;
    for (uint64_t i = 1; i * i <= v; ++i) {
        if (v % i) continue;
        divs.push_back(i);
        if (i != v / i) divs.push_back(v / i);
    }
    std::sort(divs.begin(), divs.end());
    std::vector<Z> out;
    out.reserve(divs.size() * (positive_only ? 1 : 2));
    for (uint64_t d : divs) {
        out.emplace_back(d);
        if (!positive_only) out.emplace_back(-Z(d));
    }
    return out;
}

// One factor of degree k through Kronecker interpolation, or nullopt.
inline std::optional<ZPoly> kronecker_find_degree(const ZPoly& g, int k) {
    // evaluation points with the smallest |g(t)|, to keep divisor lists short
    std::vector<std::pair<Z, Z>> pts; // (t, g(t))
    for (int64_t t : {0, 1, -1, 2, -2, 3, -3, 4, -4, 5, -5}) {
        pts.emplace_back(t, eval(g, t));
    }
    std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        Z aa = a.second < 0 ? Z(-a.second) : a.second;
        Z bb = b.second < 0 ? Z(-b.second) : b.second;
        return aa < bb;
    });
    pts.resize(static_cast<std::size_t>(k) + 1);

    // Lagrange scaffolding: candidate = sum d_j*N_j*(W/w_j) / W
    const std::size_t m = pts.size();
    std::vector<ZPoly> numer(m);
    std::vector<Z> denom(m);
    for (std::size_t j = 0; j < m; ++j) {
        ZPoly nj{1};
        Z wj = 1;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == j) continue;
            nj = mul(nj, ZPoly{-pts[i].first, 1});
            wj *= pts[j].first - pts[i].first;
        }
        numer[j] = std::move(nj);
        denom[j] = wj;
    }
    Z w_lcm = 1;
    for (const Z& w : denom) {
        const Z aw = w < 0 ? Z(-w) : w;
        w_lcm = w_lcm / boost::multiprecision::gcd(w_lcm, aw) * aw;
    }
    std::vector<ZPoly> basis(m); // W/w_j * N_j
    for (std::size_t j = 0; j < m; ++j) basis[j] = scale(numer[j], w_lcm / denom[j]);

    std::vector<std::vector<Z>> choices(m);
    for (std::size_t j = 0; j < m; ++j)
        choices[j] = divisors_signed(pts[j].second, /*positive_only=*/j == 0);

    std::vector<std::size_t> idx(m, 0);
    while (true) {
        ZPoly cand(static_cast<std::size_t>(k) + 1, 0);
        for (std::size_t j = 0; j < m; ++j) {
            const ZPoly& bj = basis[j];
            const Z& dj = choices[j][idx[j]];
            for (std::size_t i = 0; i < bj.size(); ++i) cand[i] += dj * bj[i];
        }
        trim(cand);
        bool ok = deg(cand) == k;
        if (ok)
            for (const Z& c : cand)
                if (c % w_lcm != 0) { ok = false; break; }
        if (ok) {
            for (Z& c : cand) c /= w_lcm;
            if (auto q = divexact(g, cand)) {
                (void)q;
                return primitive(cand);
            }
        }
        // odometer
        std::size_t j = 0;
        for (; j < m; ++j) {
            if (++idx[j] < choices[j].size()) break;
            idx[j] = 0;
        }
        if (j == m) return std::nullopt;
    }
}

// Full factorization of a squarefree primitive polynomial with no rational
// roots left to extract below degree 2.
inline void factor_squarefree(ZPoly g, std::vector<ZPoly>& out) {
    // linear factors q*x - r: r | g(0), q | leading
    while (deg(g) >= 1) {
        if (deg(g) == 1) {
            out.push_back(primitive(g));
            return;
        }
        if (g.front() == 0) { // root at 0
            out.push_back(ZPoly{0, 1});
            g.erase(g.begin());
            continue;
        }
        bool found = false;
        const std::vector<Z> rs = divisors_signed(g.front(), false);
        const std::vector<Z> qs = divisors_signed(g.back(), true);
        for (const Z& q : qs) {
            for (const Z& r : rs) {
                if (boost::multiprecision::gcd(Z(q < 0 ? -q : q), Z(r < 0 ? -r : r)) != 1) continue;
                const ZPoly lin{-r, q};
                if (auto rest = divexact(g, lin)) {
                    out.push_back(primitive(lin));
                    g = std::move(*rest);
                    found = true;
                    break;
                }
            }
            if (found) break;
        }
        if (found) continue;

        // no rational roots remain; hunt for a factor of each feasible degree
        const std::vector<int> ks = feasible_factor_degrees(g);
        bool split = false;
        for (int k : ks) {
            if (k < 2) continue;
            if (auto h = kronecker_find_degree(g, k)) {
                out.push_back(*h);
                g = *divexact(g, *h);
                split = true;
                break;
            }
        }
        if (!split) {
            out.push_back(primitive(g));
            return;
        }
    }
}

} // namespace zdetail

namespace factordetail {

inline FactorizationProfile finish_profile(int64_t content, std::vector<FactorEntry> entries) {
    std::sort(entries.begin(), entries.end(), [](const FactorEntry& a, const FactorEntry& b) {
        if (a.poly.degree() != b.poly.degree()) return a.poly.degree() < b.poly.degree();
        return a.poly.coefficients() < b.poly.coefficients();
    });
    FactorizationProfile profile;
    profile.content = content;
    profile.factors = std::move(entries);
    for (const auto& e : profile.factors) {
        if (e.poly.degree() == 1) ++profile.linear_count;
        else ++profile.nonlinear_count;
    }
    return profile;
}

} // namespace factordetail

/// Factor f into irreducibles over the rationals. Built-in engine handles
/// degree <= 8; larger inputs must arrive pre-factored (see
/// factor_profile_checked).
inline FactorizationProfile factor_profile(const IntPolynomial& f) {
    if (f.degree() < 1) throw error("factor_profile: polynomial must be non-constant");
    if (f.degree() > kFactorizerMaxDegree)
        throw error("factor_profile: degree " + std::to_string(f.degree()) +
                    " exceeds built-in limit " + std::to_string(kFactorizerMaxDegree) +
                    "; supply a factorization");

    zdetail::ZPoly a = zdetail::from_int_poly(f);
    zdetail::Z cont = zdetail::content_abs(a);
    if (a.back() < 0) cont = -cont;
    const zdetail::ZPoly pp = zdetail::primitive(a);

    std::vector<FactorEntry> entries;
    for (auto& [part, mult] : zdetail::squarefree_decompose(pp)) {
        std::vector<zdetail::ZPoly> irreducibles;
        zdetail::factor_squarefree(part, irreducibles);
        for (auto& piece : irreducibles)
            entries.push_back({zdetail::to_int_poly(piece), mult});
    }
    if (cont < std::numeric_limits<int64_t>::min() || cont > std::numeric_limits<int64_t>::max())
        throw error("factor_profile: content exceeds 64-bit range");
    return factordetail::finish_profile(static_cast<int64_t>(cont), std::move(entries));
}

/// Validate a user-supplied factorization of f and build its profile.
/// Factors of degree <= 8 are re-checked for irreducibility; larger ones are
/// only verified to multiply back to f.
inline FactorizationProfile factor_profile_checked(const IntPolynomial& f,
                                                   std::vector<FactorEntry> supplied) {
    if (f.degree() < 1) throw error("factor_profile: polynomial must be non-constant");
    if (supplied.empty()) throw error("factor_profile: empty factor list");

    std::vector<FactorEntry> entries;
    for (auto& e : supplied) {
        if (e.poly.degree() < 1) throw error("factor_profile: constant factor supplied");
        if (e.multiplicity == 0) throw error("factor_profile: zero multiplicity");
        const zdetail::ZPoly pp = zdetail::primitive(zdetail::from_int_poly(e.poly));
        entries.push_back({zdetail::to_int_poly(pp), e.multiplicity});
    }
    for (std::size_t i = 0; i < entries.size(); ++i)
        for (std::size_t j = i + 1; j < entries.size(); ++j)
            if (entries[i].poly == entries[j].poly)
                throw error("factor_profile: repeated factor; use ^k multiplicities");
    for (const auto& e : entries) {
        if (e.poly.degree() > kFactorizerMaxDegree) continue; // trusted
        const FactorizationProfile check = factor_profile(e.poly);
        if (check.factors.size() != 1 || check.factors[0].multiplicity != 1)
            throw error("factor_profile: supplied factor " + e.poly.to_coeff_string() +
                        " is reducible");
    }

    zdetail::ZPoly prod{1};
    for (const auto& e : entries)
        for (uint32_t k = 0; k < e.multiplicity; ++k)
            prod = zdetail::mul(prod, zdetail::from_int_poly(e.poly));
    const zdetail::ZPoly a = zdetail::from_int_poly(f);
    if (zdetail::deg(prod) != zdetail::deg(a))
        throw error("factor_profile: supplied factors have wrong total degree");
    zdetail::Z cont = zdetail::content_abs(a);
    if (a.back() < 0) cont = -cont;
    if (zdetail::scale(prod, cont) != a)
        throw error("factor_profile: supplied factors do not multiply back to the polynomial");
    if (cont < std::numeric_limits<int64_t>::min() || cont > std::numeric_limits<int64_t>::max())
        throw error("factor_profile: content exceeds 64-bit range");
    return factordetail::finish_profile(static_cast<int64_t>(cont), std::move(entries));
}

} // namespace polyjac

#endif
