#ifndef POLYJAC_POLYNOMIALS_HPP
#define POLYJAC_POLYNOMIALS_HPP

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polyjac/arith.hpp"

namespace polyjac {

/// Integer polynomial, coefficients in ascending degree order. Trailing zeros
/// are stripped; the zero polynomial has no coefficients.
class IntPolynomial {
public:
    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<int64_t> coeffs) : c_(std::move(coeffs)) { trim(); }
    IntPolynomial(std::initializer_list<int64_t> coeffs) : c_(coeffs) { trim(); }

    /// Parse "c0,c1,...,cd" (ascending coefficients).
    static IntPolynomial parse(std::string_view text) {
        std::vector<int64_t> coeffs;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t comma = std::min(text.find(',', pos), text.size());
            std::string_view tok = text.substr(pos, comma - pos);
            while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
            while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t')) tok.remove_suffix(1);
            int64_t v = 0;
            const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc{} || ptr != tok.data() + tok.size())
                throw error("polynomial parse: bad coefficient '" + std::string(tok) + "'");
            coeffs.push_back(v);
            if (comma == text.size()) break;
            pos = comma + 1;
        }
        return IntPolynomial(std::move(coeffs));
    }

    const std::vector<int64_t>& coefficients() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    // degree; -1 for the zero polynomial
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    int64_t coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
    int64_t leading() const { return c_.empty() ? 0 : c_.back(); }
    int64_t constant_term() const { return coeff(0); }

    friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

    std::string to_coeff_string() const {
        if (c_.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(c_[i]);
        }
        return s;
    }

    /// Human-readable form, highest degree first.
    std::string to_pretty_string() const {
        if (c_.empty()) return "0";
        std::string s;
        for (std::size_t k = c_.size(); k-- > 0;) {
            const int64_t c = c_[k];
            if (c == 0 && c_.size() > 1) continue;
            if (!s.empty()) s += c < 0 ? " - " : " + ";
            else if (c < 0) s += "-";
            const uint64_t a = static_cast<uint64_t>(c < 0 ? -c : c);
            if (a != 1 || k == 0) s += std::to_string(a);
            if (k >= 1) s += "x";
            if (k >= 2) s += "^" + std::to_string(k);
        }
        return s;
    }

    uint64_t eval_mod(uint64_t x, uint64_t m) const {
        if (m == 1) return 0;
        uint64_t acc = 0;
        x %= m;
        for (std::size_t k = c_.size(); k-- > 0;) {
            const int64_t c = c_[k] % static_cast<int64_t>(m);
            const uint64_t cr = static_cast<uint64_t>(c < 0 ? c + static_cast<int64_t>(m) : c);
            acc = (arith::mulmod(acc, x, m) + cr) % m;
        }
        return acc;
    }

    IntPolynomial derivative() const {
        if (c_.size() <= 1) return IntPolynomial{};
        std::vector<int64_t> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k)
            d[k - 1] = c_[k] * static_cast<int64_t>(k);
        return IntPolynomial(std::move(d));
    }

    IntPolynomial plus_constant(int64_t n) const {
        std::vector<int64_t> d = c_;
        if (d.empty()) d.push_back(n);
        else d[0] += n;
        return IntPolynomial(std::move(d));
    }

    /// c*x^d with c != 0; nullopt otherwise.
    std::optional<std::pair<int64_t, uint32_t>> as_power_map() const {
        if (c_.empty()) return std::nullopt;
        for (std::size_t k = 0; k + 1 < c_.size(); ++k)
            if (c_[k] != 0) return std::nullopt;
        return std::make_pair(c_.back(), static_cast<uint32_t>(c_.size() - 1));
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<int64_t> c_;
};

inline uint64_t evaluate_mod(const IntPolynomial& f, uint64_t x, uint64_t p) {
    return f.eval_mod(x, p);
}

inline IntPolynomial shift_constant(const IntPolynomial& f, int64_t n) {
    return f.plus_constant(n);
}

/// Largest fiber of f over F_p among the non-zero target values.
/// max_count = 0 (argmax absent) when f attains no non-zero value at all.
struct PreimageProfile {
    uint64_t prime = 0;
    uint64_t max_count = 0;
    std::optional<uint64_t> argmax_value; // smallest attaining value
};

// hard cap on the O(p) histogram
constexpr uint64_t kMaxPreimageEnumLimit = uint64_t{1} << 26;

/// Full enumeration of f over F_p. Deliberately never routed through the
/// power-map closed form: this is the oracle side of that identity.
inline PreimageProfile max_preimage(const IntPolynomial& f, uint64_t p) {
    if (p < 2) throw error("max_preimage: p must be prime");
    if (p > kMaxPreimageEnumLimit)
        throw error("max_preimage: p " + std::to_string(p) + " beyond enumeration limit " +
                    std::to_string(kMaxPreimageEnumLimit));
    std::vector<uint32_t> histogram(p, 0);
    for (uint64_t x = 0; x < p; ++x) ++histogram[f.eval_mod(x, p)];
    PreimageProfile out;
    out.prime = p;
    for (uint64_t y = 1; y < p; ++y) {
        if (histogram[y] > out.max_count) {
            out.max_count = histogram[y];
            out.argmax_value = y;
        }
    }
    return out;
}

/// M_p(x^d) = gcd(p-1, d)
inline uint64_t power_preimage_closed_form(uint64_t d, uint64_t p) {
    if (d == 0) throw error("power_preimage_closed_form: d must be positive");
    if (p < 2) throw error("power_preimage_closed_form: p must be prime");
    return std::gcd(p - 1, d);
}

namespace polydetail {

// dense polynomial over F_p, ascending, trimmed
using ModPoly = std::vector<uint64_t>;

inline void mp_trim(ModPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline ModPoly poly_mod_p(const IntPolynomial& q, uint64_t p) {
    ModPoly a(q.coefficients().size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int64_t c = q.coefficients()[i] % static_cast<int64_t>(p);
        a[i] = static_cast<uint64_t>(c < 0 ? c + static_cast<int64_t>(p) : c);
    }
    mp_trim(a);
    return a;
}

inline void mp_make_monic(ModPoly& a, uint64_t p) {
    if (a.empty() || a.back() == 1) return;
    const uint64_t inv = arith::invmod(a.back(), p);
    for (auto& c : a) c = arith::mulmod(c, inv, p);
}

// a mod b, b monic
inline ModPoly mp_rem(ModPoly a, const ModPoly& b, uint64_t p) {
    const std::size_t db = b.size() - 1;
    while (a.size() >= b.size()) {
        const uint64_t lead = a.back();
        const std::size_t shift = a.size() - b.size();
        if (lead != 0)
            for (std::size_t i = 0; i < db; ++i) {
                const uint64_t sub = arith::mulmod(lead, b[i], p);
                a[shift + i] = (a[shift + i] + p - sub) % p;
            }
        a.pop_back();
        mp_trim(a);
        if (a.size() < b.size()) break;
    }
    return a;
}

inline ModPoly mp_gcd(ModPoly a, ModPoly b, uint64_t p) {
    mp_trim(a);
    mp_trim(b);
    while (!b.empty()) {
        mp_make_monic(b, p);
        a = mp_rem(std::move(a), b, p);
        std::swap(a, b);
    }
    mp_make_monic(a, p);
    return a;
}

inline ModPoly mp_mulmod(const ModPoly& a, const ModPoly& b, const ModPoly& mod, uint64_t p) {
    if (a.empty() || b.empty()) return {};
    ModPoly prod(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            prod[i + j] = (prod[i + j] + arith::mulmod(a[i], b[j], p)) % p;
    }
    mp_trim(prod);
    return mp_rem(std::move(prod), mod, p);
}

// x^e mod (monic q) over F_p
inline ModPoly mp_pow_x(uint64_t e, const ModPoly& q, uint64_t p) {
    ModPoly result{1};
    ModPoly base = mp_rem({0, 1}, q, p);
    while (e) {
        if (e & 1) result = mp_mulmod(result, base, q, p);
        base = mp_mulmod(base, base, q, p);
        e >>= 1;
    }
    return result;
}

inline uint64_t root_count_enum(const IntPolynomial& q, uint64_t p) {
    uint64_t roots = 0;
    for (uint64_t x = 0; x < p; ++x)
        if (q.eval_mod(x, p) == 0) ++roots;
    return roots;
}

// distinct roots via deg gcd(x^p - x, q) in F_p[x]
inline uint64_t root_count_gcd(const IntPolynomial& q, uint64_t p) {
    ModPoly qm = poly_mod_p(q, p);
    if (qm.empty()) throw error("root_count: polynomial vanishes mod " + std::to_string(p));
    if (qm.size() == 1) return 0;
    if (qm.size() == 2) return 1;
    mp_make_monic(qm, p);
    ModPoly xp = mp_pow_x(p, qm, p);
    // x^p - x
    ModPoly diff = xp;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    mp_trim(diff);
    if (diff.empty()) return qm.size() - 1; // q splits completely
    const ModPoly g = mp_gcd(qm, std::move(diff), p);
    return g.empty() ? 0 : g.size() - 1;
}

constexpr uint64_t kRootEnumCutoff = 64;

} // namespace polydetail

/// Number of distinct roots of q in F_p. Modular-exponentiation fast path,
/// with direct enumeration below a small cutoff. q must not vanish mod p.
inline uint64_t root_count_mod_p(const IntPolynomial& q, uint64_t p) {
    if (p < 2) throw error("root_count_mod_p: p must be prime");
    if (polydetail::poly_mod_p(q, p).empty())
        throw error("root_count_mod_p: polynomial vanishes mod " + std::to_string(p));
    return p < polydetail::kRootEnumCutoff ? polydetail::root_count_enum(q, p)
                                           : polydetail::root_count_gcd(q, p);
}

} // namespace polyjac

#endif
