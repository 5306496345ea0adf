#ifndef POLYJAC_GROUP_ACTIONS_HPP
#define POLYJAC_GROUP_ACTIONS_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "polyjac/arith.hpp"
#include "polyjac/rational.hpp"

namespace polyjac {

/// Permutation of {0..n-1} stored as an image list.
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::vector<uint32_t> images) : img_(std::move(images)) {
        std::vector<uint8_t> seen(img_.size(), 0);
        for (uint32_t v : img_) {
            if (v >= img_.size() || seen[v]) throw error("Permutation: image list is not a bijection");
            seen[v] = 1;
        }
    }

    static Permutation identity(uint32_t n) {
        std::vector<uint32_t> img(n);
        for (uint32_t i = 0; i < n; ++i) img[i] = i;
        return Permutation(std::move(img));
    }

    uint32_t degree() const { return static_cast<uint32_t>(img_.size()); }
    uint32_t operator()(uint32_t x) const { return img_[x]; }
    const std::vector<uint32_t>& images() const { return img_; }

    /// this∘other: apply other first.
    Permutation after(const Permutation& other) const {
        std::vector<uint32_t> img(img_.size());
        for (uint32_t i = 0; i < img_.size(); ++i) img[i] = img_[other.img_[i]];
        Permutation p;
        p.img_ = std::move(img);
        return p;
    }

    Permutation inverse() const {
        std::vector<uint32_t> img(img_.size());
        for (uint32_t i = 0; i < img_.size(); ++i) img[img_[i]] = i;
        Permutation p;
        p.img_ = std::move(img);
        return p;
    }

    friend bool operator==(const Permutation&, const Permutation&) = default;
    friend auto operator<=>(const Permutation& a, const Permutation& b) {
        return a.img_ <=> b.img_;
    }

private:
    std::vector<uint32_t> img_;
};

// group product hg: apply g, then h
inline Permutation compose(const Permutation& h, const Permutation& g) { return h.after(g); }

inline uint64_t fixed_point_count(const Permutation& g) {
    uint64_t count = 0;
    for (uint32_t i = 0; i < g.degree(); ++i)
        if (g(i) == i) ++count;
    return count;
}

/// Breadth-first closure of a generator set under composition. Throws once
/// the element count would exceed max_order, reporting the partial size.
inline std::vector<Permutation> close_generators(std::span<const Permutation> gens,
                                                 std::size_t max_order) {
    if (gens.empty()) throw error("close_generators: no generators");
    const uint32_t n = gens.front().degree();
    for (const auto& g : gens)
        if (g.degree() != n) throw error("close_generators: mixed degrees");

    std::set<Permutation> seen;
    std::deque<Permutation> queue;
    seen.insert(Permutation::identity(n));
    queue.push_back(Permutation::identity(n));
    while (!queue.empty()) {
        const Permutation cur = std::move(queue.front());
        queue.pop_front();
        for (const auto& g : gens) {
            Permutation next = compose(g, cur);
            if (seen.insert(next).second) {
                if (seen.size() > max_order)
                    throw error("close_generators: order exceeds cap " + std::to_string(max_order) +
                                " (at least " + std::to_string(seen.size()) + " elements)");
                queue.push_back(std::move(next));
            }
        }
    }
    return {seen.begin(), seen.end()};
}

inline std::vector<Permutation> close_generators(const std::vector<Permutation>& gens,
                                                 std::size_t max_order) {
    return close_generators(std::span<const Permutation>(gens), max_order);
}

/// A finite group with a distinguished subgroup, acting on {0..degree-1}.
/// Element lists are sorted and closed under the group operations.
struct ActionInstance {
    uint32_t degree = 0;
    std::vector<Permutation> group;
    std::vector<Permutation> subgroup;
    std::string label;
};

namespace groupdetail {

inline bool element_of(const std::vector<Permutation>& sorted, const Permutation& g) {
    return std::binary_search(sorted.begin(), sorted.end(), g);
}

inline std::size_t index_of(const std::vector<Permutation>& sorted, const Permutation& g) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), g);
    if (it == sorted.end() || *it != g) throw error("group is not closed under composition");
    return static_cast<std::size_t>(it - sorted.begin());
}

} // namespace groupdetail

inline void validate_instance(const ActionInstance& inst) {
    if (inst.group.empty() || inst.subgroup.empty())
        throw error("instance: empty group or subgroup");
    for (const auto& g : inst.group)
        if (g.degree() != inst.degree) throw error("instance: degree mismatch");
    if (!std::is_sorted(inst.group.begin(), inst.group.end()) ||
        !std::is_sorted(inst.subgroup.begin(), inst.subgroup.end()))
        throw error("instance: element lists must be sorted");
    if (!groupdetail::element_of(inst.group, Permutation::identity(inst.degree)))
        throw error("instance: group lacks the identity");
    if (!groupdetail::element_of(inst.subgroup, Permutation::identity(inst.degree)))
        throw error("instance: subgroup lacks the identity");
    for (const auto& h : inst.subgroup)
        if (!groupdetail::element_of(inst.group, h)) throw error("instance: H is not contained in G");
    for (const auto& a : inst.subgroup)
        for (const auto& b : inst.subgroup)
            if (!groupdetail::element_of(inst.subgroup, compose(a, b)))
                throw error("instance: H is not closed under composition");
    if (inst.group.size() % inst.subgroup.size() != 0)
        throw error("instance: |H| does not divide |G|");
}

inline ActionInstance make_instance(std::vector<Permutation> group, std::vector<Permutation> subgroup,
                                    std::string label = {}) {
    std::sort(group.begin(), group.end());
    std::sort(subgroup.begin(), subgroup.end());
    ActionInstance inst;
    inst.degree = group.front().degree();
    inst.group = std::move(group);
    inst.subgroup = std::move(subgroup);
    inst.label = std::move(label);
    validate_instance(inst);
    return inst;
}

/// Right cosets Hg with the maximal fixed-point count over each coset.
/// Representatives are the smallest undiscovered elements in sort order.
inline std::vector<std::pair<Permutation, uint64_t>> coset_max_profile(const ActionInstance& inst) {
    validate_instance(inst);
    std::vector<uint8_t> visited(inst.group.size(), 0);
    std::vector<std::pair<Permutation, uint64_t>> profile;
    for (std::size_t i = 0; i < inst.group.size(); ++i) {
        if (visited[i]) continue;
        const Permutation& rep = inst.group[i];
        uint64_t best = 0;
        for (const auto& h : inst.subgroup) {
            const Permutation e = compose(h, rep);
            visited[groupdetail::index_of(inst.group, e)] = 1;
            best = std::max(best, fixed_point_count(e));
        }
        profile.emplace_back(rep, best);
    }
    return profile;
}

/// m(G,H;X) via the coset reduction: the inner max depends only on the coset
/// Hg, so the double sum collapses to an average over cosets.
inline Rational m_invariant_cosets(const ActionInstance& inst) {
    const auto profile = coset_max_profile(inst);
    int64_t sum = 0;
    for (const auto& [rep, best] : profile) sum += static_cast<int64_t>(best);
    return Rational(sum, static_cast<int64_t>(profile.size()));
}

/// m(G,H;X) exactly as defined: average over g of max_{h in H} |X^{hg}|.
inline Rational m_invariant_double_loop(const ActionInstance& inst) {
    validate_instance(inst);
    int64_t sum = 0;
    for (const auto& g : inst.group) {
        uint64_t best = 0;
        for (const auto& h : inst.subgroup)
            best = std::max(best, fixed_point_count(compose(h, g)));
        sum += static_cast<int64_t>(best);
    }
    return Rational(sum, static_cast<int64_t>(inst.group.size()));
}

inline Rational m_invariant(const ActionInstance& inst) { return m_invariant_cosets(inst); }

inline Rational burnside_average(std::span<const Permutation> elements) {
    if (elements.empty()) throw error("burnside_average: empty element list");
    int64_t sum = 0;
    for (const auto& g : elements) sum += static_cast<int64_t>(fixed_point_count(g));
    return Rational(sum, static_cast<int64_t>(elements.size()));
}

inline Rational burnside_average(const std::vector<Permutation>& elements) {
    return burnside_average(std::span<const Permutation>(elements));
}

inline bool is_transitive(std::span<const Permutation> elements) {
    if (elements.empty()) throw error("is_transitive: empty element list");
    const uint32_t n = elements.front().degree();
    std::vector<uint8_t> reached(n, 0);
    std::deque<uint32_t> queue{0};
    reached[0] = 1;
    uint32_t count = 1;
    while (!queue.empty()) {
        const uint32_t x = queue.front();
        queue.pop_front();
        for (const auto& g : elements) {
            const uint32_t y = g(x);
            if (!reached[y]) {
                reached[y] = 1;
                ++count;
                queue.push_back(y);
            }
        }
    }
    return count == n;
}

inline bool is_transitive(const std::vector<Permutation>& elements) {
    return is_transitive(std::span<const Permutation>(elements));
}

inline bool is_normal(const ActionInstance& inst) {
    validate_instance(inst);
    for (const auto& g : inst.group) {
        const Permutation gi = g.inverse();
        for (const auto& h : inst.subgroup)
            if (!groupdetail::element_of(inst.subgroup, compose(compose(g, h), gi))) return false;
    }
    return true;
}

// ---- built-in instances ---------------------------------------------------

/// Affine maps x -> ax+b on Z/dZ (a invertible), with the translation
/// subgroup a = 1.
inline ActionInstance aff_instance(uint64_t d) {
    if (d == 0) throw error("aff_instance: d must be positive");
    if (d > 4096) throw error("aff_instance: d too large");
    std::vector<Permutation> group, subgroup;
    for (uint64_t a = 1; a <= d; ++a) {
        if (std::gcd(a % d, d) != 1 && d > 1) continue;
        for (uint64_t b = 0; b < d; ++b) {
            std::vector<uint32_t> img(d);
            for (uint64_t x = 0; x < d; ++x) img[x] = static_cast<uint32_t>((a * x + b) % d);
            Permutation p(std::move(img));
            if (a % d == 1 % d) subgroup.push_back(p);
            group.push_back(std::move(p));
        }
        if (d == 1) break;
    }
    return make_instance(std::move(group), std::move(subgroup), "aff:" + std::to_string(d));
}

namespace groupdetail {

// index of {i,j} (i<j) among the lexicographically sorted 2-subsets of {0..m-1}
inline uint32_t pair_index(uint32_t m, uint32_t i, uint32_t j) {
    if (i > j) std::swap(i, j);
    // pairs (0,1),(0,2),...,(0,m-1),(1,2),...
    return i * (2 * m - i - 1) / 2 + (j - i - 1);
}

/// Action induced on unordered pairs by a permutation of m points.
inline Permutation pairs_lift(const Permutation& sigma) {
    const uint32_t m = sigma.degree();
    std::vector<uint32_t> img(m * (m - 1) / 2);
    for (uint32_t i = 0; i < m; ++i)
        for (uint32_t j = i + 1; j < m; ++j)
            img[pair_index(m, i, j)] = pair_index(m, sigma(i), sigma(j));
    return Permutation(std::move(img));
}

/// On the 6 pairs from a 4-set: swap each pair with its complement.
inline Permutation pair_complement4() {
    std::vector<uint32_t> img(6);
    for (uint32_t i = 0; i < 4; ++i)
        for (uint32_t j = i + 1; j < 4; ++j) {
            uint32_t rest[2];
            int k = 0;
            for (uint32_t v = 0; v < 4; ++v)
                if (v != i && v != j) rest[k++] = v;
            img[pair_index(4, i, j)] = pair_index(4, rest[0], rest[1]);
        }
    return Permutation(std::move(img));
}

inline Permutation cycle(uint32_t n) {
    std::vector<uint32_t> img(n);
    for (uint32_t i = 0; i < n; ++i) img[i] = (i + 1) % n;
    return Permutation(std::move(img));
}

inline Permutation transposition(uint32_t n, uint32_t a, uint32_t b) {
    std::vector<uint32_t> img(n);
    for (uint32_t i = 0; i < n; ++i) img[i] = i;
    std::swap(img[a], img[b]);
    return Permutation(std::move(img));
}

inline Permutation three_cycle(uint32_t n) {
    std::vector<uint32_t> img(n);
    for (uint32_t i = 0; i < n; ++i) img[i] = i;
    img[0] = 1;
    img[1] = 2;
    img[2] = 0;
    return Permutation(std::move(img));
}

inline Permutation reversal(uint32_t n) {
    std::vector<uint32_t> img(n);
    for (uint32_t i = 0; i < n; ++i) img[i] = n - 1 - i;
    return Permutation(std::move(img));
}

inline Permutation from_images(std::initializer_list<uint32_t> img) {
    return Permutation(std::vector<uint32_t>(img));
}

} // namespace groupdetail

/// S4 x Z/2 on the six unordered pairs of a 4-set: S4 relabels, the central
/// involution complements. H is A4 (paired with the identity).
inline ActionInstance s4xc2_pairs_instance() {
    using namespace groupdetail;
    const std::vector<Permutation> gens{
        pairs_lift(transposition(4, 0, 1)),
        pairs_lift(cycle(4)),
        pair_complement4(),
    };
    const std::vector<Permutation> hgens{
        pairs_lift(three_cycle(4)),
        pairs_lift(compose(transposition(4, 0, 1), transposition(4, 2, 3))),
    };
    auto group = close_generators(gens, 200);
    auto subgroup = close_generators(hgens, 200);
    return make_instance(std::move(group), std::move(subgroup), "s4xc2-pairs");
}

/// Instances addressable by name: "aff:d" and "s4xc2-pairs".
inline ActionInstance builtin_instance(const std::string& name) {
    if (name == "s4xc2-pairs") return s4xc2_pairs_instance();
    if (name.rfind("aff:", 0) == 0) {
        const std::string tail = name.substr(4);
        if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos)
            throw error("builtin_instance: bad aff degree in '" + name + "'");
        return aff_instance(std::stoull(tail));
    }
    throw error("builtin_instance: unknown instance '" + name + "'");
}

// ---- transitive group catalog and the non-integrality search --------------

struct CatalogGroup {
    std::string name;
    std::vector<Permutation> generators;
};

/// Seed generators for transitive groups on n points. Best effort, not a
/// classification: enough to cover the classical families plus the product
/// and affine actions relevant at degrees 6..10.
inline std::vector<CatalogGroup> transitive_catalog(uint32_t n) {
    using namespace groupdetail;
    if (n < 2 || n > 10) throw error("transitive_catalog: degree must be in [2, 10]");
    std::vector<CatalogGroup> out;
    out.push_back({"C" + std::to_string(n), {cycle(n)}});
    if (n >= 3) out.push_back({"D" + std::to_string(n), {cycle(n), reversal(n)}});
    if (n >= 3) {
        std::vector<Permutation> agens{three_cycle(n)};
        if (n % 2 == 1) {
            agens.push_back(cycle(n));
        } else if (n >= 4) {
            // even degree: cycle the points 1..n-1, fixing 0
            std::vector<uint32_t> img(n);
            img[0] = 0;
            for (uint32_t i = 1; i < n; ++i) img[i] = i % (n - 1) + 1;
            agens.push_back(Permutation(std::move(img)));
        }
        out.push_back({"A" + std::to_string(n), std::move(agens)});
        out.push_back({"S" + std::to_string(n), {cycle(n), transposition(n, 0, 1)}});
    }
    switch (n) {
    case 4:
        out.push_back({"V4", {from_images({1, 0, 3, 2}), from_images({2, 3, 0, 1})}});
        break;
    case 5:
        // 1-dimensional affine group over F5
        out.push_back({"F20", {cycle(5), from_images({0, 2, 4, 1, 3})}});
        break;
    case 6: {
        const Permutation c4 = pairs_lift(cycle(4));
        const Permutation t4 = pairs_lift(transposition(4, 0, 1));
        const Permutation a4a = pairs_lift(three_cycle(4));
        const Permutation a4b = pairs_lift(compose(transposition(4, 0, 1), transposition(4, 2, 3)));
        out.push_back({"A4-pairs", {a4a, a4b}});
        out.push_back({"S4-pairs", {c4, t4}});
        out.push_back({"S4xC2-pairs", {c4, t4, pair_complement4()}});
        // PSL(2,5) on the projective line over F5, infinity = point 5
        out.push_back({"PSL(2,5)", {from_images({1, 2, 3, 4, 0, 5}), from_images({5, 4, 2, 3, 1, 0})}});
        break;
    }
    case 7:
        out.push_back({"F21", {cycle(7), from_images({0, 2, 4, 6, 1, 3, 5})}});
        out.push_back({"F42", {cycle(7), from_images({0, 3, 6, 2, 5, 1, 4})}});
        break;
    case 8: {
        // regular representations of the order-8 groups
        out.push_back({"C2^3", {from_images({1, 0, 3, 2, 5, 4, 7, 6}),
                                from_images({2, 3, 0, 1, 6, 7, 4, 5}),
                                from_images({4, 5, 6, 7, 0, 1, 2, 3})}});
        out.push_back({"C4xC2", {from_images({1, 2, 3, 0, 5, 6, 7, 4}),
                                 from_images({4, 5, 6, 7, 0, 1, 2, 3})}});
        out.push_back({"Q8", {from_images({2, 3, 1, 0, 6, 7, 5, 4}),
                              from_images({4, 5, 7, 6, 1, 0, 2, 3})}});
        // affine line over GF(8), x -> x+1 and x -> t*x with t^3 = t+1
        out.push_back({"AGL(1,8)", {from_images({1, 0, 3, 2, 5, 4, 7, 6}),
                                    from_images({0, 2, 4, 6, 3, 1, 7, 5})}});
        break;
    }
    case 9: {
        // points of the 3x3 grid, index 3*row + col
        const Permutation shift_a = from_images({1, 2, 0, 4, 5, 3, 7, 8, 6});
        const Permutation shift_b = from_images({3, 4, 5, 6, 7, 8, 0, 1, 2});
        out.push_back({"C3xC3", {shift_a, shift_b}});
        out.push_back({"C3xC3:C2", {shift_a, shift_b, from_images({0, 2, 1, 6, 8, 7, 3, 5, 4})}});
        out.push_back({"S3wrC2", {shift_a, from_images({1, 0, 2, 4, 3, 5, 7, 6, 8}),
                                  from_images({0, 3, 6, 1, 4, 7, 2, 5, 8})}});
        // affine line over GF(9) = F3[t]/(t^2+1), multiplier g = 1+t
        out.push_back({"AGL(1,9)", {shift_a, from_images({0, 4, 8, 5, 6, 1, 7, 2, 3})}});
        break;
    }
    case 10: {
        const Permutation a5a = pairs_lift(cycle(5));
        const Permutation a5b = pairs_lift(three_cycle(5));
        out.push_back({"A5-pairs", {a5a, a5b}});
        out.push_back({"S5-pairs", {a5a, pairs_lift(transposition(5, 0, 1))}});
        break;
    }
    default:
        break;
    }
    return out;
}

namespace groupdetail {

inline std::vector<std::vector<Permutation>> conjugacy_classes(const std::vector<Permutation>& group) {
    std::vector<uint8_t> visited(group.size(), 0);
    std::vector<std::vector<Permutation>> classes;
    for (std::size_t i = 0; i < group.size(); ++i) {
        if (visited[i]) continue;
        std::vector<Permutation> cls;
        std::deque<std::size_t> queue{i};
        visited[i] = 1;
        while (!queue.empty()) {
            const std::size_t k = queue.front();
            queue.pop_front();
            cls.push_back(group[k]);
            for (const auto& g : group) {
                const Permutation conj = compose(compose(g, group[k]), g.inverse());
                const std::size_t pos = index_of(group, conj);
                if (!visited[pos]) {
                    visited[pos] = 1;
                    queue.push_back(pos);
                }
            }
        }
        classes.push_back(std::move(cls));
    }
    return classes;
}

// product set AB of two normal subgroups, which is again a subgroup
inline std::vector<Permutation> subgroup_join(const std::vector<Permutation>& a,
                                              const std::vector<Permutation>& b) {
    std::set<Permutation> prod;
    for (const auto& x : a)
        for (const auto& y : b) prod.insert(compose(x, y));
    return {prod.begin(), prod.end()};
}

} // namespace groupdetail

/// All normal subgroups of a closed group: closures of single conjugacy
/// classes, saturated under pairwise joins.
inline std::vector<std::vector<Permutation>> normal_subgroups(const std::vector<Permutation>& group) {
    using namespace groupdetail;
    if (group.empty()) throw error("normal_subgroups: empty group");
    const uint32_t n = group.front().degree();
    std::set<std::vector<Permutation>> normals;
    normals.insert({Permutation::identity(n)});
    normals.insert(group);
    for (const auto& cls : conjugacy_classes(group)) {
        std::vector<Permutation> gens = cls;
        gens.push_back(Permutation::identity(n));
        normals.insert(close_generators(gens, group.size()));
    }
    bool grew = true;
    while (grew) {
        grew = false;
        const std::vector<std::vector<Permutation>> snapshot(normals.begin(), normals.end());
        for (std::size_t i = 0; i < snapshot.size() && !grew; ++i)
            for (std::size_t j = i + 1; j < snapshot.size(); ++j) {
                auto joined = subgroup_join(snapshot[i], snapshot[j]);
                if (normals.insert(std::move(joined)).second) {
                    grew = true;
                    break;
                }
            }
    }
    return {normals.begin(), normals.end()};
}

struct SearchHit {
    ActionInstance instance;
    Rational m;
};

struct SearchResult {
    std::vector<SearchHit> hits;
    bool partial = false; // some catalog group exceeded the order cap
};

/// Hunt for non-integral m(G,H;X): transitive groups from the catalog, all
/// normal subgroups H of each. Best effort, bounded by the order cap.
inline SearchResult search_nonintegral(uint32_t degree, std::size_t max_group_order) {
    SearchResult result;
    std::set<std::pair<std::vector<Permutation>, std::vector<Permutation>>> seen;
    for (const auto& entry : transitive_catalog(degree)) {
        std::vector<Permutation> group;
        try {
            group = close_generators(entry.generators, max_group_order);
        } catch (const error&) {
            result.partial = true;
            continue;
        }
        if (!is_transitive(group)) continue;
        for (auto& sub : normal_subgroups(group)) {
            if (!seen.insert({group, sub}).second) continue;
            ActionInstance inst = make_instance(group, std::move(sub),
                                                entry.name + "/H" + std::to_string(seen.size()));
            const Rational m = m_invariant(inst);
            if (!m.is_integer()) result.hits.push_back({std::move(inst), m});
        }
    }
    return result;
}

} // namespace polyjac

#endif
