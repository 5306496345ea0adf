#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>

#include "polyjac/group_actions.hpp"

using namespace polyjac;
using groupdetail::from_images;

namespace {

std::vector<uint64_t> sorted_profile_values(const ActionInstance& inst) {
    std::vector<uint64_t> values;
    for (const auto& [rep, v] : coset_max_profile(inst)) values.push_back(v);
    std::sort(values.begin(), values.end());
    return values;
}

ActionInstance conjugated(const ActionInstance& inst, const Permutation& sigma) {
    const Permutation si = sigma.inverse();
    std::vector<Permutation> g, h;
    for (const auto& e : inst.group) g.push_back(compose(compose(sigma, e), si));
    for (const auto& e : inst.subgroup) h.push_back(compose(compose(sigma, e), si));
    return make_instance(std::move(g), std::move(h), inst.label + "-relabeled");
}

} // namespace

TEST_CASE("permutation basics") {
    const Permutation p = from_images({1, 2, 0});
    CHECK(p(0) == 1);
    CHECK(compose(p, p) == from_images({2, 0, 1}));
    CHECK(compose(p, p.inverse()) == Permutation::identity(3));
    CHECK_THROWS_AS(Permutation(std::vector<uint32_t>{0, 0, 1}), error);
    // compose(h, g) applies g first
    const Permutation t01 = from_images({1, 0, 2});
    const Permutation c = from_images({1, 2, 0});
    CHECK(compose(t01, c) == from_images({0, 2, 1}));
}

TEST_CASE("close_generators sizes") {
    {
        const auto s3 = close_generators({from_images({1, 0, 2}), from_images({1, 2, 0})}, 100);
        CHECK(s3.size() == 6);
    }
    {
        const auto only_id = close_generators({Permutation::identity(4)}, 100);
        CHECK(only_id.size() == 1);
    }
    CHECK_THROWS_AS(close_generators({from_images({1, 0, 2}), from_images({1, 2, 0})}, 5), error);
}

TEST_CASE("fixed point counts") {
    CHECK(fixed_point_count(Permutation::identity(6)) == 6);
    CHECK(fixed_point_count(from_images({1, 0, 2})) == 1);
    // complement composed with (01)(23), acting on the six pairs of a 4-set
    const Permutation e =
        compose(groupdetail::pair_complement4(),
                groupdetail::pairs_lift(compose(groupdetail::transposition(4, 0, 1),
                                                groupdetail::transposition(4, 2, 3))));
    CHECK(fixed_point_count(e) == 4);
}

TEST_CASE("s4xc2 pairs instance") {
    const ActionInstance inst = s4xc2_pairs_instance();
    CHECK(inst.degree == 6);
    CHECK(inst.group.size() == 48);
    CHECK(inst.subgroup.size() == 12);
    CHECK(is_transitive(inst.group));
    CHECK(is_normal(inst));
    CHECK(m_invariant(inst) == Rational(7, 2));
    CHECK(m_invariant_double_loop(inst) == Rational(7, 2));
    CHECK(sorted_profile_values(inst) == std::vector<uint64_t>{2, 2, 4, 6});
}

TEST_CASE("aff instances") {
    {
        const ActionInstance a3 = aff_instance(3);
        CHECK(a3.group.size() == 6);
        CHECK(a3.subgroup.size() == 3);
        CHECK(sorted_profile_values(a3) == std::vector<uint64_t>{1, 3});
        CHECK(m_invariant(a3) == Rational(2));
    }
    {
        const ActionInstance a1 = aff_instance(1);
        CHECK(a1.group.size() == 1);
        CHECK(m_invariant(a1) == Rational(1));
    }
    {
        const ActionInstance a6 = aff_instance(6);
        CHECK(a6.group.size() == 12);
        CHECK(m_invariant(a6) == Rational(4));
        CHECK(is_normal(a6));
        CHECK(is_transitive(a6.group));
    }
    for (uint64_t d = 1; d <= 24; ++d)
        CHECK(m_invariant(aff_instance(d)) == Rational(static_cast<int64_t>(arith::divisor_count(d))));
}

TEST_CASE("m with H = G is the degree") {
    for (const ActionInstance& base : {aff_instance(5), s4xc2_pairs_instance()}) {
        const ActionInstance whole = make_instance(base.group, base.group, base.label + "/full");
        CHECK(m_invariant(whole) == Rational(static_cast<int64_t>(base.degree)));
    }
}

TEST_CASE("m with trivial H equals the Burnside average") {
    for (const ActionInstance& base : {aff_instance(6), s4xc2_pairs_instance(), aff_instance(12)}) {
        const ActionInstance tiny =
            make_instance(base.group, {Permutation::identity(base.degree)}, base.label + "/triv");
        CHECK(m_invariant(tiny) == burnside_average(base.group));
    }
}

TEST_CASE("burnside_average examples") {
    const auto s3 = close_generators({from_images({1, 0, 2}), from_images({1, 2, 0})}, 100);
    CHECK(burnside_average(s3) == Rational(1));
    const auto c2 = close_generators({from_images({1, 0})}, 10);
    CHECK(burnside_average(c2) == Rational(1));
    const std::vector<Permutation> trivial{Permutation::identity(2)};
    CHECK(burnside_average(trivial) == Rational(2));
}

TEST_CASE("normality and transitivity checks") {
    const auto s4 = close_generators({groupdetail::cycle(4), groupdetail::transposition(4, 0, 1)}, 100);
    REQUIRE(s4.size() == 24);
    const auto a4 = close_generators(
        {groupdetail::three_cycle(4),
         compose(groupdetail::transposition(4, 0, 1), groupdetail::transposition(4, 2, 3))},
        100);
    REQUIRE(a4.size() == 12);
    CHECK(is_normal(make_instance(s4, a4, "s4/a4")));
    const auto c2 = close_generators({groupdetail::transposition(4, 0, 1)}, 10);
    CHECK_FALSE(is_normal(make_instance(s4, c2, "s4/c2")));
    const auto s3 = close_generators({from_images({1, 0, 2}), from_images({1, 2, 0})}, 100);
    CHECK(is_transitive(s3));
    CHECK_FALSE(is_transitive(std::vector<Permutation>{Permutation::identity(3)}));
}

TEST_CASE("double loop equals coset reduction everywhere") {
    std::vector<ActionInstance> instances;
    for (uint64_t d = 1; d <= 12; ++d) instances.push_back(aff_instance(d));
    instances.push_back(s4xc2_pairs_instance());
    for (const auto& inst : instances)
        CHECK(m_invariant_double_loop(inst) == m_invariant_cosets(inst));
}

TEST_CASE("m is invariant under relabeling") {
    std::mt19937_64 rng(1905);
    for (const ActionInstance& base : {s4xc2_pairs_instance(), aff_instance(8)}) {
        std::vector<uint32_t> img(base.degree);
        for (uint32_t i = 0; i < base.degree; ++i) img[i] = i;
        std::shuffle(img.begin(), img.end(), rng);
        const ActionInstance moved = conjugated(base, Permutation(std::move(img)));
        CHECK(m_invariant(moved) == m_invariant(base));
    }
}

TEST_CASE("normal subgroup enumeration") {
    const auto s4 = close_generators({groupdetail::cycle(4), groupdetail::transposition(4, 0, 1)}, 100);
    const auto normals = normal_subgroups(s4);
    std::vector<std::size_t> sizes;
    for (const auto& n : normals) sizes.push_back(n.size());
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<std::size_t>{1, 4, 12, 24});

    const auto c6 = close_generators({groupdetail::cycle(6)}, 100);
    const auto nc6 = normal_subgroups(c6);
    CHECK(nc6.size() == 4); // one per divisor of 6
}

TEST_CASE("catalog groups close to the expected orders") {
    const std::map<std::string, std::size_t> expected{
        {"C6", 6},         {"D6", 12},       {"A6", 360},    {"S6", 720},   {"A4-pairs", 12},
        {"S4-pairs", 24},  {"S4xC2-pairs", 48}, {"PSL(2,5)", 60},
    };
    for (const auto& entry : transitive_catalog(6)) {
        const auto group = close_generators(entry.generators, 5000);
        REQUIRE(expected.count(entry.name) == 1);
        CHECK(group.size() == expected.at(entry.name));
        CHECK(is_transitive(group));
    }
    for (uint32_t n = 2; n <= 10; ++n)
        for (const auto& entry : transitive_catalog(n)) {
            std::vector<Permutation> group;
            try {
                group = close_generators(entry.generators, 6000);
            } catch (const error&) {
                continue; // the big alternating/symmetric entries
            }
            CAPTURE(entry.name);
            CHECK(is_transitive(group));
        }
}

TEST_CASE("specific catalog orders at other degrees") {
    const std::map<std::string, std::size_t> expected{
        {"F20", 20},   {"F21", 21},  {"F42", 42},      {"Q8", 8},      {"AGL(1,8)", 56},
        {"C3xC3", 9},  {"S3wrC2", 72}, {"AGL(1,9)", 72}, {"A5-pairs", 60}, {"S5-pairs", 120},
        {"C3xC3:C2", 18}, {"V4", 4}, {"C4xC2", 8}, {"C2^3", 8},
    };
    for (uint32_t n : {4u, 5u, 7u, 8u, 9u, 10u})
        for (const auto& entry : transitive_catalog(n)) {
            if (!expected.count(entry.name)) continue;
            const auto group = close_generators(entry.generators, 6000);
            CAPTURE(entry.name);
            CHECK(group.size() == expected.at(entry.name));
        }
}

TEST_CASE("search_nonintegral finds the 7/2 example at degree 6") {
    const SearchResult r = search_nonintegral(6, 48);
    bool found = false;
    for (const auto& hit : r.hits) {
        if (hit.m == Rational(7, 2) && hit.instance.group.size() == 48 &&
            hit.instance.subgroup.size() == 12)
            found = true;
    }
    CHECK(found);
    CHECK(r.partial); // PSL(2,5) exceeds the cap
}

TEST_CASE("search_nonintegral is empty at degree 3") {
    const SearchResult r = search_nonintegral(3, 10000);
    CHECK(r.hits.empty());
    CHECK_FALSE(r.partial);
}

TEST_CASE("search_nonintegral with a tiny cap") {
    const SearchResult r = search_nonintegral(6, 1);
    CHECK(r.hits.empty());
    CHECK(r.partial);
}

TEST_CASE("builtin instance lookup") {
    CHECK(builtin_instance("s4xc2-pairs").group.size() == 48);
    CHECK(builtin_instance("aff:6").group.size() == 12);
    CHECK_THROWS_AS(builtin_instance("aff:x"), error);
    CHECK_THROWS_AS(builtin_instance("nope"), error);
}

TEST_CASE("instance validation rejects bad inputs") {
    const auto s3 = close_generators({from_images({1, 0, 2}), from_images({1, 2, 0})}, 100);
    const std::vector<Permutation> outside{Permutation::identity(3), from_images({1, 0, 2})};
    CHECK_THROWS_AS(make_instance(outside, s3, "h-bigger-than-g"), error);
    const std::vector<Permutation> not_subgroup{from_images({2, 0, 1})};
    CHECK_THROWS_AS(make_instance(s3, not_subgroup, "missing-identity"), error);
}
