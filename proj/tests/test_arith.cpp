#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "polyjac/arith.hpp"

using namespace polyjac;
using namespace polyjac::arith;

namespace {

// trial-division oracle, independent of the sieve
bool is_prime_trial(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

} // namespace

TEST_CASE("sieve_primes small examples") {
    CHECK(sieve_primes(10).primes() == std::vector<uint32_t>{2, 3, 5, 7});
    CHECK(sieve_primes(2).primes() == std::vector<uint32_t>{2});
    CHECK(sieve_primes(1).primes().empty());
    CHECK(sieve_primes(0).primes().empty());
    CHECK(sieve_primes(3).primes() == std::vector<uint32_t>{2, 3});
}

TEST_CASE("sieve_primes agrees with trial division up to 1e5") {
    const PrimeTable table = sieve_primes(100000);
    std::size_t idx = 0;
    for (uint64_t n = 0; n <= 100000; ++n) {
        if (is_prime_trial(n)) {
            REQUIRE(idx < table.size());
            REQUIRE(table.primes()[idx] == n);
            ++idx;
        }
    }
    CHECK(idx == table.size());
}

TEST_CASE("segmented sieve matches flat sieve across segment joints") {
    const auto flat = sieve_primes(300000).primes();
    const auto segmented = sieve_primes(300000, 1024).primes();
    CHECK(flat == segmented);
}

TEST_CASE("segmented sieve prime counts at scale") {
    const PrimeTable table = sieve_primes(10'000'000);
    CHECK(table.size() == 664579);
    CHECK(table.primes().front() == 2);
    CHECK(table.primes().back() == 9999991);
    CHECK(table.count_upto(100) == 25);
    CHECK(table.count_upto(1'000'000) == 78498);
}

TEST_CASE("segmented sieve reaches 1e8") {
    const PrimeTable table = sieve_primes(100'000'000);
    CHECK(table.size() == 5761455);
    CHECK(table.primes().back() == 99999989);
}

TEST_CASE("crt_combine examples") {
    {
        const auto r = crt_combine({{0, 2}, {2, 3}, {2, 5}});
        CHECK(r.value == 2);
        CHECK(r.modulus == 30);
    }
    {
        const auto r = crt_combine({{1, 2}, {2, 3}});
        CHECK(r.value == 5);
        CHECK(r.modulus == 6);
    }
    {
        const auto r = crt_combine({{3, 7}});
        CHECK(r.value == 3);
        CHECK(r.modulus == 7);
    }
}

TEST_CASE("crt_combine rejects duplicate primes") {
    CHECK_THROWS_AS(crt_combine({{1, 3}, {2, 3}}), error);
}

TEST_CASE("crt_combine recovery property") {
    const PrimeTable table = sieve_primes(1000);
    std::mt19937_64 rng(20240601);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<std::pair<uint64_t, uint64_t>> residues;
        std::vector<uint32_t> pool = table.primes();
        std::shuffle(pool.begin(), pool.end(), rng);
        const std::size_t n = 2 + rng() % 8;
        for (std::size_t i = 0; i < n; ++i) {
            const uint64_t p = pool[i];
            residues.emplace_back(rng() % p, p);
        }
        const auto r = crt_combine(residues);
        REQUIRE(r.value >= 0);
        REQUIRE(r.value < r.modulus);
        for (const auto& [res, p] : residues)
            CHECK(static_cast<uint64_t>(r.value % p) == res);
    }
}

TEST_CASE("crt_combine grows beyond 64 bits") {
    std::vector<std::pair<uint64_t, uint64_t>> residues;
    const PrimeTable table = sieve_primes(100);
    for (uint32_t p : table.primes()) residues.emplace_back(p - 1, p);
    const auto r = crt_combine(residues);
    CHECK(r.modulus > cpp_int(std::numeric_limits<uint64_t>::max()));
    for (const auto& [res, p] : residues)
        CHECK(static_cast<uint64_t>(r.value % p) == res);
    // x === -1 modulo every prime
    CHECK(r.value == r.modulus - 1);
}

TEST_CASE("divisor_count and euler_phi") {
    CHECK(divisor_count(6) == 4);
    CHECK(divisor_count(1) == 1);
    CHECK(divisor_count(12) == 6);
    CHECK(divisor_count(97) == 2);
    CHECK(euler_phi(6) == 2);
    CHECK(euler_phi(1) == 1);
    CHECK(euler_phi(10) == 4);
    CHECK(euler_phi(97) == 96);
    CHECK_THROWS_AS(divisor_count(0), error);
    CHECK_THROWS_AS(euler_phi(0), error);
}

TEST_CASE("totient divisor-sum identity up to 1e4") {
    for (uint64_t d = 1; d <= 10000; ++d) {
        uint64_t sum = 0;
        for (uint64_t d1 = 1; d1 * d1 <= d; ++d1) {
            if (d % d1) continue;
            sum += euler_phi(d1);
            if (d1 != d / d1) sum += euler_phi(d / d1);
        }
        if (sum != d) {
            CAPTURE(d);
            REQUIRE(sum == d);
        }
    }
    SUCCEED();
}
