#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "saccurv/symfun.hpp"

using namespace saccurv;
using namespace saccurv::symfun;

namespace {
Spectrum<Rat> paper_spectrum() {
    return Spectrum<Rat>({Rat(0), Rat(1), Rat(1), Rat(1), Rat(0), Rat(0), Rat(0)}, 0);
}
} // namespace

TEST_CASE("sigma on the diag(0,1,1,1,0,0,0) spectrum") {
    Spectrum<Rat> sp = paper_spectrum();
    CHECK(sigma(sp, 0) == Rat(1));
    CHECK(sigma(sp, 1) == Rat(3));
    CHECK(sigma(sp, 2) == Rat(3));
    CHECK(sigma(sp, 3) == Rat(1));
    CHECK(sigma(sp, 4) == Rat(0));
    CHECK(sigma(sp, 7) == Rat(0));
    CHECK(sigma(sp, 9) == Rat(0)); // beyond the length it vanishes
}

TEST_CASE("sigma of the zero spectrum vanishes for r >= 1") {
    Spectrum<Rat> sp(std::vector<Rat>(6, Rat(0)));
    for (std::size_t r = 1; r <= 6; ++r) CHECK(sigma(sp, r) == Rat(0));
    CHECK(sigma(sp, 0) == Rat(1));
}

TEST_CASE("sigma_3 of eight random rationals equals subset enumeration") {
    oracles::Rng rng(101);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Rat> v = rng.values(8);
        CHECK(sigma(v, 3) == oracles::sigma_enumerated(v, 3));
    }
}

TEST_CASE("sigma_all on the paper spectrum") {
    std::vector<Rat> all = sigma_all(paper_spectrum());
    std::vector<Rat> expected{Rat(1), Rat(3), Rat(3), Rat(1), Rat(0), Rat(0), Rat(0), Rat(0)};
    CHECK(all == expected);
}

TEST_CASE("sigma_all of a single value is (1, c)") {
    Rat c = rat(-7, 3);
    std::vector<Rat> all = sigma_all(std::vector<Rat>{c});
    REQUIRE(all.size() == 2);
    CHECK(all[0] == Rat(1));
    CHECK(all[1] == c);
}

TEST_CASE("sigma_all agrees with sigma and with enumeration, length <= 12") {
    oracles::Rng rng(202);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Rat> v = rng.values(rng.size(1, 12));
        std::vector<Rat> all = sigma_all(v);
        REQUIRE(all.size() == v.size() + 1);
        for (std::size_t r = 0; r <= v.size(); ++r) {
            CHECK(all[r] == sigma(v, r));
            CHECK(all[r] == oracles::sigma_enumerated(v, r));
        }
    }
}

TEST_CASE("sigma_deleted examples") {
    Spectrum<Rat> sp = paper_spectrum();
    CHECK(sigma_deleted(sp, 2, 1) == Rat(1)); // remove one unit eigenvalue
    CHECK(sigma_deleted(sp, 0, 4) == Rat(1));
    CHECK_THROWS_AS(sigma_deleted(sp, 1, 99), std::out_of_range);
}

TEST_CASE("deleted-function counting identity") {
    oracles::Rng rng(303);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<Rat> v = rng.values(rng.size(2, 9));
        const std::size_t m = v.size();
        std::vector<Rat> all = sigma_all(v);
        for (std::size_t r = 0; r < m; ++r) {
            Rat acc(0);
            for (std::size_t beta = 0; beta < m; ++beta) acc = acc + sigma_deleted(v, r, beta);
            CHECK(acc == Rat(static_cast<long>(m - r)) * all[r]);
        }
    }
}

TEST_CASE("sigma is symmetric under permutations") {
    oracles::Rng rng(404);
    std::mt19937_64 shuffler(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Rat> v = rng.values(rng.size(2, 9));
        std::vector<Rat> w = v;
        std::shuffle(w.begin(), w.end(), shuffler);
        for (std::size_t r = 0; r <= v.size(); ++r) CHECK(sigma(v, r) == sigma(w, r));
    }
}

TEST_CASE("power bridge: sum_i k_i^2 sigma_{r-1}^(i) = s1 s_r - (r+1) s_{r+1}") {
    oracles::Rng rng(505);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<Rat> v = rng.values(rng.size(2, 9));
        const std::size_t m = v.size();
        std::vector<Rat> all = sigma_all(v);
        all.push_back(Rat(0));
        for (std::size_t r = 1; r <= m - 1; ++r) {
            Rat acc(0);
            for (std::size_t i = 0; i < m; ++i)
                acc = acc + v[i] * v[i] * sigma_deleted(v, r - 1, i);
            CHECK(acc == all[1] * all[r] - Rat(static_cast<long>(r + 1)) * all[r + 1]);
        }
    }
}

TEST_CASE("float mode stays within 1e-9 relative of the exact values") {
    oracles::Rng rng(606);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Rat> exact = rng.values(rng.size(2, 16), /*lo=*/-1000, /*hi=*/1000, 1);
        std::vector<double> approx;
        for (const Rat& q : exact) approx.push_back(q.get_d());
        std::vector<Rat> want = sigma_all(exact);
        std::vector<double> got = sigma_all(approx);
        for (std::size_t r = 0; r < want.size(); ++r)
            CHECK(near(got[r], want[r].get_d(), 1e-9));
    }
}

TEST_CASE("spectrum invariants") {
    CHECK_THROWS_AS(Spectrum<Rat>(std::vector<Rat>{}), std::invalid_argument);
    CHECK_THROWS_AS(Spectrum<Rat>({Rat(1), Rat(2)}, 0), std::invalid_argument); // radical not 0
    Spectrum<Rat> ok({Rat(0), Rat(2)}, 0);
    CHECK(ok.screen_size() == 1);
    CHECK(ok.screen_values() == std::vector<Rat>{Rat(2)});
}
