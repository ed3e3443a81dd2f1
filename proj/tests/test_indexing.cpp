#include <doctest.h>

#include <cmath>

#include "gpcrec/errors.hpp"
#include "gpcrec/index_set.hpp"
#include "gpcrec/multi_index.hpp"
#include "gpcrec/rng.hpp"
#include "gpcrec/weights.hpp"
#include "oracles.hpp"

using namespace gpcrec;

namespace {

WeightSpec affine_geo(double base, double q = 1.0, DegreeRule::Kind c = DegreeRule::Kind::LegendreSup) {
    DegreeRule rule;
    rule.kind = c;
    return WeightSpec::affine(RhoRule::geometric(base), rule, q);
}

} // namespace

TEST_CASE("multi-index basics") {
    const auto s = MultiIndex::from_dense({2, 0, 1});
    CHECK(s.degree(1) == 2);
    CHECK(s.degree(2) == 0);
    CHECK(s.degree(3) == 1);
    CHECK(s.max_dim() == 3);
    CHECK(s.total_degree() == 3);
    CHECK(s.max_degree() == 2);
    CHECK(s.bumped(2, 1).degree(2) == 1);
    CHECK(s.bumped(3, -1) == MultiIndex::from_dense({2}));
    CHECK(MultiIndex::from_dense({1}).leq(s));
    CHECK_FALSE(MultiIndex::from_dense({0, 1}).leq(s));

    // deterministic structural order: (1) before (0,1) at equal |s|_1
    CHECK(MultiIndexLess{}(MultiIndex::from_dense({1}), MultiIndex::from_dense({0, 1})));
    CHECK_FALSE(MultiIndexLess{}(MultiIndex::from_dense({0, 1}), MultiIndex::from_dense({1})));
    CHECK(MultiIndexLess{}(MultiIndex::from_dense({1}), MultiIndex::from_dense({2})));
}

TEST_CASE("sigma pinned examples") {
    SUBCASE("lognormal") {
        const auto spec = WeightSpec::lognormal(1, RhoRule::geometric(2.0), 1.0);
        CHECK(spec.sigma(MultiIndex{}) == doctest::Approx(1.0).epsilon(1e-15));
        // rho_1 = 2: 1 + 1*2^2 = 5
        CHECK(spec.sigma(MultiIndex::from_dense({1})) ==
              doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
        // s = (2): binom(2,0) + binom(2,1) 2^2 = 9
        CHECK(spec.sigma(MultiIndex::from_dense({2})) == doctest::Approx(3.0).epsilon(1e-14));
    }
    SUBCASE("affine") {
        const auto spec = WeightSpec::affine(RhoRule::from_values({3.0}), DegreeRule{}, 1.0);
        CHECK(spec.sigma(MultiIndex::from_dense({1})) ==
              doctest::Approx(5.196152422706632).epsilon(1e-14));
    }
    SUBCASE("explicit") {
        WeightSpec::Table table;
        table[MultiIndex{}] = 1.0;
        table[MultiIndex::from_dense({1})] = 2.0;
        const auto spec = WeightSpec::explicit_table(table, 1.0);
        CHECK(spec.sigma(MultiIndex::from_dense({1})) == 2.0);
        CHECK_THROWS_AS(spec.sigma(MultiIndex::from_dense({5})), MissingExplicitEntry);
    }
}

TEST_CASE("lognormal sigma against brute-force enumeration") {
    RngStream rs(99, 3);
    for (int eta : {1, 2, 3}) {
        const auto spec = WeightSpec::lognormal(eta, RhoRule::power(1.5, 0.8), 1.0);
        std::vector<double> rho_dense;
        for (std::size_t j = 1; j <= 6; ++j) rho_dense.push_back(spec.rho().at(j));
        for (int rep = 0; rep < 30; ++rep) {
            std::vector<int> degrees(4);
            for (auto& d : degrees) d = static_cast<int>(rs.uniform01() * 5);
            const auto s = MultiIndex::from_dense(degrees);
            const double brute = oracles::sigma_lognormal_brute(s, eta, rho_dense);
            CHECK(spec.sigma(s) == doctest::Approx(brute).epsilon(1e-12));
        }
    }
}

TEST_CASE("the eta-free closed form is wrong (guard)") {
    // sigma^2 != prod (1 + rho_j^2)^{s_j} once a degree exceeds eta
    const auto spec = WeightSpec::lognormal(1, RhoRule::geometric(2.0), 1.0);
    const auto s = MultiIndex::from_dense({3});
    const double closed_form = std::pow(1.0 + 4.0, 3.0 / 2.0);
    const double brute = oracles::sigma_lognormal_brute(s, 1, {2.0});
    CHECK(spec.sigma(s) == doctest::Approx(brute).epsilon(1e-13));
    CHECK(std::abs(spec.sigma(s) - closed_form) > 1e-2);
}

TEST_CASE("monotonicity on random coordinatewise pairs") {
    RngStream rs(5, 8);
    const auto logn = WeightSpec::lognormal(2, RhoRule::power(1.2, 1.1), 1.0);
    const auto aff = affine_geo(2.0);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<int> lo(5), hi(5);
        for (std::size_t i = 0; i < lo.size(); ++i) {
            lo[i] = static_cast<int>(rs.uniform01() * 4);
            hi[i] = lo[i] + static_cast<int>(rs.uniform01() * 3);
        }
        const auto a = MultiIndex::from_dense(lo), b = MultiIndex::from_dense(hi);
        CHECK(logn.sigma(a) <= logn.sigma(b) * (1 + 1e-12));
        CHECK(aff.sigma(a) <= aff.sigma(b) * (1 + 1e-12));
    }
}

TEST_CASE("lq_norm_inverse_sigma examples") {
    SUBCASE("explicit geometric table sums to 1") {
        WeightSpec::Table table;
        std::vector<MultiIndex::Entry> cur;
        for (int k = 1; k <= 50; ++k)
            table[MultiIndex::single(1, k)] = std::pow(2.0, k);
        const auto spec = WeightSpec::explicit_table(table, 1.0);
        CHECK(lq_norm_inverse_sigma(spec, 1e-12) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("single active dimension geometric") {
        const auto spec = WeightSpec::affine(RhoRule::from_values({2.0}),
                                             DegreeRule{DegreeRule::Kind::One}, 1.0);
        CHECK(lq_norm_inverse_sigma(spec, 1e-10) == doctest::Approx(2.0).epsilon(1e-9));
    }
    SUBCASE("multi-dimensional product weights have a closed-form norm") {
        // sigma_s = prod rho_j^{s_j} with c == 1 gives
        // sum sigma^{-q} = prod_j 1 / (1 - rho_j^{-q})
        const auto spec =
            WeightSpec::affine(RhoRule::geometric(4.0), DegreeRule{DegreeRule::Kind::One}, 1.0);
        double product = 1.0;
        for (int j = 1; j <= 60; ++j) product /= 1.0 - std::pow(4.0, -j);
        CHECK(lq_norm_inverse_sigma(spec, 1e-9) == doctest::Approx(product).epsilon(1e-8));
    }
    SUBCASE("lognormal vs brute-force box sum") {
        // eta q / 2 > 1 is required for the sum to converge; eta = 5, q = 1
        // keeps the certified tail far below the comparison window
        const auto spec = WeightSpec::lognormal(5, RhoRule::geometric(4.0), 1.0);
        const auto box = oracles::threshold_brute(spec, 1e9, 8);
        double brute = 0.0;
        for (const auto& s : box) brute += 1.0 / spec.sigma(s);
        const double got = lq_norm_inverse_sigma(spec, 1e-8);
        CHECK(got == doctest::Approx(brute).epsilon(1e-6));
    }
}

TEST_CASE("enumerate_threshold pinned and brute-force") {
    SUBCASE("xi = 1 keeps only the empty index") {
        for (const auto& spec :
             {affine_geo(2.0), WeightSpec::lognormal(1, RhoRule::geometric(4.0), 1.0)}) {
            const auto set = enumerate_threshold(spec, 1.0);
            REQUIRE(set.size() == 1);
            CHECK(set.indices[0] == MultiIndex{});
        }
    }
    SUBCASE("affine rho 2^j, xi = 6") {
        const auto set = enumerate_threshold(affine_geo(2.0), 6.0);
        REQUIRE(set.size() == 2);
        CHECK(set.indices[0] == MultiIndex{});
        CHECK(set.indices[1] == MultiIndex::from_dense({1}));
        CHECK(set.sigmas[1] == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-13));
    }
    SUBCASE("lognormal oracle equivalence") {
        const auto spec = WeightSpec::lognormal(1, RhoRule::geometric(4.0), 1.0);
        const auto set = enumerate_threshold(spec, 30.0);
        const auto brute = oracles::threshold_brute(spec, 30.0, 6);
        REQUIRE(set.size() == brute.size());
        for (std::size_t i = 0; i < set.size(); ++i) CHECK(set.indices[i] == brute[i]);
    }
    SUBCASE("affine oracle equivalence with larger xi") {
        const auto spec = affine_geo(2.0);
        const auto set = enumerate_threshold(spec, 500.0);
        const auto brute = oracles::threshold_brute(spec, 500.0, 10);
        REQUIRE(set.size() == brute.size());
        for (std::size_t i = 0; i < set.size(); ++i) CHECK(set.indices[i] == brute[i]);
    }
    SUBCASE("cap") {
        CHECK_THROWS_AS(enumerate_threshold(affine_geo(2.0), 1e9, 50), SetTooLarge);
    }
}

TEST_CASE("downward closure of threshold sets and smallest_m") {
    const auto specs = {affine_geo(2.0),
                        WeightSpec::lognormal(1, RhoRule::power(1.5, 1.2), 1.0)};
    for (const auto& spec : specs) {
        const auto lam = enumerate_threshold(spec, 100.0);
        for (const auto& s : lam.indices) {
            for (const auto& [dim, deg] : s.entries()) {
                const auto parent = s.bumped(dim, -1);
                CHECK(lam.contains(parent));
            }
        }
        const auto small = smallest_m(spec, 12);
        for (const auto& s : small.indices) {
            for (const auto& [dim, deg] : s.entries()) CHECK(small.contains(s.bumped(dim, -1)));
        }
    }
}

TEST_CASE("smallest_m pinned and consistency") {
    SUBCASE("m = 1") {
        const auto set = smallest_m(affine_geo(2.0), 1);
        REQUIRE(set.size() == 1);
        CHECK(set.indices[0] == MultiIndex{});
        CHECK(set.sigmas[0] == 1.0);
    }
    SUBCASE("affine rho 2^j first three") {
        const auto set = smallest_m(affine_geo(2.0), 3);
        REQUIRE(set.size() == 3);
        CHECK(set.indices[0] == MultiIndex{});
        CHECK(set.indices[1] == MultiIndex::from_dense({1}));
        CHECK(set.indices[2] == MultiIndex::from_dense({0, 1}));
        CHECK(set.sigmas[1] == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-13));
        CHECK(set.sigmas[2] == doctest::Approx(4.0 * std::sqrt(3.0)).epsilon(1e-13));
    }
    SUBCASE("prefix of the threshold enumeration") {
        for (const auto& spec :
             {affine_geo(2.0), WeightSpec::lognormal(2, RhoRule::power(1.5, 1.3), 1.0)}) {
            const std::size_t m = 25;
            const auto small = smallest_m(spec, m);
            const double xi = std::pow(small.sigmas.back(), spec.q());
            const auto lam = enumerate_threshold(spec, xi * (1 + 1e-12));
            REQUIRE(lam.size() >= m);
            for (std::size_t i = 0; i < m; ++i) CHECK(lam.indices[i] == small.indices[i]);
        }
    }
    SUBCASE("sigmas are non-decreasing") {
        const auto set = smallest_m(WeightSpec::lognormal(1, RhoRule::power(2.0, 1.9), 0.9), 200);
        for (std::size_t i = 1; i < set.size(); ++i) CHECK(set.sigmas[i] >= set.sigmas[i - 1]);
    }
}

TEST_CASE("theoretical_width") {
    CHECK(theoretical_width(affine_geo(2.0), 0) == doctest::Approx(1.0));
    CHECK(theoretical_width(affine_geo(2.0), 1) ==
          doctest::Approx(0.2886751345948129).epsilon(1e-13));
    const auto spec = WeightSpec::lognormal(1, RhoRule::geometric(3.0), 1.0);
    const auto set = smallest_m(spec, 8);
    CHECK(theoretical_width(spec, 7) == doctest::Approx(1.0 / set.sigmas.back()).epsilon(1e-14));
}

TEST_CASE("cardinality bound under normalized weights") {
    // |Lambda(xi / N^q)| <= xi when || sigma^{-1} ||_q = N is divided out
    RngStream rs(31, 2);
    for (int rep = 0; rep < 10; ++rep) {
        const double base = 1.5 + 2.0 * rs.uniform01();
        const double q = 0.5 + 1.0 * rs.uniform01();
        const auto spec = affine_geo(base, q);
        const double norm = lq_norm_inverse_sigma(spec, 1e-9);
        for (double xi : {2.0, 8.0, 32.0, 128.0}) {
            const auto lam = enumerate_threshold(spec, xi / std::pow(norm, q));
            CHECK(static_cast<double>(lam.size()) <= xi + 1e-9);
        }
    }
}

TEST_CASE("truncate_expansion") {
    const auto spec = affine_geo(2.0);
    const auto set = smallest_m(spec, 6);

    SUBCASE("empty set gives zero approximant") {
        CoeffTable table;
        table[MultiIndex{}] = Eigen::VectorXd::Constant(1, 3.0);
        const auto approx = truncate_expansion(table, IndexSet{});
        CHECK(approx.coefficients.size() == 0);
    }
    SUBCASE("identity on coefficients inside the set") {
        CoeffTable table;
        RngStream rs(1, 1);
        for (const auto& s : set.indices)
            table[s] = Eigen::VectorXd::Constant(1, rs.uniform01());
        const auto approx = truncate_expansion(table, set);
        for (std::size_t i = 0; i < set.size(); ++i)
            CHECK(approx.coefficients(static_cast<Eigen::Index>(i), 0) ==
                  doctest::Approx(table[set.indices[i]](0)));
    }
    SUBCASE("dropped tail obeys the threshold bound") {
        // coefficients f_s = g_s / sigma_s with sum (sigma |f|)^2 = 1;
        // the mass outside Lambda(xi) is at most xi^{-2/q}
        RngStream rs(17, 4);
        const auto big = smallest_m(spec, 64);
        for (double xi : {2.0, 8.0, 32.0}) {
            Eigen::VectorXd g(static_cast<Eigen::Index>(big.size()));
            for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = rs.normal();
            g.normalize();
            const auto lam = enumerate_threshold(spec, xi);
            double outside = 0.0;
            for (std::size_t i = 0; i < big.size(); ++i) {
                const double f = g(static_cast<Eigen::Index>(i)) / big.sigmas[i];
                if (!lam.contains(big.indices[i])) outside += f * f;
            }
            CHECK(outside <= std::pow(xi, -2.0 / spec.q()) + 1e-12);
        }
    }
}
