#include <doctest.h>

#include <cmath>

#include "gpcrec/basis.hpp"
#include "gpcrec/errors.hpp"
#include "gpcrec/rng.hpp"
#include "oracles.hpp"

using namespace gpcrec;

TEST_CASE("eval_univariate pinned values") {
    const auto hermite = PolynomialFamily::hermite();
    CHECK(eval_univariate(hermite, 0, 1.7) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_univariate(hermite, 1, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
    // frozen from the orthonormal recurrence: degree-2 value (y^2 - 1)/sqrt(2)
    CHECK(eval_univariate(hermite, 2, 0.0) ==
          doctest::Approx(-0.7071067811865476).epsilon(1e-14));

    const auto legendre = PolynomialFamily::jacobi(0.0, 0.0);
    CHECK(eval_univariate(legendre, 1, 1.0) ==
          doctest::Approx(1.7320508075688772).epsilon(1e-14));
}

TEST_CASE("eval_univariate degree-2 Hermite is L2-normalized (quadrature check)") {
    const auto hermite = PolynomialFamily::hermite();
    const auto rule = quadrature(hermite, 16);
    double norm2 = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double v = eval_univariate(hermite, 2, rule.nodes[i]);
        norm2 += rule.weights[i] * v * v;
    }
    CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eval_univariate errors") {
    const auto hermite = PolynomialFamily::hermite();
    CHECK_THROWS_AS(eval_univariate(hermite, 201, 0.0), DegreeTooLarge);
    CHECK_THROWS_AS(eval_univariate(PolynomialFamily::jacobi(0, 0), 1, 1.5), DomainError);
    CHECK_THROWS_AS(PolynomialFamily::jacobi(-1.0, 0.0), DomainError);
}

TEST_CASE("recurrence matches extended-precision oracle") {
    const auto hermite = PolynomialFamily::hermite();
    for (double y : {-9.5, -3.1, 0.3, 1.7, 6.0, 10.0}) {
        for (int k : {5, 20, 50, 100}) {
            const long double ref = oracles::eval_univariate_ld(hermite, k, y);
            const double got = eval_univariate(hermite, k, y);
            CHECK(std::abs(got - static_cast<double>(ref)) <=
                  1e-9 * std::max(1.0, std::abs(static_cast<double>(ref))));
        }
    }
    const auto jac = PolynomialFamily::jacobi(1.0, 0.5);
    for (double y : {-0.99, -0.4, 0.1, 0.77, 1.0}) {
        for (int k : {5, 20, 50, 100}) {
            const long double ref = oracles::eval_univariate_ld(jac, k, y);
            const double got = eval_univariate(jac, k, y);
            CHECK(std::abs(got - static_cast<double>(ref)) <=
                  1e-9 * std::max(1.0, std::abs(static_cast<double>(ref))));
        }
    }
}

TEST_CASE("eval_tensor") {
    const auto hermite = PolynomialFamily::hermite();
    const std::vector<double> y1{0.3, -1.2};
    CHECK(eval_tensor(hermite, MultiIndex{}, y1) == doctest::Approx(1.0));

    const std::vector<double> y2{2.0, 3.0};
    CHECK(eval_tensor(hermite, MultiIndex::from_dense({1, 1}), y2) ==
          doctest::Approx(6.0).epsilon(1e-14));

    const auto legendre = PolynomialFamily::jacobi(0.0, 0.0);
    const std::vector<double> y3{1.0, 0.0, 1.0};
    CHECK(eval_tensor(legendre, MultiIndex::from_dense({1, 0, 1}), y3) ==
          doctest::Approx(3.0).epsilon(1e-13));

    // singleton support equals the univariate value
    RngStream rs(7, 1);
    for (int rep = 0; rep < 20; ++rep) {
        const int dim = 1 + static_cast<int>(rs.uniform01() * 4);
        const int deg = static_cast<int>(rs.uniform01() * 12);
        std::vector<double> y(5);
        for (auto& v : y) v = 2.0 * rs.uniform01() - 1.0;
        CHECK(eval_tensor(hermite, MultiIndex::single(dim, deg), y) ==
              doctest::Approx(eval_univariate(hermite, deg, y[dim - 1])).epsilon(1e-14));
    }

    const std::vector<double> too_short{0.5};
    CHECK_THROWS_AS(eval_tensor(hermite, MultiIndex::from_dense({0, 1}), too_short),
                    DimensionMismatch);
}

TEST_CASE("density values") {
    CHECK(density(PolynomialFamily::hermite(), 0.0) ==
          doctest::Approx(0.3989422804014327).epsilon(1e-15));
    CHECK(density(PolynomialFamily::jacobi(0, 0), 0.4) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(density(PolynomialFamily::jacobi(1, 0), 0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(density(PolynomialFamily::jacobi(0, 0), 1.2), DomainError);
    CHECK_THROWS_AS(density(PolynomialFamily::jacobi(-0.5, 0), 1.0), DomainError);
    // density integrates to one
    for (auto fam : {PolynomialFamily::jacobi(0, 0), PolynomialFamily::jacobi(1, 0.5)}) {
        const double mass =
            oracles::integrate_simpson([&](double y) { return density(fam, y); }, -1.0, 1.0);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("quadrature pinned rules") {
    const auto leg1 = quadrature(PolynomialFamily::jacobi(0, 0), 1);
    REQUIRE(leg1.nodes.size() == 1);
    CHECK(leg1.nodes[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(leg1.weights[0] == doctest::Approx(1.0).epsilon(1e-14));

    const auto herm2 = quadrature(PolynomialFamily::hermite(), 2);
    REQUIRE(herm2.nodes.size() == 2);
    CHECK(herm2.nodes[0] == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(herm2.nodes[1] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(herm2.weights[0] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(herm2.weights[1] == doctest::Approx(0.5).epsilon(1e-13));

    const auto leg2 = quadrature(PolynomialFamily::jacobi(0, 0), 2);
    CHECK(leg2.nodes[0] == doctest::Approx(-0.5773502691896258).epsilon(1e-13));
    CHECK(leg2.nodes[1] == doctest::Approx(0.5773502691896258).epsilon(1e-13));
    CHECK(leg2.weights[0] == doctest::Approx(0.5).epsilon(1e-13));

    CHECK_THROWS_AS(quadrature(PolynomialFamily::hermite(), 501), OrderTooLarge);
}

TEST_CASE("quadrature weights sum to one and moments are exact") {
    for (auto fam : {PolynomialFamily::hermite(), PolynomialFamily::jacobi(0, 0),
                     PolynomialFamily::jacobi(1, 0.5), PolynomialFamily::jacobi(2.5, 0.25)}) {
        for (int order : {1, 2, 5, 17, 31}) {
            const auto rule = quadrature(fam, order);
            double wsum = 0.0;
            for (double w : rule.weights) wsum += w;
            CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));

            // exactness up to degree 2*order - 1 against the moment oracle;
            // the error scale of the power sum itself is sum w |y|^k
            const auto moments = oracles::monomial_moments(fam, 2 * order - 1);
            for (int k = 0; k <= 2 * order - 1; ++k) {
                double got = 0.0, scale = 1.0;
                for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                    got += rule.weights[i] * std::pow(rule.nodes[i], k);
                    scale += rule.weights[i] * std::pow(std::abs(rule.nodes[i]), k);
                }
                CHECK(std::abs(got - moments[static_cast<std::size_t>(k)]) <= 1e-10 * scale);
            }
        }
    }
}

TEST_CASE("random polynomial of degree 2*order-1 integrates exactly") {
    RngStream rs(2024, 0);
    for (auto fam : {PolynomialFamily::hermite(), PolynomialFamily::jacobi(0.5, 1.5)}) {
        const int order = 9;
        const auto rule = quadrature(fam, order);
        const auto moments = oracles::monomial_moments(fam, 2 * order - 1);
        std::vector<double> coef(2 * order);
        for (auto& c : coef) c = 2.0 * rs.uniform01() - 1.0;
        double exact = 0.0;
        for (std::size_t k = 0; k < coef.size(); ++k) exact += coef[k] * moments[k];
        double got = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            double p = 0.0, mono = 1.0;
            for (std::size_t k = 0; k < coef.size(); ++k) {
                p += coef[k] * mono;
                mono *= rule.nodes[i];
            }
            got += rule.weights[i] * p;
        }
        double scale = 1.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            double p_abs = 0.0, mono = 1.0;
            for (std::size_t k = 0; k < coef.size(); ++k) {
                p_abs += std::abs(coef[k] * mono);
                mono *= rule.nodes[i];
            }
            scale += rule.weights[i] * p_abs;
        }
        CHECK(std::abs(got - exact) <= 1e-10 * scale);
    }
}

TEST_CASE("orthonormality via quadrature") {
    for (auto fam : {PolynomialFamily::hermite(), PolynomialFamily::jacobi(0, 0),
                     PolynomialFamily::jacobi(1.0, 0.5)}) {
        const int max_deg = 30;
        const auto rule = quadrature(fam, 31);
        for (int j = 0; j <= max_deg; j += 5) {
            for (int k = j; k <= max_deg; k += 5) {
                double dot = 0.0;
                for (std::size_t i = 0; i < rule.nodes.size(); ++i)
                    dot += rule.weights[i] * eval_univariate(fam, j, rule.nodes[i]) *
                           eval_univariate(fam, k, rule.nodes[i]);
                CHECK(std::abs(dot - (j == k ? 1.0 : 0.0)) <= 1e-10);
            }
        }
    }
}
