#include <cmath>
#include <functional>

#include "doctest.h"
#include "sedop/errors.hpp"
#include "sedop/measure.hpp"
#include "sedop/quadrature.hpp"

using namespace sedop;

namespace {

double integrate(const QuadratureRule& r, const std::function<double(double)>& f) {
    long double acc = 0.0L;
    for (size_t i = 0; i < r.nodes.size(); ++i)
        acc += static_cast<long double>(r.weights[i]) * f(r.nodes[i]);
    return static_cast<double>(acc);
}

} // namespace

TEST_CASE("gauss-legendre integrates monomials exactly up to its design degree") {
    QuadratureRule r = gauss_legendre(12);
    REQUIRE(r.nodes.size() == 12);
    for (int k = 0; k <= 23; ++k) {
        double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
        double got = integrate(r, [k](double x) { return std::pow(x, k); });
        CHECK(std::abs(got - exact) < 1e-13);
    }
    // degree 24 is beyond a 12-point rule; the error must be visible
    double overflowed = integrate(r, [](double x) { return std::pow(x, 24); });
    CHECK(std::abs(overflowed - 2.0 / 25.0) > 1e-8);
}

TEST_CASE("composite legendre panels cover a shifted interval") {
    QuadratureRule r = composite_legendre(0.0, 2.0, 8, 6);
    REQUIRE(r.nodes.size() == 48);
    CHECK(integrate(r, [](double x) { return x * x * x; }) == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(integrate(r, [](double) { return 1.0; }) == doctest::Approx(2.0).epsilon(1e-14));
    for (double x : r.nodes) {
        CHECK(x > 0.0);
        CHECK(x < 2.0);
    }
}

TEST_CASE("golub-welsch on the hermite recurrence yields a gaussian rule") {
    // orthonormal recurrence of the standard gaussian: alpha = 0, beta = {1, 1, 2, 3, ...}
    int n = 10;
    std::vector<long double> alpha(n, 0.0L), beta(n);
    beta[0] = 1.0L;
    for (int k = 1; k < n; ++k) beta[(size_t)k] = static_cast<long double>(k);
    QuadratureRule r = golub_welsch(alpha, beta, n);
    REQUIRE(r.nodes.size() == 10);
    CHECK(integrate(r, [](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(integrate(r, [](double x) { return x * x; }) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(integrate(r, [](double x) { return x * x * x * x; }) ==
          doctest::Approx(3.0).epsilon(1e-12));
    CHECK(integrate(r, [](double x) { return std::pow(x, 6); }) ==
          doctest::Approx(15.0).epsilon(1e-12));
    // nodes of a symmetric measure come in +- pairs
    double nodeSum = 0.0;
    for (double x : r.nodes) nodeSum += x;
    CHECK(std::abs(nodeSum) < 1e-12);
}

TEST_CASE("golub-welsch rejects a broken recurrence") {
    std::vector<long double> alpha(4, 0.0L);
    std::vector<long double> beta{1.0L, 1.0L, -2.0L, 3.0L};
    CHECK_THROWS_AS(golub_welsch(alpha, beta, 4), MomentOverflow);
}

TEST_CASE("stieltjes recovers the legendre recurrence from a discrete rule") {
    QuadratureRule gl = gauss_legendre(64);
    std::vector<long double> xs(gl.nodes.begin(), gl.nodes.end());
    std::vector<long double> ws;
    ws.reserve(gl.weights.size());
    for (double w : gl.weights) ws.push_back(static_cast<long double>(w) / 2.0L);
    auto [a, b] = stieltjes(xs, ws, 8);
    for (int k = 0; k < 8; ++k) CHECK(std::abs(static_cast<double>(a[(size_t)k])) < 1e-14);
    CHECK(static_cast<double>(b[0]) == doctest::Approx(1.0).epsilon(1e-14));
    for (int k = 1; k < 8; ++k) {
        double exact = static_cast<double>(k) * k / (4.0 * k * k - 1.0);
        CHECK(static_cast<double>(b[(size_t)k]) == doctest::Approx(exact).epsilon(1e-13));
    }
}

TEST_CASE("stieltjes refuses orders beyond the discretization") {
    QuadratureRule gl = gauss_legendre(8);
    std::vector<long double> xs(gl.nodes.begin(), gl.nodes.end());
    std::vector<long double> ws(gl.weights.begin(), gl.weights.end());
    CHECK_THROWS_AS(stieltjes(xs, ws, 5), MomentOverflow);
}

TEST_CASE("measure-backed quadrature is stable under order doubling") {
    Measure1D m = build_measure(Potential1D::polynomial({0.0, 0.0, 0.5, 0.0, 0.25}));
    QuadratureRule r1 = build_quadrature(m, 12);
    QuadratureRule r2 = build_quadrature(m, 24);
    double m4a = integrate(r1, [](double x) { return x * x * x * x; });
    double m4b = integrate(r2, [](double x) { return x * x * x * x; });
    CHECK(std::abs(m4a - m4b) < 1e-8);
    double w1 = integrate(r1, [](double) { return 1.0; });
    CHECK(w1 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("measure-backed quadrature guards its moment range") {
    Measure1D m = build_measure(Potential1D::gaussian(1.0));
    CHECK_THROWS_AS(build_quadrature(m, 3000), MomentOverflow);
}
