#include "sedop/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "sedop/errors.hpp"
#include "sedop/measure.hpp"

namespace sedop {

namespace {

// Eigenvalues/first components of the symmetric tridiagonal Jacobi matrix give
// nodes and weights (Golub-Welsch).
QuadratureRule rule_from_jacobi(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub,
                                double mass) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const int n = static_cast<int>(diag.size());
    QuadratureRule r;
    r.nodes.resize(static_cast<size_t>(n));
    r.weights.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        r.nodes[static_cast<size_t>(i)] = es.eigenvalues()(i);
        const double c = es.eigenvectors()(0, i);
        r.weights[static_cast<size_t>(i)] = mass * c * c;
    }
    return r;
}

} // namespace

QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw Error("gauss_legendre: order must be >= 1");
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
    for (int k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        sub(k - 1) = kk / std::sqrt(4.0 * kk * kk - 1.0);
    }
    return rule_from_jacobi(diag, sub, 2.0);
}

QuadratureRule composite_legendre(double a, double b, int panels, int order) {
    const QuadratureRule base = gauss_legendre(order);
    QuadratureRule r;
    r.nodes.reserve(static_cast<size_t>(panels * order));
    r.weights.reserve(static_cast<size_t>(panels * order));
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        for (int i = 0; i < order; ++i) {
            r.nodes.push_back(lo + 0.5 * h * (base.nodes[static_cast<size_t>(i)] + 1.0));
            r.weights.push_back(0.5 * h * base.weights[static_cast<size_t>(i)]);
        }
    }
    return r;
}

QuadratureRule golub_welsch(const std::vector<long double>& alpha,
                            const std::vector<long double>& beta, int n) {
    if (n < 1) throw Error("golub_welsch: order must be >= 1");
    if (static_cast<int>(alpha.size()) < n || static_cast<int>(beta.size()) < n)
        throw Error("golub_welsch: recurrence too short for requested order");
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
    for (int k = 0; k < n; ++k) diag(k) = static_cast<double>(alpha[static_cast<size_t>(k)]);
    for (int k = 1; k < n; ++k) {
        const long double b = beta[static_cast<size_t>(k)];
        if (!(b > 0.0L) || !std::isfinite(static_cast<double>(b)))
            throw MomentOverflow("golub_welsch: recurrence breakdown (beta <= 0)");
        sub(k - 1) = static_cast<double>(std::sqrt(static_cast<long double>(b)));
    }
    return rule_from_jacobi(diag, sub, static_cast<double>(beta[0]));
}

std::pair<std::vector<long double>, std::vector<long double>>
stieltjes(const std::vector<long double>& xs, const std::vector<long double>& ws, int n) {
    const size_t m = xs.size();
    if (2 * static_cast<size_t>(n) > m)
        throw MomentOverflow("stieltjes: discretization too coarse for requested order");
    std::vector<long double> alpha(static_cast<size_t>(n)), beta(static_cast<size_t>(n));
    std::vector<long double> pPrev(m, 0.0L), p(m, 0.0L);

    long double mass = 0.0L;
    for (size_t i = 0; i < m; ++i) mass += ws[i];
    beta[0] = mass;
    const long double invSqrtMass = 1.0L / std::sqrt(mass);
    for (size_t i = 0; i < m; ++i) p[i] = invSqrtMass;

    for (int k = 0; k < n; ++k) {
        long double a = 0.0L;
        for (size_t i = 0; i < m; ++i) a += ws[i] * xs[i] * p[i] * p[i];
        if (!std::isfinite(static_cast<double>(a)))
            throw MomentOverflow("stieltjes: moment out of floating range");
        alpha[static_cast<size_t>(k)] = a;
        if (k + 1 == n) break;
        const long double bPrev = (k == 0) ? 0.0L : std::sqrt(beta[static_cast<size_t>(k)]);
        long double norm2 = 0.0L;
        std::vector<long double> q(m);
        for (size_t i = 0; i < m; ++i) {
            q[i] = (xs[i] - a) * p[i] - bPrev * pPrev[i];
            norm2 += ws[i] * q[i] * q[i];
        }
        if (!(norm2 > 0.0L) || !std::isfinite(static_cast<double>(norm2)))
            throw MomentOverflow("stieltjes: recurrence breakdown");
        beta[static_cast<size_t>(k + 1)] = norm2;
        const long double invb = 1.0L / std::sqrt(norm2);
        pPrev.swap(p);
        for (size_t i = 0; i < m; ++i) p[i] = q[i] * invb;
    }
    return {alpha, beta};
}

QuadratureRule build_quadrature(const Measure1D& m, int order) {
    if (order < 2) throw Error("build_quadrature: order must be >= 2");
    // Degree-cap guard: the rule needs moments up to x^(2 order); refuse when
    // they cannot be represented.
    const double L = std::max({1.0, std::abs(m.quadInterval().a), std::abs(m.quadInterval().b)});
    const double logMax = std::log(std::numeric_limits<long double>::max());
    if (2.0 * order * std::log(L) > 0.9 * logMax)
        throw MomentOverflow("build_quadrature: moments exceed floating range at this order");
    auto [alpha, beta] = m.recurrence(order);
    return golub_welsch(alpha, beta, order);
}

} // namespace sedop
