#pragma once
#include <utility>
#include <vector>

namespace sedop {

class Measure1D;

// Nodes and weights of a positive quadrature rule. For measure-backed rules the
// weights sum to 1 within 1e-12 (probability normalization).
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1], exact for polynomials of degree <= 2n-1.
QuadratureRule gauss_legendre(int n);

// Composite Gauss-Legendre discretization of [a, b]: `panels` equal panels with
// an `order`-point rule each.
QuadratureRule composite_legendre(double a, double b, int panels, int order);

// Gauss rule from the three-term recurrence of an orthonormal polynomial family:
// x p_k = b[k+1] p_{k+1} + a[k] p_k + b[k] p_{k-1}, beta[k] = b[k]^2, beta[0] = total mass.
// Requires alpha.size() >= n and beta.size() >= n.
QuadratureRule golub_welsch(const std::vector<long double>& alpha,
                            const std::vector<long double>& beta, int n);

// Recurrence coefficients (alpha_0..alpha_{n-1}, beta_0..beta_{n-1}) of the
// polynomials orthonormal w.r.t. the discrete measure sum_i w_i delta_{x_i},
// by the discretized Stieltjes procedure in extended precision.
// Throws MomentOverflow on floating-range breakdown or when n exceeds what the
// discretization can resolve.
std::pair<std::vector<long double>, std::vector<long double>>
stieltjes(const std::vector<long double>& xs, const std::vector<long double>& ws, int n);

// Gauss-type rule with `order` nodes integrating polynomials of degree
// <= 2*order-1 against m exactly. Throws MomentOverflow when the required
// moments exceed floating range.
QuadratureRule build_quadrature(const Measure1D& m, int order);

} // namespace sedop
