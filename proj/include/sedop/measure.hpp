#pragma once
#include <string>
#include <vector>

#include "sedop/poly.hpp"
#include "sedop/quadrature.hpp"

namespace sedop {

struct Interval {
    double a = 0.0;
    double b = 0.0;
    double length() const { return b - a; }
};

enum class PotentialKind { polynomial, gaussian };

// Potential V of a log-concave density e^{-V}/Z on the line.
// Polynomial form: V(x) = sum_k c_k x^k, even degree >= 2, positive leading
// coefficient. The gaussian preset stores V(x) = x^2 / (2 variance) and keeps
// its kind so downstream code can use the analytic Hermite recurrence.
class Potential1D {
public:
    Potential1D() = default;  // empty; fill through the factories

    static Potential1D polynomial(const std::vector<double>& coeffs);
    static Potential1D gaussian(double variance);

    PotentialKind kind() const { return kind_; }
    double variance() const { return variance_; }
    const poly::Coeffs& coeffs() const { return v_; }
    int degree() const { return degree_; }

    double value(double x) const { return static_cast<double>(poly::eval(v_, static_cast<long double>(x))); }
    double d1(double x) const { return static_cast<double>(poly::eval(v1_, static_cast<long double>(x))); }
    double d2(double x) const { return static_cast<double>(poly::eval(v2_, static_cast<long double>(x))); }
    double d3(double x) const { return static_cast<double>(poly::eval(v3_, static_cast<long double>(x))); }
    long double value_l(long double x) const { return poly::eval(v_, x); }

    const poly::Coeffs& d1_coeffs() const { return v1_; }
    const poly::Coeffs& d2_coeffs() const { return v2_; }
    const poly::Coeffs& d3_coeffs() const { return v3_; }

private:
    PotentialKind kind_ = PotentialKind::polynomial;
    double variance_ = 0.0;
    int degree_ = 0;
    poly::Coeffs v_, v1_, v2_, v3_;
};

// Probability measure mu = e^{-V} dx / Z on the line together with its
// reference discretization.
//  - massInterval carries >= 1 - 1e-12 of the total mass; it bounds the
//    sampler table and evaluation grids.
//  - quadInterval is wider: weighted tails max(1,|x|)^48 e^{-V} have dropped
//    ~37 e-folds below their maximum at its ends, so Galerkin integrals of all
//    polynomial degrees in scope keep full precision there.
class Measure1D {
public:
    const Potential1D& potential() const { return pot_; }
    double Z() const { return Z_; }
    Interval massInterval() const { return mass_; }
    Interval quadInterval() const { return quad_; }

    double density(double x) const;

    // Reference discretization on quadInterval; weights are normalized to sum 1.
    const std::vector<long double>& refNodes() const { return refx_; }
    const std::vector<long double>& refWeights() const { return refw_; }

    // First n coefficients of the orthonormal-polynomial recurrence; beta[0] = 1.
    // Gaussian-kind measures use the exact analytic recurrence.
    std::pair<std::vector<long double>, std::vector<long double>> recurrence(int n) const;

    friend Measure1D build_measure(const Potential1D& p);

private:
    Potential1D pot_;
    double Z_ = 0.0;
    Interval mass_, quad_;
    std::vector<long double> refx_, refw_;
};

Measure1D build_measure(const Potential1D& p);

// Coordinate product of 1D measures; beta and R act coordinate-wise and R(x)
// is diagonal with entries V_j''(x_j).
struct ProductMeasure {
    std::vector<Measure1D> factors;
    int d() const { return static_cast<int>(factors.size()); }
};

enum class UlcMethod { analytic_infimum, grid_minimization };

struct UlcCertificate {
    double constant = 0.0;        // C > 0: V_j''(x) >= C on every tested point
    UlcMethod method = UlcMethod::analytic_infimum;
    int gridResolution = 0;
};

// beta_mu(x) = -V'(x) for one factor.
double log_derivative(const Measure1D& m, double x);

// R_mu(x) = V''(x) for one factor.
double coefficient(const Measure1D& m, double x);

// Infimum of V_j'' over massInterval of every factor: grid scan sharpened by
// the real critical points of V'' and the interval endpoints. Never throws on
// a negative result; check_ulc turns it into a certificate or an error.
double ulc_infimum(const ProductMeasure& m, int resolution);

// Largest C certified on a `resolution`-point grid over massInterval of every
// factor, sharpened by the analytic infimum (real critical points of V'').
// Throws NotUlc when the certified infimum is <= 0.
UlcCertificate check_ulc(const ProductMeasure& m, int resolution);

struct IntegrabilityResult {
    double I1 = 0.0;  // int <beta_mu, phi>^2 dmu
    double I2 = 0.0;  // int |R_mu(x) phi|^2 dmu
    double I1_coarse = 0.0;  // same integrals at half the quadrature order
    double I2_coarse = 0.0;
    int order = 0;
};

// Evaluates both integrability conditions at quadrature orders `order` and
// 2*order. Throws DivergentIntegral when the two refinements disagree.
IntegrabilityResult check_integrability(const ProductMeasure& m,
                                        const std::vector<double>& phi, int order);

} // namespace sedop
