#include "sedop/measure.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "sedop/errors.hpp"

namespace sedop {

namespace {

constexpr double kMassTailPerSide = 5e-13;   // both sides together stay under 1e-12
constexpr double kWeightedTailPower = 48.0;  // covers integrand degrees in scope
constexpr double kWeightedTailDrop = 37.0;   // ~ -log(1e-16)

// g(x) = p log(max(1,|x|)) - V(x): log of the worst-case weighted integrand.
double weighted_log(const Potential1D& pot, double x) {
    return kWeightedTailPower * std::log(std::max(1.0, std::abs(x))) - pot.value(x);
}

// Point in direction `sign` beyond which the weighted envelope has dropped
// kWeightedTailDrop e-folds below its maximum on that side. The outward walk
// starts at the envelope's argmax so it cannot stop short of the bulk; when
// the whole envelope on the side sits below the cut already, the bracket
// collapses near |x| = 1, which is only ever too wide, never too narrow.
double tail_cut(const Potential1D& pot, double sign) {
    double gm = -std::numeric_limits<double>::infinity();
    double xm = 0.0;
    for (int i = 0; i <= 4000; ++i) {
        const double x = sign * 0.05 * static_cast<double>(i);
        const double g = weighted_log(pot, x);
        if (g > gm) {
            gm = g;
            xm = std::abs(x);
        }
    }
    const double cut = gm - kWeightedTailDrop;
    double hi = std::max(1.0, xm);
    int guard = 0;
    while (weighted_log(pot, sign * hi) > cut) {
        hi *= 1.5;
        if (++guard > 200) throw Error("quadrature interval search diverged");
    }
    double lo = hi / 1.5;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (weighted_log(pot, sign * mid) > cut) lo = mid; else hi = mid;
    }
    return sign * hi;
}

long double integrate_exp_neg_v(const Potential1D& pot, double a, double b,
                                int panels, int order) {
    const QuadratureRule r = composite_legendre(a, b, panels, order);
    long double s = 0.0L;
    for (size_t i = 0; i < r.nodes.size(); ++i)
        s += static_cast<long double>(r.weights[i]) *
             std::exp(-pot.value_l(static_cast<long double>(r.nodes[i])));
    return s;
}

} // namespace

Potential1D Potential1D::polynomial(const std::vector<double>& coeffs) {
    if (coeffs.empty()) throw ConfigError("potential: empty coefficient list");
    Potential1D p;
    p.kind_ = PotentialKind::polynomial;
    p.v_.assign(coeffs.size(), 0.0L);
    for (size_t k = 0; k < coeffs.size(); ++k) {
        if (!std::isfinite(coeffs[k])) throw ConfigError("potential: non-finite coefficient");
        p.v_[k] = static_cast<long double>(coeffs[k]);
    }
    p.v_ = poly::trimmed(p.v_);
    p.degree_ = poly::degree(p.v_);
    if (p.degree_ < 2) throw ConfigError("potential: degree must be >= 2");
    if (p.degree_ % 2 != 0) throw ConfigError("potential: degree must be even");
    if (p.v_.back() <= 0.0L) throw ConfigError("potential: leading coefficient must be > 0");
    p.v1_ = poly::derivative(p.v_);
    p.v2_ = poly::derivative(p.v1_);
    p.v3_ = poly::derivative(p.v2_);
    return p;
}

Potential1D Potential1D::gaussian(double variance) {
    if (!(variance > 0.0) || !std::isfinite(variance))
        throw ConfigError("potential: gaussian variance must be positive");
    Potential1D p = polynomial({0.0, 0.0, 1.0 / (2.0 * variance)});
    p.kind_ = PotentialKind::gaussian;
    p.variance_ = variance;
    return p;
}

double Measure1D::density(double x) const {
    return std::exp(-pot_.value(x)) / Z_;
}

std::pair<std::vector<long double>, std::vector<long double>>
Measure1D::recurrence(int n) const {
    if (pot_.kind() == PotentialKind::gaussian) {
        // Scaled Hermite family: alpha_k = 0, beta_k = k * variance, beta_0 = 1.
        std::vector<long double> alpha(static_cast<size_t>(n), 0.0L);
        std::vector<long double> beta(static_cast<size_t>(n), 0.0L);
        beta[0] = 1.0L;
        for (int k = 1; k < n; ++k)
            beta[static_cast<size_t>(k)] = static_cast<long double>(k) *
                                           static_cast<long double>(pot_.variance());
        return {alpha, beta};
    }
    return stieltjes(refx_, refw_, n);
}

Measure1D build_measure(const Potential1D& p) {
    Measure1D m;
    m.pot_ = p;

    // Wide internal interval by the weighted-tail criterion.
    m.quad_.a = tail_cut(p, -1.0);
    m.quad_.b = tail_cut(p, +1.0);

    // Normalization with panel doubling until relative change < 1e-12.
    int panels = 24;
    const int order = 32;
    long double Z = integrate_exp_neg_v(p, m.quad_.a, m.quad_.b, panels, order);
    for (int it = 0; it < 5; ++it) {
        const long double Z2 = integrate_exp_neg_v(p, m.quad_.a, m.quad_.b, panels * 2, order);
        const long double rel = std::abs(Z2 - Z) / Z2;
        Z = Z2;
        panels *= 2;
        if (rel < 1e-12L && it > 0) break;
    }
    if (!(Z > 0.0L) || !std::isfinite(static_cast<double>(Z)))
        throw Error("measure normalization failed");
    m.Z_ = static_cast<double>(Z);

    // Reference discretization: composite rule weighted by the density.
    {
        const QuadratureRule r = composite_legendre(m.quad_.a, m.quad_.b, panels, order);
        m.refx_.resize(r.nodes.size());
        m.refw_.resize(r.nodes.size());
        long double sum = 0.0L;
        for (size_t i = 0; i < r.nodes.size(); ++i) {
            m.refx_[i] = static_cast<long double>(r.nodes[i]);
            m.refw_[i] = static_cast<long double>(r.weights[i]) *
                         std::exp(-p.value_l(m.refx_[i])) / Z;
            sum += m.refw_[i];
        }
        for (auto& w : m.refw_) w /= sum;  // exact unit mass for the discrete measure
    }

    // massInterval: per-side bisection until each tail holds < 5e-13 of mass.
    {
        auto tail_above = [&](double b) {
            return static_cast<double>(integrate_exp_neg_v(p, b, m.quad_.b, 24, 16) / Z);
        };
        auto tail_below = [&](double a) {
            return static_cast<double>(integrate_exp_neg_v(p, m.quad_.a, a, 24, 16) / Z);
        };
        double lo = 0.0, hi = m.quad_.b;
        for (int it = 0; it < 120; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (tail_above(mid) < kMassTailPerSide) hi = mid; else lo = mid;
        }
        m.mass_.b = hi;
        lo = m.quad_.a; hi = 0.0;
        for (int it = 0; it < 120; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (tail_below(mid) < kMassTailPerSide) lo = mid; else hi = mid;
        }
        m.mass_.a = lo;
    }
    return m;
}

double log_derivative(const Measure1D& m, double x) { return -m.potential().d1(x); }

double coefficient(const Measure1D& m, double x) { return m.potential().d2(x); }

double ulc_infimum(const ProductMeasure& m, int resolution) {
    if (resolution < 2) throw Error("ulc_infimum: resolution must be >= 2");
    double cMin = std::numeric_limits<double>::infinity();
    for (const Measure1D& f : m.factors) {
        const Potential1D& pot = f.potential();
        const Interval I = f.massInterval();
        // Grid scan over massInterval.
        for (int i = 0; i < resolution; ++i) {
            const double x = I.a + (I.b - I.a) * i / (resolution - 1);
            cMin = std::min(cMin, pot.d2(x));
        }
        // Analytic sharpening: V'' attains its infimum on [a,b] at an endpoint
        // or at a real root of V'''.
        const poly::Coeffs v3 = pot.d3_coeffs();
        const int deg3 = poly::degree(v3);
        if (deg3 >= 1) {
            Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg3, deg3);
            for (int i = 1; i < deg3; ++i) comp(i, i - 1) = 1.0;
            for (int i = 0; i < deg3; ++i)
                comp(i, deg3 - 1) = -static_cast<double>(v3[static_cast<size_t>(i)] / v3[static_cast<size_t>(deg3)]);
            const Eigen::VectorXcd roots = comp.eigenvalues();
            for (int i = 0; i < roots.size(); ++i) {
                if (std::abs(roots(i).imag()) > 1e-9) continue;
                const double x = roots(i).real();
                if (x >= I.a && x <= I.b) cMin = std::min(cMin, pot.d2(x));
            }
        }
        cMin = std::min({cMin, pot.d2(I.a), pot.d2(I.b)});
    }
    return cMin;
}

UlcCertificate check_ulc(const ProductMeasure& m, int resolution) {
    const double cMin = ulc_infimum(m, resolution);
    if (!(cMin > 0.0))
        throw NotUlc("check_ulc: inf V'' = " + std::to_string(cMin) + " <= 0");
    UlcCertificate cert;
    cert.constant = cMin;
    cert.method = UlcMethod::analytic_infimum;
    cert.gridResolution = resolution;
    return cert;
}

namespace {

struct FactorMoments {
    double beta1 = 0.0;   // int beta dmu
    double beta2 = 0.0;   // int beta^2 dmu
    double r2 = 0.0;      // int (V'')^2 dmu
};

FactorMoments factor_moments(const Measure1D& f, int order) {
    const QuadratureRule r = build_quadrature(f, order);
    FactorMoments out;
    for (size_t i = 0; i < r.nodes.size(); ++i) {
        const double b = -f.potential().d1(r.nodes[i]);
        const double v2 = f.potential().d2(r.nodes[i]);
        out.beta1 += r.weights[i] * b;
        out.beta2 += r.weights[i] * b * b;
        out.r2 += r.weights[i] * v2 * v2;
    }
    return out;
}

// I1 = int (sum_j phi_j beta_j)^2 dmu, I2 = sum_j phi_j^2 int (V_j'')^2 dmu.
std::pair<double, double> integrability_at(const ProductMeasure& m,
                                           const std::vector<double>& phi, int order) {
    std::vector<FactorMoments> mom;
    mom.reserve(m.factors.size());
    for (const auto& f : m.factors) mom.push_back(factor_moments(f, order));
    double I1 = 0.0, I2 = 0.0;
    for (size_t j = 0; j < m.factors.size(); ++j) {
        I1 += phi[j] * phi[j] * mom[j].beta2;
        I2 += phi[j] * phi[j] * mom[j].r2;
        for (size_t k = 0; k < m.factors.size(); ++k)
            if (k != j) I1 += phi[j] * phi[k] * mom[j].beta1 * mom[k].beta1;
    }
    return {I1, I2};
}

} // namespace

IntegrabilityResult check_integrability(const ProductMeasure& m,
                                        const std::vector<double>& phi, int order) {
    if (static_cast<int>(phi.size()) != m.d())
        throw Error("check_integrability: phi dimension mismatch");
    if (order < 2) throw Error("check_integrability: order must be >= 2");
    IntegrabilityResult res;
    res.order = 2 * order;
    auto [c1, c2] = integrability_at(m, phi, order);
    auto [f1, f2] = integrability_at(m, phi, 2 * order);
    res.I1_coarse = c1;
    res.I2_coarse = c2;
    res.I1 = f1;
    res.I2 = f2;
    const double tol = 1e-6;
    if (std::abs(f1 - c1) > tol * std::max(1.0, std::abs(f1)) ||
        std::abs(f2 - c2) > tol * std::max(1.0, std::abs(f2)) ||
        !std::isfinite(f1) || !std::isfinite(f2))
        throw DivergentIntegral("check_integrability: estimates fail to stabilize under refinement");
    return res;
}

} // namespace sedop
