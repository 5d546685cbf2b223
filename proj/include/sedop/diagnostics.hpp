#pragma once
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "sedop/dirichlet.hpp"
#include "sedop/measure.hpp"
#include "sedop/segal.hpp"

namespace sedop {

// Weighted euclidean norm ||z||^2 = sum_j w_j z_j^2 standing in for the
// embedding norm of a larger state space; all weights positive.
struct MinusNorm {
    std::vector<double> weights;
};

struct ConditionItem {
    std::string name;
    std::string verdict;  // "pass" | "fail" | "not-checkable" | "info"
    std::string detail;
    std::string source;   // how the number was obtained
    double value = std::numeric_limits<double>::quiet_NaN();
    double se = std::numeric_limits<double>::quiet_NaN();
    double reference = std::numeric_limits<double>::quiet_NaN();
};

struct RefinementPoint {
    int K = 0;
    int N = 0;
    std::vector<double> eigenvalues;  // lowest reliable, ascending
};

struct ConditionReport {
    std::string task;
    std::string verdict;  // "consistent" | "inconsistent" | "pass" | "fail" | "hypothesis-failed"
    std::vector<ConditionItem> items;
    std::vector<RefinementPoint> refinements;
};

// Minimum of f over a uniform grid on the window.
struct DensityProbe {
    double minValue = 0.0;
    double argmin = 0.0;
};
DensityProbe density_positivity_check(const std::function<double(double)>& f, Interval window,
                                      int gridPoints);
ConditionItem positivity_item(const DensityProbe& probe);

// Hypothesis screen for the 1D extension operator: density smoothness and
// positivity, plus the lowest reliable spectrum at each listed truncation.
// Verdict "consistent" when successive refinements agree within 1e-6;
// essential self-adjointness itself is not decidable at finite truncation and
// is never claimed.
ConditionReport theorem2_check(const Measure1D& m,
                               const std::vector<std::pair<int, int>>& refinements);

// Deterministic chunked Monte Carlo mean of a vector integrand over
// (x, y) with x distributed as m and y standard gaussian of the same
// dimension. The integrand writes nComponents values into its last argument.
struct McMulti {
    std::vector<double> mean;
    std::vector<double> se;
};
McMulti mc_expectation_xy(
    const ProductMeasure& m, int nComponents,
    const std::function<void(const std::vector<double>&, const std::vector<double>&, double*)>& f,
    std::int64_t n, std::uint64_t seed);

// Screen for the perturbed-operator hypotheses: coefficient smoothness, the
// weighted L2 norms of beta, g(x,y) = ||R^{-1/2}(x)y|| and the third-derivative
// weight h, each estimated by Monte Carlo against a quadrature reference.
ConditionReport theorem3_check(const ProductMeasure& m, const MinusNorm& norm,
                               std::int64_t samples, std::uint64_t seed);

// H tensor 1 plus the y-side Dirichlet operator; the unperturbed part of the
// transported extension operator.
TwoVariableOperator h_mu_gamma_assemble(const ProductMeasure& m,
                                        const std::vector<PolyBasis>& bases, int N);

} // namespace sedop
