#pragma once
#include <limits>

#include "sedop/fock.hpp"

namespace sedop {

// Occupation basis to product Hermite polynomials in fresh variables y:
// e(alpha) maps to prod_j h_{alpha_j}(y_j) with h the orthonormal family of
// the standard gaussian. On the truncation this is a relabeling, so the
// matrix is a permutation between the two flat layouts; the numerical content
// of unitarity is that the Hermite products are orthonormal under quadrature,
// recorded in gramResidual.
struct SegalMap {
    int d = 1;
    int N = 0;
    std::vector<int> polySizes;
    std::vector<PolyBasis> hermite;  // one standard-gaussian basis per coordinate, degree N
    Eigen::MatrixXd matrix;          // two-variable layout <- gamma-mu layout
    double gramResidual = 0.0;       // max |Gram(Hermite products) - I|
};

SegalMap build_segal_map(const GammaMuSpace& space);

// Operator over the basis {(tensor polynomial in x) * (Hermite product in y)},
// flat = xFlat * fockCount + yIdx with yIdx running through the FockIndexSet
// multi-degrees.
struct TwoVariableOperator {
    OperatorMatrix op;
};

// Coefficients of F in the two-variable layout.
// Throws TruncationMismatch when map and vector disagree on (d, K, N).
Eigen::VectorXd segal_transform(const GammaMuVector& F, const SegalMap& S);

std::string two_variable_basis_id(const GammaMuSpace& space);

// xOp acting on the x factor alone, identity on the y factor.
TwoVariableOperator tensor_with_y_identity(const OperatorMatrix& xOp, const GammaMuSpace& space);

// Re-index a gamma-mu matrix into the two-variable layout; entries unchanged.
TwoVariableOperator conjugate_to_two_variable(const OperatorMatrix& gm, const GammaMuSpace& space);

// The y-side Dirichlet operator with coefficient field R(x): the second
// quantization matrix carried through the basis change.
TwoVariableOperator assemble_h_gamma_R(const ProductMeasure& m,
                                       const std::vector<PolyBasis>& bases, int N);

// Four-term explicit cross operator on (u p)(x, y):
//   sum_jk (d_j d_k u)(d_j d_k p)            [trace of the two Hessians]
// + sum_jk (beta_k d_j u)(d_j d_k p)         [Hessian of p against beta tensor grad u]
// - sum_jk (d_j d_k u)(y_k d_j p)            [Hessian of u against y tensor grad p]
// - sum_mj (beta_m d_j u)(y_m d_j p)         [<beta, y> <grad u, grad p>]
// assembled term by term from the symbolic one-coordinate blocks.
TwoVariableOperator assemble_a_mu_explicit(const ProductMeasure& m,
                                           const std::vector<PolyBasis>& bases, int N);

struct BoldDelta {
    SegalMap map;
    TwoVariableOperator conjugated;    // transported extension operator (ground truth)
    TwoVariableOperator componentSum;  // H tensor 1 + y-side Dirichlet + cBest * explicit cross op
    double cBest = 0.0;                // from {1, 2}, by reliable-block residual
    double residualC1 = 0.0;
    double residualC2 = 0.0;
    double residualAtBest = 0.0;
    // d = 1 only: reliable-block norm of
    // conjugated - H tensor 1 - y-side Dirichlet - 2 H_mu tensor H_gamma.
    double identity1dResidual = std::numeric_limits<double>::quiet_NaN();
};

BoldDelta assemble_bold_delta(const ProductMeasure& m, const std::vector<PolyBasis>& bases, int N);

} // namespace sedop
