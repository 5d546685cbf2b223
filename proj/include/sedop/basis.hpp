#pragma once
#include <Eigen/Dense>
#include <vector>

#include "sedop/measure.hpp"
#include "sedop/poly.hpp"

namespace sedop {

using MatrixXld = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

// Orthonormal polynomial Galerkin basis of L2(mu) up to a declared degree K.
// Construction: modified Gram-Schmidt with a re-orthogonalization pass over
// monomial node-value vectors on the measure's reference discretization, in
// extended precision; the monomial coefficient table is rebuilt from the
// three-term recurrence extracted from the orthonormal family (the two
// representations are cross-checked against each other).
//
// The basis internally extends to degree Kint = K + deg(V) so that every
// compressed operator entry downstream is an exact Galerkin integral.
class PolyBasis {
public:
    int K() const { return K_; }
    int Kint() const { return Kint_; }
    // Reliable degree for spectral claims: K - deg(V') + 1.
    int Krel() const { return Krel_; }
    double gramResidual() const { return gramResidual_; }
    const Measure1D& measure() const { return m_; }

    // Row k: monomial coefficients of p_k (internal family, degrees 0..Kint).
    const std::vector<poly::Coeffs>& coefficientTable() const { return coeffs_; }

    // Declared (K+1)x(K+1) matrices: action of multiplication by x and of d/dx.
    const Eigen::MatrixXd& X() const { return X_; }
    const Eigen::MatrixXd& D() const { return D_; }

    // Node values of p_k on the reference discretization (row k).
    const MatrixXld& values() const { return vals_; }

    double evaluate(int k, double x) const;

    // <p_r, q(x) p_c> for r, c <= Kint, by reference-discretization quadrature.
    MatrixXld mult_matrix_internal(const poly::Coeffs& q) const;

    // Exact d/dx on the internal family (triangular solve on the coefficient table).
    MatrixXld deriv_matrix_internal() const;

    friend PolyBasis build_basis(const Measure1D& m, int K);

private:
    int K_ = 0, Kint_ = 0, Krel_ = 0;
    double gramResidual_ = 0.0;
    Measure1D m_;
    std::vector<poly::Coeffs> coeffs_;
    MatrixXld vals_;
    Eigen::MatrixXd X_, D_;
};

// Throws LossOfOrthogonality when the Gram residual exceeds 1e-8 or the two
// representations of the family disagree.
PolyBasis build_basis(const Measure1D& m, int K);

} // namespace sedop
