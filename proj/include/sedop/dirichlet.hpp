#pragma once
#include <Eigen/Dense>
#include <vector>

#include "sedop/basis.hpp"
#include "sedop/measure.hpp"
#include "sedop/operator_matrix.hpp"

namespace sedop {

// Exact expansion coefficients of q in the basis's internal orthonormal family
// (triangular back-substitution against the coefficient table).
// Throws DegreeOverflow when deg(q) exceeds the internal degree.
std::vector<long double> expand_in_family(const PolyBasis& b, const poly::Coeffs& q);

// One-coordinate operator blocks on the declared degree window [0, K]. Every
// entry is obtained by applying the operator symbolically to a basis polynomial
// and expanding the result in the internal family, so the stored numbers are
// Galerkin integrals with no quadrature error of their own. E is the exception:
// it is the node-quadrature form matrix, kept as an independent cross-check
// route against H1.
struct Ops1D {
    int K = 0;
    int Krel = 0;        // columns above Krel feed truncated entries downstream
    Eigen::MatrixXd H1;  // -(d/dx + beta) d/dx   (one-coordinate Dirichlet operator)
    Eigen::MatrixXd G1;  // -(d/dx)(d/dx + beta) = H1 + W
    Eigen::MatrixXd W;   // multiplication by V''
    Eigen::MatrixXd D;   // d/dx
    Eigen::MatrixXd B;   // multiplication by beta = -V'
    Eigen::MatrixXd DB;  // d/dx + beta
    Eigen::MatrixXd BD;  // beta * d/dx (composition)
    Eigen::MatrixXd DD;  // d^2/dx^2
    Eigen::MatrixXd X;   // multiplication by x
    Eigen::MatrixXd E;   // quadrature of p_r' p_c' dmu
};

Ops1D build_ops(const PolyBasis& b);

// Row-major flat indexing of per-coordinate degrees; coordinate 0 is slowest.
struct PolyIndexer {
    std::vector<int> sizes;  // K_j + 1 per coordinate

    int dim() const {
        int n = 1;
        for (int s : sizes) n *= s;
        return n;
    }
    int flat(const std::vector<int>& deg) const {
        int f = 0;
        for (size_t j = 0; j < sizes.size(); ++j) f = f * sizes[j] + deg[j];
        return f;
    }
    std::vector<int> degrees(int flat) const {
        std::vector<int> deg(sizes.size());
        for (size_t j = sizes.size(); j-- > 0;) {
            deg[j] = flat % sizes[j];
            flat /= sizes[j];
        }
        return deg;
    }
};

// Adds scale * (op1d acting on coordinate j) to M over the tensor basis.
// Shared by every assembly that must agree bit for bit with another: two
// callers passing the same scale run the same instruction sequence.
void place_coordinate_op(Eigen::Ref<Eigen::MatrixXd> M, const PolyIndexer& poly, int j,
                         const Eigen::MatrixXd& op1d, double scale);

// Flat indices whose per-coordinate degrees all fit the reliable windows.
std::vector<int> reliable_poly_indices(const PolyIndexer& idx, const std::vector<PolyBasis>& bases);

// Matrix of H_mu = -Laplace - <beta, grad> on the tensor polynomial basis.
// Throws DegreeOverflow when some factor has an empty reliable window.
OperatorMatrix assemble_h_mu(const ProductMeasure& m, const std::vector<PolyBasis>& bases);

// Form matrix: entries int <grad p_r, grad p_c> dmu by node quadrature
// (independent of the symbolic H_mu route).
OperatorMatrix assemble_form_matrix(const ProductMeasure& m, const std::vector<PolyBasis>& bases);

// int <grad u, grad v> dmu for coefficient vectors over the tensor basis.
double dirichlet_form(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                      const ProductMeasure& m, const std::vector<PolyBasis>& bases);

} // namespace sedop
