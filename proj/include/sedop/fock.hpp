#pragma once
#include <Eigen/Dense>
#include <map>
#include <vector>

#include "sedop/dirichlet.hpp"

namespace sedop {

using MultiIndex = std::vector<int>;

// Enumeration of {alpha in N^d : |alpha| <= N}: level-major, lexicographically
// descending within a level. Index 0 is the vacuum.
class FockIndexSet {
public:
    FockIndexSet(int d, int N);

    int d() const { return d_; }
    int N() const { return N_; }
    int size() const { return static_cast<int>(idx_.size()); }
    const MultiIndex& at(int i) const { return idx_[static_cast<size_t>(i)]; }
    int level(int i) const { return level_[static_cast<size_t>(i)]; }
    // -1 when alpha lies outside the truncation.
    int find(const MultiIndex& alpha) const;
    int levelBegin(int n) const { return levelBegin_[static_cast<size_t>(n)]; }
    int levelCount(int n) const;

private:
    int d_ = 1, N_ = 0;
    std::vector<MultiIndex> idx_;
    std::vector<int> level_;
    std::vector<int> levelBegin_;
    std::map<MultiIndex, int> pos_;
};

// Degree-homogeneous coefficient tensor in the occupation basis e(alpha).
struct SymTensor {
    int d = 1;
    int degree = 0;
    std::map<MultiIndex, double> coeffs;  // keys all satisfy |alpha| = degree

    double norm2() const;
};

// Symmetric product: e(alpha) x e(alpha') maps to
// sqrt(prod_j C(alpha_j + alpha'_j, alpha_j)) e(alpha + alpha'), extended
// bilinearly. The coefficient is what makes repeated products consistent with
// a^dag_j e(alpha) = sqrt(alpha_j + 1) e(alpha + 1_j).
// Throws LevelOverflow when the result degree exceeds cap.
SymTensor sym_product(const SymTensor& a, const SymTensor& b, int cap);

struct FockVector {
    int maxLevel = 0;
    std::vector<SymTensor> levels;  // degrees 0..maxLevel

    double norm2() const;
};

// Index layout for coefficient vectors over {tensor polynomials} x {e(alpha)}:
// flat = fockIdx * poly.dim() + polyFlat.
struct GammaMuSpace {
    FockIndexSet fock;
    PolyIndexer poly;

    GammaMuSpace(const std::vector<int>& polySizes, int N)
        : fock(static_cast<int>(polySizes.size()), N), poly{polySizes} {}

    int dim() const { return fock.size() * poly.dim(); }
    int flat(int fockIdx, int polyFlat) const { return fockIdx * poly.dim() + polyFlat; }
};

GammaMuSpace space_for(const std::vector<PolyBasis>& bases, int N);

// Flat indices whose polynomial part stays within every coordinate's reliable
// degree window; all particle levels are included.
std::vector<int> reliable_gm_indices(const GammaMuSpace& space, const std::vector<PolyBasis>& bases);

struct GammaMuVector {
    const GammaMuSpace* space = nullptr;
    Eigen::VectorXd c;

    double norm() const { return c.norm(); }
};

GammaMuVector zero_vector(const GammaMuSpace& space);

// Gradient lifted one level up: sum_j d/dx_j tensor a^dag_j.
// Throws TruncationLoss when the top level of F is nonzero.
GammaMuVector delta(const GammaMuVector& F, const ProductMeasure& m,
                    const std::vector<PolyBasis>& bases);

// Adjoint: -sum_j (d/dx_j + beta_j) tensor a_j.
// Throws DegreeOverflow when multiplication by beta would leave the declared
// degree window on a lowered coordinate.
GammaMuVector delta_star(const GammaMuVector& F, const ProductMeasure& m,
                         const std::vector<PolyBasis>& bases);

// Second quantization of the Hessian field: multiplication by
// sum_j alpha_j V_j''(x_j) on the e(alpha) component.
// Throws DegreeOverflow when multiplication by V'' would leave the window.
GammaMuVector dgamma_R(const GammaMuVector& F, const ProductMeasure& m,
                       const std::vector<PolyBasis>& bases);

// Matrices over the GammaMuSpace layout. Entries are exact Galerkin integrals
// (products of one-coordinate integrals), including at the top level.
std::pair<OperatorMatrix, OperatorMatrix> assemble_delta_matrices(
    const ProductMeasure& m, const std::vector<PolyBasis>& bases, int N);

// H_mu tensor identity (Fock-diagonal).
OperatorMatrix assemble_h_tensor_one(const ProductMeasure& m,
                                     const std::vector<PolyBasis>& bases, int N);

// identity tensor dGamma(R(.)) (Fock-diagonal multiplication blocks).
OperatorMatrix assemble_dgamma_matrix(const ProductMeasure& m,
                                      const std::vector<PolyBasis>& bases, int N);

// Delta = delta* delta + delta delta*, assembled blockwise in closed form:
//   diagonal block at alpha:  sum_j [(1+alpha_j) H1_j + alpha_j G1_j]
//   block (alpha-1_j+1_k, alpha), j != k:
//     -2 sqrt(alpha_j (alpha_k+1)) (d/dx_j + beta_j) x (d/dx_k)
// which avoids the truncation corruption a matrix product of the two ladder
// factors would introduce at the top level.
OperatorMatrix assemble_laplacian(const ProductMeasure& m,
                                  const std::vector<PolyBasis>& bases, int N);

struct Theorem1Decomposition {
    OperatorMatrix A;               // Delta - H tensor 1 - dGamma(R)
    double symmetryResidual = 0.0;  // symmetry defect of A
    double minReliableEigenvalue = 0.0;
};

Theorem1Decomposition decompose_theorem1(const ProductMeasure& m,
                                         const std::vector<PolyBasis>& bases, int N);

} // namespace sedop
