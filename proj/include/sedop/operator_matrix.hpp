#pragma once
#include <Eigen/Dense>
#include <string>
#include <vector>

namespace sedop {

// Dense operator in a declared product basis with truncation bookkeeping.
// `reliable` lists the indices whose rows and columns are exact under the
// truncation; every spectral claim downstream is made on that block only.
struct OperatorMatrix {
    Eigen::MatrixXd entries;
    std::string rowBasis;
    std::string colBasis;
    bool symmetric = false;
    std::string truncationNote;
    std::vector<int> reliable;

    // ||M - M^T||_F / max(1, ||M||_F)
    double symmetry_defect() const;

    // Principal submatrix on the reliable indices.
    Eigen::MatrixXd reliable_block() const;

    // Ascending eigenvalues of the symmetrized reliable block.
    std::vector<double> reliable_spectrum() const;
};

} // namespace sedop
