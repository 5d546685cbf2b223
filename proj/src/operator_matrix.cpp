#include "sedop/operator_matrix.hpp"

#include <algorithm>

namespace sedop {

double OperatorMatrix::symmetry_defect() const {
    const double num = (entries - entries.transpose()).norm();
    return num / std::max(1.0, entries.norm());
}

Eigen::MatrixXd OperatorMatrix::reliable_block() const {
    const int n = static_cast<int>(reliable.size());
    Eigen::MatrixXd B(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            B(r, c) = entries(reliable[static_cast<size_t>(r)], reliable[static_cast<size_t>(c)]);
    return B;
}

std::vector<double> OperatorMatrix::reliable_spectrum() const {
    Eigen::MatrixXd B = reliable_block();
    Eigen::MatrixXd S = 0.5 * (B + B.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    std::vector<double> out(static_cast<size_t>(es.eigenvalues().size()));
    for (int i = 0; i < es.eigenvalues().size(); ++i) out[static_cast<size_t>(i)] = es.eigenvalues()(i);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace sedop
