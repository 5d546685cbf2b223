#include "sedop/basis.hpp"

#include <cmath>

#include "sedop/errors.hpp"

namespace sedop {

namespace {

long double dot(const std::vector<long double>& w, const MatrixXld& V, int i, int j) {
    long double s = 0.0L;
    for (int n = 0; n < V.cols(); ++n) s += w[static_cast<size_t>(n)] * V(i, n) * V(j, n);
    return s;
}

} // namespace

double PolyBasis::evaluate(int k, double x) const {
    return static_cast<double>(poly::eval(coeffs_[static_cast<size_t>(k)],
                                          static_cast<long double>(x)));
}

MatrixXld PolyBasis::mult_matrix_internal(const poly::Coeffs& q) const {
    const int n = Kint_ + 1;
    const auto& w = m_.refWeights();
    const auto& xs = m_.refNodes();
    const int nn = static_cast<int>(xs.size());
    std::vector<long double> qv(static_cast<size_t>(nn));
    for (int i = 0; i < nn; ++i) qv[static_cast<size_t>(i)] = poly::eval(q, xs[static_cast<size_t>(i)]);
    MatrixXld A(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            long double s = 0.0L;
            for (int i = 0; i < nn; ++i)
                s += w[static_cast<size_t>(i)] * qv[static_cast<size_t>(i)] * vals_(r, i) * vals_(c, i);
            A(r, c) = s;
        }
    return A;
}

MatrixXld PolyBasis::deriv_matrix_internal() const {
    const int n = Kint_ + 1;
    MatrixXld D = MatrixXld::Zero(n, n);
    // Expand p_c' in the family by back-substitution on the triangular
    // coefficient table; exact on the spanned space.
    for (int c = 1; c < n; ++c) {
        poly::Coeffs rem = poly::derivative(coeffs_[static_cast<size_t>(c)]);
        rem.resize(static_cast<size_t>(n), 0.0L);
        for (int r = c - 1; r >= 0; --r) {
            const long double lead = coeffs_[static_cast<size_t>(r)][static_cast<size_t>(r)];
            const long double coef = rem[static_cast<size_t>(r)] / lead;
            D(r, c) = coef;
            for (int k = 0; k <= r; ++k)
                rem[static_cast<size_t>(k)] -= coef * coeffs_[static_cast<size_t>(r)][static_cast<size_t>(k)];
        }
    }
    return D;
}

PolyBasis build_basis(const Measure1D& m, int K) {
    if (K < 0) throw Error("build_basis: K must be >= 0");
    PolyBasis b;
    b.m_ = m;
    b.K_ = K;
    const int degV = m.potential().degree();
    b.Kint_ = K + degV;
    b.Krel_ = K - (degV - 2);
    const int n = b.Kint_ + 1;

    const auto& xs = m.refNodes();
    const auto& w = m.refWeights();
    const int nn = static_cast<int>(xs.size());
    if (2 * n + 4 > nn)
        throw LossOfOrthogonality("build_basis: discretization cannot resolve degree " +
                                  std::to_string(b.Kint_));

    // Modified Gram-Schmidt with one re-orthogonalization pass, long double.
    MatrixXld V(n, nn);
    for (int i = 0; i < nn; ++i) {
        long double p = 1.0L;
        for (int k = 0; k < n; ++k) {
            V(k, i) = p;
            p *= xs[static_cast<size_t>(i)];
        }
    }
    for (int k = 0; k < n; ++k) {
        long double norm0 = std::sqrt(dot(w, V, k, k));
        for (int pass = 0; pass < 2; ++pass) {
            for (int j = 0; j < k; ++j) {
                const long double c = dot(w, V, k, j);
                for (int i = 0; i < nn; ++i) V(k, i) -= c * V(j, i);
            }
        }
        const long double norm = std::sqrt(dot(w, V, k, k));
        if (!(norm > 1e-12L * norm0))
            throw LossOfOrthogonality("build_basis: degree " + std::to_string(k) +
                                      " annihilated, degree too high for conditioning");
        const long double inv = 1.0L / norm;
        for (int i = 0; i < nn; ++i) V(k, i) *= inv;
    }
    b.vals_ = V;

    // Gram residual of the orthonormalized family.
    long double gram = 0.0L;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            const long double g = dot(w, V, i, j) - (i == j ? 1.0L : 0.0L);
            gram = std::max(gram, std::abs(g));
        }
    b.gramResidual_ = static_cast<double>(gram);
    if (b.gramResidual_ > 1e-8)
        throw LossOfOrthogonality("build_basis: Gram residual " +
                                  std::to_string(b.gramResidual_));

    // Three-term recurrence of the family; analytic for the gaussian preset,
    // otherwise projected out of the MGS vectors.
    std::vector<long double> alpha(static_cast<size_t>(n), 0.0L);
    std::vector<long double> bcof(static_cast<size_t>(n + 1), 0.0L);
    if (m.potential().kind() == PotentialKind::gaussian) {
        auto [ra, rb] = m.recurrence(n + 1);
        for (int k = 0; k < n; ++k) alpha[static_cast<size_t>(k)] = ra[static_cast<size_t>(k)];
        for (int k = 1; k <= n; ++k) bcof[static_cast<size_t>(k)] = std::sqrt(rb[static_cast<size_t>(k)]);
    } else {
        for (int k = 0; k < n; ++k) {
            long double a = 0.0L, bb = 0.0L;
            for (int i = 0; i < nn; ++i) {
                const long double xp = xs[static_cast<size_t>(i)] * V(k, i);
                a += w[static_cast<size_t>(i)] * xp * V(k, i);
                if (k + 1 < n) bb += w[static_cast<size_t>(i)] * xp * V(k + 1, i);
            }
            alpha[static_cast<size_t>(k)] = a;
            if (k + 1 < n) bcof[static_cast<size_t>(k + 1)] = bb;
        }
        // b_n for the top degree: norm of (x - a_{n-1}) p_{n-1} - b_{n-1} p_{n-2}.
        {
            const int k = n - 1;
            long double norm2 = 0.0L;
            for (int i = 0; i < nn; ++i) {
                long double q = (xs[static_cast<size_t>(i)] - alpha[static_cast<size_t>(k)]) * V(k, i);
                if (k > 0) q -= bcof[static_cast<size_t>(k)] * V(k - 1, i);
                norm2 += w[static_cast<size_t>(i)] * q * q;
            }
            bcof[static_cast<size_t>(n)] = std::sqrt(norm2);
        }
    }

    // Coefficient table from the recurrence (stable against moment-matrix
    // conditioning); p_0 = 1 because the discrete measure has unit mass.
    b.coeffs_.assign(static_cast<size_t>(n), poly::Coeffs{});
    b.coeffs_[0] = {1.0L};
    if (n > 1) {
        for (int k = 0; k + 1 < n; ++k) {
            poly::Coeffs next(static_cast<size_t>(k + 2), 0.0L);
            const auto& pk = b.coeffs_[static_cast<size_t>(k)];
            for (size_t i = 0; i < pk.size(); ++i) {
                next[i + 1] += pk[i];
                next[i] -= alpha[static_cast<size_t>(k)] * pk[i];
            }
            if (k > 0) {
                const auto& pm = b.coeffs_[static_cast<size_t>(k - 1)];
                for (size_t i = 0; i < pm.size(); ++i) next[i] -= bcof[static_cast<size_t>(k)] * pm[i];
            }
            const long double inv = 1.0L / bcof[static_cast<size_t>(k + 1)];
            for (auto& c : next) c *= inv;
            b.coeffs_[static_cast<size_t>(k + 1)] = next;
        }
    }

    // Cross-check the two representations on the discretization.
    {
        long double worst = 0.0L;
        for (int k = 0; k < n; ++k) {
            long double err2 = 0.0L;
            for (int i = 0; i < nn; ++i) {
                const long double d =
                    poly::eval(b.coeffs_[static_cast<size_t>(k)], xs[static_cast<size_t>(i)]) - V(k, i);
                err2 += w[static_cast<size_t>(i)] * d * d;
            }
            worst = std::max(worst, std::sqrt(err2));
        }
        if (static_cast<double>(worst) > 1e-9)
            throw LossOfOrthogonality("build_basis: recurrence/MGS mismatch " +
                                      std::to_string(static_cast<double>(worst)));
    }

    // Declared-block operator matrices.
    const int nd = K + 1;
    b.X_.resize(nd, nd);
    {
        MatrixXld X = b.mult_matrix_internal({0.0L, 1.0L});
        for (int r = 0; r < nd; ++r)
            for (int c = 0; c < nd; ++c) b.X_(r, c) = static_cast<double>(X(r, c));
    }
    b.D_.resize(nd, nd);
    {
        MatrixXld D = b.deriv_matrix_internal();
        for (int r = 0; r < nd; ++r)
            for (int c = 0; c < nd; ++c) b.D_(r, c) = static_cast<double>(D(r, c));
    }
    return b;
}

} // namespace sedop
