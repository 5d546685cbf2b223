#include "sedop/dirichlet.hpp"

#include <cmath>
#include <functional>

#include "sedop/errors.hpp"

namespace sedop {

std::vector<long double> expand_in_family(const PolyBasis& b, const poly::Coeffs& q) {
    const int n = b.Kint() + 1;
    if (poly::degree(q) >= n)
        throw DegreeOverflow("expand_in_family: degree " + std::to_string(poly::degree(q)) +
                             " exceeds internal degree " + std::to_string(b.Kint()));
    poly::Coeffs rem = q;
    rem.resize(static_cast<size_t>(n), 0.0L);
    std::vector<long double> out(static_cast<size_t>(n), 0.0L);
    const auto& table = b.coefficientTable();
    for (int r = n - 1; r >= 0; --r) {
        const long double lead = table[static_cast<size_t>(r)][static_cast<size_t>(r)];
        const long double coef = rem[static_cast<size_t>(r)] / lead;
        out[static_cast<size_t>(r)] = coef;
        for (int k = 0; k <= r; ++k)
            rem[static_cast<size_t>(k)] -= coef * table[static_cast<size_t>(r)][static_cast<size_t>(k)];
    }
    return out;
}

namespace {

// Declared-block matrix of a symbolic polynomial operator: column c holds the
// internal-family expansion of op(p_c), truncated to rows 0..K.
Eigen::MatrixXd symbolic_matrix(const PolyBasis& b,
                                const std::function<poly::Coeffs(const poly::Coeffs&)>& op) {
    const int nd = b.K() + 1;
    Eigen::MatrixXd M(nd, nd);
    for (int c = 0; c < nd; ++c) {
        const auto coefs = expand_in_family(b, op(b.coefficientTable()[static_cast<size_t>(c)]));
        for (int r = 0; r < nd; ++r) M(r, c) = static_cast<double>(coefs[static_cast<size_t>(r)]);
    }
    return M;
}

} // namespace

Ops1D build_ops(const PolyBasis& b) {
    Ops1D ops;
    ops.K = b.K();
    ops.Krel = b.Krel();
    const Potential1D& pot = b.measure().potential();
    const poly::Coeffs beta = poly::scaled(pot.d1_coeffs(), -1.0L);
    const poly::Coeffs vpp = pot.d2_coeffs();

    ops.D = symbolic_matrix(b, [](const poly::Coeffs& p) { return poly::derivative(p); });
    ops.B = symbolic_matrix(b, [&](const poly::Coeffs& p) { return poly::product(beta, p); });
    ops.DD = symbolic_matrix(b, [](const poly::Coeffs& p) {
        return poly::derivative(poly::derivative(p));
    });
    ops.BD = symbolic_matrix(b, [&](const poly::Coeffs& p) {
        return poly::product(beta, poly::derivative(p));
    });
    ops.W = symbolic_matrix(b, [&](const poly::Coeffs& p) { return poly::product(vpp, p); });
    ops.X = symbolic_matrix(b, [](const poly::Coeffs& p) {
        return poly::product(poly::Coeffs{0.0L, 1.0L}, p);
    });
    // H1 = -(p'' + beta p'); G1 = -(p' + beta p)' = H1 + V'' p.
    ops.H1 = symbolic_matrix(b, [&](const poly::Coeffs& p) {
        const poly::Coeffs dp = poly::derivative(p);
        return poly::scaled(poly::sum(poly::derivative(dp), poly::product(beta, dp)), -1.0L);
    });
    ops.G1 = symbolic_matrix(b, [&](const poly::Coeffs& p) {
        const poly::Coeffs q = poly::sum(poly::derivative(p), poly::product(beta, p));
        return poly::scaled(poly::derivative(q), -1.0L);
    });
    ops.DB = ops.D + ops.B;

    // Node-quadrature form matrix, evaluated off the coefficient table so the
    // route shares nothing with the symbolic expansion above.
    const int nd = b.K() + 1;
    const Measure1D& m = b.measure();
    const auto& xs = m.refNodes();
    const auto& w = m.refWeights();
    const int nn = static_cast<int>(xs.size());
    MatrixXld dvals(nd, nn);
    for (int k = 0; k < nd; ++k) {
        const poly::Coeffs dk = poly::derivative(b.coefficientTable()[static_cast<size_t>(k)]);
        for (int i = 0; i < nn; ++i) dvals(k, i) = poly::eval(dk, xs[static_cast<size_t>(i)]);
    }
    ops.E.resize(nd, nd);
    for (int r = 0; r < nd; ++r)
        for (int c = 0; c <= r; ++c) {
            long double s = 0.0L;
            for (int i = 0; i < nn; ++i) s += w[static_cast<size_t>(i)] * dvals(r, i) * dvals(c, i);
            ops.E(r, c) = static_cast<double>(s);
            ops.E(c, r) = ops.E(r, c);
        }
    return ops;
}

void place_coordinate_op(Eigen::Ref<Eigen::MatrixXd> M, const PolyIndexer& poly, int j,
                         const Eigen::MatrixXd& op1d, double scale) {
    const int d = static_cast<int>(poly.sizes.size());
    const int sj = poly.sizes[static_cast<size_t>(j)];
    // Strides of coordinate j in the row-major flat index.
    int stride = 1;
    for (int m = d - 1; m > j; --m) stride *= poly.sizes[static_cast<size_t>(m)];
    const int outer = poly.dim() / sj;
    for (int o = 0; o < outer; ++o) {
        // Base flat index with coordinate j set to zero: distribute o over the
        // remaining coordinates around position j.
        const int hi = o / stride;
        const int lo = o % stride;
        const int base = hi * stride * sj + lo;
        for (int r = 0; r < sj; ++r)
            for (int c = 0; c < sj; ++c)
                M(base + r * stride, base + c * stride) += scale * op1d(r, c);
    }
}

namespace {

std::string poly_basis_id(const std::vector<PolyBasis>& bases) {
    std::string s = "tensor-poly K=(";
    for (size_t j = 0; j < bases.size(); ++j) {
        if (j) s += ",";
        s += std::to_string(bases[j].K());
    }
    return s + ")";
}

std::string reliable_note(const std::vector<PolyBasis>& bases) {
    std::string s = "entries with any per-coordinate degree above (";
    for (size_t j = 0; j < bases.size(); ++j) {
        if (j) s += ",";
        s += std::to_string(bases[j].Krel());
    }
    return s + ") include truncated multiplication by beta";
}

void check_bases(const ProductMeasure& m, const std::vector<PolyBasis>& bases) {
    if (bases.size() != static_cast<size_t>(m.d()))
        throw Error("basis list does not match measure dimension");
    for (const auto& b : bases)
        if (b.Krel() < 0)
            throw DegreeOverflow("reliable degree window is empty: K=" + std::to_string(b.K()) +
                                 ", deg V = " + std::to_string(b.measure().potential().degree()));
}

} // namespace

std::vector<int> reliable_poly_indices(const PolyIndexer& idx, const std::vector<PolyBasis>& bases) {
    std::vector<int> out;
    for (int f = 0; f < idx.dim(); ++f) {
        const auto deg = idx.degrees(f);
        bool ok = true;
        for (size_t j = 0; j < bases.size(); ++j)
            if (deg[j] > bases[j].Krel()) { ok = false; break; }
        if (ok) out.push_back(f);
    }
    return out;
}

OperatorMatrix assemble_h_mu(const ProductMeasure& m, const std::vector<PolyBasis>& bases) {
    check_bases(m, bases);
    PolyIndexer idx;
    for (const auto& b : bases) idx.sizes.push_back(b.K() + 1);
    OperatorMatrix out;
    out.entries = Eigen::MatrixXd::Zero(idx.dim(), idx.dim());
    for (int j = 0; j < m.d(); ++j) {
        const Ops1D ops = build_ops(bases[static_cast<size_t>(j)]);
        place_coordinate_op(out.entries, idx, j, ops.H1, 1.0);
    }
    out.rowBasis = out.colBasis = poly_basis_id(bases);
    out.symmetric = true;
    out.truncationNote = reliable_note(bases);
    out.reliable = reliable_poly_indices(idx, bases);
    return out;
}

OperatorMatrix assemble_form_matrix(const ProductMeasure& m, const std::vector<PolyBasis>& bases) {
    check_bases(m, bases);
    PolyIndexer idx;
    for (const auto& b : bases) idx.sizes.push_back(b.K() + 1);
    OperatorMatrix out;
    out.entries = Eigen::MatrixXd::Zero(idx.dim(), idx.dim());
    for (int j = 0; j < m.d(); ++j) {
        const Ops1D ops = build_ops(bases[static_cast<size_t>(j)]);
        place_coordinate_op(out.entries, idx, j, ops.E, 1.0);
    }
    out.rowBasis = out.colBasis = poly_basis_id(bases);
    out.symmetric = true;
    out.truncationNote = "form entries are quadrature integrals; exact at every degree";
    out.reliable = reliable_poly_indices(idx, bases);
    return out;
}

double dirichlet_form(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                      const ProductMeasure& m, const std::vector<PolyBasis>& bases) {
    const OperatorMatrix E = assemble_form_matrix(m, bases);
    if (u.size() != E.entries.rows() || v.size() != E.entries.rows())
        throw Error("dirichlet_form: coefficient vector size mismatch");
    return u.dot(E.entries * v);
}

} // namespace sedop
