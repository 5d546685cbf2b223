#include "sedop/segal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sedop/dirichlet.hpp"
#include "sedop/errors.hpp"

namespace sedop {

std::string two_variable_basis_id(const GammaMuSpace& sp) {
    std::string s = "tensor-poly K=(";
    for (std::size_t j = 0; j < sp.poly.sizes.size(); ++j) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%s%d", j ? "," : "", sp.poly.sizes[j] - 1);
        s += buf;
    }
    s += ") x hermite N=";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%d", sp.fock.N());
    s += buf;
    return s;
}

namespace {

// gamma-mu flat index (fockIdx * xdim + xFlat) -> two-variable flat index
// (xFlat * fockCount + fockIdx).
std::vector<Eigen::Index> layout_permutation(const GammaMuSpace& sp) {
    const Eigen::Index F = static_cast<Eigen::Index>(sp.fock.size());
    const Eigen::Index xdim = sp.poly.dim();
    std::vector<Eigen::Index> p(static_cast<std::size_t>(F * xdim));
    for (Eigen::Index f = 0; f < F; ++f)
        for (Eigen::Index x = 0; x < xdim; ++x)
            p[static_cast<std::size_t>(f * xdim + x)] = x * F + f;
    return p;
}

std::vector<int> remap_indices(const std::vector<int>& idx, const std::vector<Eigen::Index>& p) {
    std::vector<int> out;
    out.reserve(idx.size());
    for (int i : idx) out.push_back(static_cast<int>(p[static_cast<std::size_t>(i)]));
    std::sort(out.begin(), out.end());
    return out;
}

Eigen::MatrixXd reliable_block_of(const Eigen::MatrixXd& M, const std::vector<int>& rel) {
    const Eigen::Index n = static_cast<Eigen::Index>(rel.size());
    Eigen::MatrixXd B(n, n);
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r < n; ++r) B(r, c) = M(rel[static_cast<std::size_t>(r)],
                                                         rel[static_cast<std::size_t>(c)]);
    return B;
}

// M += coeff * (tensor of per-coordinate x ops) * (tensor of per-coordinate
// y ops); a null pointer stands for the identity on that coordinate. Indices
// follow the two-variable layout.
void add_term(Eigen::MatrixXd& M, const GammaMuSpace& sp,
              const std::vector<const Eigen::MatrixXd*>& xop,
              const std::vector<const Eigen::MatrixXd*>& yop, double coeff) {
    const Eigen::Index F = static_cast<Eigen::Index>(sp.fock.size());
    const int xdim = sp.poly.dim();
    const int d = sp.fock.d();
    std::vector<std::vector<int>> xdeg(static_cast<std::size_t>(xdim));
    for (int x = 0; x < xdim; ++x) xdeg[static_cast<std::size_t>(x)] = sp.poly.degrees(x);
    for (int cx = 0; cx < xdim; ++cx) {
        const std::vector<int>& cd = xdeg[static_cast<std::size_t>(cx)];
        for (int rx = 0; rx < xdim; ++rx) {
            const std::vector<int>& rd = xdeg[static_cast<std::size_t>(rx)];
            double fx = coeff;
            for (int j = 0; j < d && fx != 0.0; ++j) {
                if (xop[static_cast<std::size_t>(j)])
                    fx *= (*xop[static_cast<std::size_t>(j)])(rd[static_cast<std::size_t>(j)],
                                                              cd[static_cast<std::size_t>(j)]);
                else if (rd[static_cast<std::size_t>(j)] != cd[static_cast<std::size_t>(j)])
                    fx = 0.0;
            }
            if (fx == 0.0) continue;
            for (Eigen::Index cy = 0; cy < F; ++cy) {
                const MultiIndex& ac = sp.fock.at(static_cast<int>(cy));
                for (Eigen::Index ry = 0; ry < F; ++ry) {
                    const MultiIndex& ar = sp.fock.at(static_cast<int>(ry));
                    double fy = 1.0;
                    for (int j = 0; j < d && fy != 0.0; ++j) {
                        if (yop[static_cast<std::size_t>(j)])
                            fy *= (*yop[static_cast<std::size_t>(j)])(ar[static_cast<std::size_t>(j)],
                                                                     ac[static_cast<std::size_t>(j)]);
                        else if (ar[static_cast<std::size_t>(j)] != ac[static_cast<std::size_t>(j)])
                            fy = 0.0;
                    }
                    if (fy == 0.0) continue;
                    M(static_cast<Eigen::Index>(rx) * F + ry, static_cast<Eigen::Index>(cx) * F + cy) +=
                        fx * fy;
                }
            }
        }
    }
}

PolyBasis standard_hermite_basis(int N) {
    Measure1D gauss = build_measure(Potential1D::gaussian(1.0));
    return build_basis(gauss, N);
}

} // namespace

SegalMap build_segal_map(const GammaMuSpace& space) {
    SegalMap S;
    S.d = space.fock.d();
    S.N = space.fock.N();
    S.polySizes = space.poly.sizes;
    PolyBasis hb = standard_hermite_basis(S.N);

    // One-coordinate Gram of the Hermite family under the reference quadrature.
    const int n1 = S.N + 1;
    Eigen::MatrixXd G(n1, n1);
    {
        const MatrixXld& vals = hb.values();
        const std::vector<long double>& w = hb.measure().refWeights();
        for (int r = 0; r < n1; ++r)
            for (int c = 0; c < n1; ++c) {
                long double acc = 0.0L;
                for (std::size_t q = 0; q < w.size(); ++q)
                    acc += w[q] * vals(r, static_cast<Eigen::Index>(q)) *
                           vals(c, static_cast<Eigen::Index>(q));
                G(r, c) = static_cast<double>(acc);
            }
    }
    for (int j = 0; j < S.d; ++j) S.hermite.push_back(hb);

    const int F = static_cast<int>(space.fock.size());
    double worst = 0.0;
    for (int r = 0; r < F; ++r) {
        const MultiIndex& ar = space.fock.at(r);
        for (int c = 0; c < F; ++c) {
            const MultiIndex& ac = space.fock.at(c);
            double prod = 1.0;
            for (int j = 0; j < S.d; ++j) prod *= G(ar[static_cast<std::size_t>(j)],
                                                    ac[static_cast<std::size_t>(j)]);
            const double target = (r == c) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(prod - target));
        }
    }
    S.gramResidual = worst;

    const Eigen::Index dim = space.dim();
    std::vector<Eigen::Index> p = layout_permutation(space);
    S.matrix = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) S.matrix(p[static_cast<std::size_t>(i)], i) = 1.0;
    return S;
}

Eigen::VectorXd segal_transform(const GammaMuVector& F, const SegalMap& S) {
    if (F.space == nullptr) throw Error("segal_transform: vector has no space");
    const GammaMuSpace& sp = *F.space;
    if (sp.fock.d() != S.d || sp.fock.N() != S.N || sp.poly.sizes != S.polySizes)
        throw TruncationMismatch("segal_transform: vector and map use different truncations");
    const Eigen::Index nF = static_cast<Eigen::Index>(sp.fock.size());
    const Eigen::Index xdim = sp.poly.dim();
    Eigen::VectorXd out(nF * xdim);
    for (Eigen::Index f = 0; f < nF; ++f)
        for (Eigen::Index x = 0; x < xdim; ++x) out(x * nF + f) = F.c(f * xdim + x);
    return out;
}

TwoVariableOperator conjugate_to_two_variable(const OperatorMatrix& gm, const GammaMuSpace& space) {
    const Eigen::Index dim = space.dim();
    if (gm.entries.rows() != dim || gm.entries.cols() != dim)
        throw TruncationMismatch("conjugate_to_two_variable: matrix does not match the space");
    std::vector<Eigen::Index> p = layout_permutation(space);
    TwoVariableOperator out;
    out.op.entries.resize(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c)
        for (Eigen::Index r = 0; r < dim; ++r)
            out.op.entries(p[static_cast<std::size_t>(r)], p[static_cast<std::size_t>(c)]) =
                gm.entries(r, c);
    out.op.rowBasis = out.op.colBasis = two_variable_basis_id(space);
    out.op.symmetric = gm.symmetric;
    out.op.truncationNote = gm.truncationNote;
    out.op.reliable = remap_indices(gm.reliable, p);
    return out;
}

TwoVariableOperator assemble_h_gamma_R(const ProductMeasure& m,
                                       const std::vector<PolyBasis>& bases, int N) {
    GammaMuSpace space = space_for(bases, N);
    return conjugate_to_two_variable(assemble_dgamma_matrix(m, bases, N), space);
}

TwoVariableOperator tensor_with_y_identity(const OperatorMatrix& xOp, const GammaMuSpace& space) {
    const Eigen::Index F = static_cast<Eigen::Index>(space.fock.size());
    const Eigen::Index xdim = space.poly.dim();
    if (xOp.entries.rows() != xdim || xOp.entries.cols() != xdim)
        throw TruncationMismatch("tensor_with_y_identity: matrix does not match the x space");
    TwoVariableOperator out;
    out.op.entries = Eigen::MatrixXd::Zero(space.dim(), space.dim());
    for (Eigen::Index cx = 0; cx < xdim; ++cx)
        for (Eigen::Index rx = 0; rx < xdim; ++rx) {
            const double v = xOp.entries(rx, cx);
            if (v == 0.0) continue;
            for (Eigen::Index y = 0; y < F; ++y) out.op.entries(rx * F + y, cx * F + y) = v;
        }
    out.op.rowBasis = out.op.colBasis = two_variable_basis_id(space);
    out.op.symmetric = xOp.symmetric;
    out.op.truncationNote = xOp.truncationNote;
    out.op.reliable.reserve(xOp.reliable.size() * static_cast<std::size_t>(F));
    for (int x : xOp.reliable)
        for (Eigen::Index y = 0; y < F; ++y)
            out.op.reliable.push_back(static_cast<int>(static_cast<Eigen::Index>(x) * F + y));
    std::sort(out.op.reliable.begin(), out.op.reliable.end());
    return out;
}

TwoVariableOperator assemble_a_mu_explicit(const ProductMeasure& m,
                                           const std::vector<PolyBasis>& bases, int N) {
    const int d = m.d();
    if (static_cast<int>(bases.size()) != d)
        throw Error("assemble_a_mu_explicit: basis list does not match measure dimension");
    for (const PolyBasis& b : bases)
        if (b.Krel() < 0)
            throw DegreeOverflow("assemble_a_mu_explicit: no reliable degrees at this truncation");
    GammaMuSpace space = space_for(bases, N);

    std::vector<Ops1D> xops;
    for (int j = 0; j < d; ++j) xops.push_back(build_ops(bases[static_cast<std::size_t>(j)]));
    PolyBasis hb = standard_hermite_basis(space.fock.N());
    Ops1D yops = build_ops(hb);
    // Multiplication by y composed with d/dy; beta = -y for the standard
    // gaussian, so this is exactly -BD.
    Eigen::MatrixXd XD = -yops.BD;

    const Eigen::Index dim = space.dim();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
    std::vector<const Eigen::MatrixXd*> xop(static_cast<std::size_t>(d), nullptr);
    std::vector<const Eigen::MatrixXd*> yop(static_cast<std::size_t>(d), nullptr);
    auto clear = [&]() {
        std::fill(xop.begin(), xop.end(), nullptr);
        std::fill(yop.begin(), yop.end(), nullptr);
    };

    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
            const std::size_t ju = static_cast<std::size_t>(j);
            const std::size_t ku = static_cast<std::size_t>(k);
            // (d_j d_k u)(d_j d_k p)
            clear();
            if (j == k) {
                xop[ju] = &xops[ju].DD;
                yop[ju] = &yops.DD;
            } else {
                xop[ju] = &xops[ju].D;
                xop[ku] = &xops[ku].D;
                yop[ju] = &yops.D;
                yop[ku] = &yops.D;
            }
            add_term(M, space, xop, yop, 1.0);
            // (beta_k d_j u)(d_j d_k p)
            clear();
            if (j == k) {
                xop[ju] = &xops[ju].BD;
                yop[ju] = &yops.DD;
            } else {
                xop[ju] = &xops[ju].D;
                xop[ku] = &xops[ku].B;
                yop[ju] = &yops.D;
                yop[ku] = &yops.D;
            }
            add_term(M, space, xop, yop, 1.0);
            // -(d_j d_k u)(y_k d_j p)
            clear();
            if (j == k) {
                xop[ju] = &xops[ju].DD;
                yop[ju] = &XD;
            } else {
                xop[ju] = &xops[ju].D;
                xop[ku] = &xops[ku].D;
                yop[ju] = &yops.D;
                yop[ku] = &yops.X;
            }
            add_term(M, space, xop, yop, -1.0);
            // -(beta_k d_j u)(y_k d_j p)
            clear();
            if (j == k) {
                xop[ju] = &xops[ju].BD;
                yop[ju] = &XD;
            } else {
                xop[ju] = &xops[ju].D;
                xop[ku] = &xops[ku].B;
                yop[ju] = &yops.D;
                yop[ku] = &yops.X;
            }
            add_term(M, space, xop, yop, -1.0);
        }
    }

    TwoVariableOperator out;
    out.op.entries = std::move(M);
    out.op.rowBasis = out.op.colBasis = two_variable_basis_id(space);
    std::vector<Eigen::Index> p = layout_permutation(space);
    out.op.reliable = remap_indices(reliable_gm_indices(space, bases), p);
    out.op.symmetric = out.op.symmetry_defect() <= 1e-10;
    out.op.truncationNote =
        "multiplication blocks are truncation compressions; entries are exact pairings";
    return out;
}

BoldDelta assemble_bold_delta(const ProductMeasure& m, const std::vector<PolyBasis>& bases, int N) {
    GammaMuSpace space = space_for(bases, N);
    BoldDelta out;
    out.map = build_segal_map(space);

    OperatorMatrix lap = assemble_laplacian(m, bases, N);
    out.conjugated = conjugate_to_two_variable(lap, space);
    TwoVariableOperator hgr = assemble_h_gamma_R(m, bases, N);

    const Eigen::Index F = static_cast<Eigen::Index>(space.fock.size());
    const Eigen::Index xdim = space.poly.dim();
    Eigen::MatrixXd xH = assemble_h_mu(m, bases).entries;
    OperatorMatrix xHm;
    xHm.entries = xH;
    Eigen::MatrixXd Hx2v = tensor_with_y_identity(xHm, space).op.entries;

    TwoVariableOperator aexp = assemble_a_mu_explicit(m, bases, N);
    Eigen::MatrixXd asub = out.conjugated.op.entries - Hx2v - hgr.op.entries;

    const std::vector<int>& rel = out.conjugated.op.reliable;
    out.residualC1 = reliable_block_of(asub - aexp.op.entries, rel).norm();
    out.residualC2 = reliable_block_of(asub - 2.0 * aexp.op.entries, rel).norm();
    out.cBest = (out.residualC2 <= out.residualC1) ? 2.0 : 1.0;
    out.residualAtBest = std::min(out.residualC1, out.residualC2);

    out.componentSum.op.entries = Hx2v + hgr.op.entries + out.cBest * aexp.op.entries;
    out.componentSum.op.rowBasis = out.componentSum.op.colBasis = out.conjugated.op.rowBasis;
    out.componentSum.op.reliable = rel;
    out.componentSum.op.symmetric = out.componentSum.op.symmetry_defect() <= 1e-10;

    if (space.fock.d() == 1) {
        Ops1D yops = build_ops(out.map.hermite[0]);
        Eigen::MatrixXd M2(space.dim(), space.dim());
        for (Eigen::Index cx = 0; cx < xdim; ++cx)
            for (Eigen::Index rx = 0; rx < xdim; ++rx)
                for (Eigen::Index cy = 0; cy < F; ++cy)
                    for (Eigen::Index ry = 0; ry < F; ++ry)
                        M2(rx * F + ry, cx * F + cy) = xH(rx, cx) * yops.H1(ry, cy);
        out.identity1dResidual = reliable_block_of(asub - 2.0 * M2, rel).norm();
    }
    return out;
}

} // namespace sedop
