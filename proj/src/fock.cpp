#include "sedop/fock.hpp"

#include <cmath>
#include <string>

#include "sedop/errors.hpp"

namespace sedop {

namespace {

void enumerate_level(int d, int n, MultiIndex& cur, int pos, int rem,
                     std::vector<MultiIndex>& out) {
    if (pos == d - 1) {
        cur[static_cast<size_t>(pos)] = rem;
        out.push_back(cur);
        return;
    }
    for (int v = rem; v >= 0; --v) {
        cur[static_cast<size_t>(pos)] = v;
        enumerate_level(d, n, cur, pos + 1, rem - v, out);
    }
}

} // namespace

FockIndexSet::FockIndexSet(int d, int N) : d_(d), N_(N) {
    if (d < 1) throw Error("FockIndexSet: dimension must be >= 1");
    if (N < 0) throw Error("FockIndexSet: level cap must be >= 0");
    for (int n = 0; n <= N; ++n) {
        levelBegin_.push_back(static_cast<int>(idx_.size()));
        MultiIndex cur(static_cast<size_t>(d), 0);
        enumerate_level(d, n, cur, 0, n, idx_);
        while (level_.size() < idx_.size()) level_.push_back(n);
    }
    levelBegin_.push_back(static_cast<int>(idx_.size()));
    for (size_t i = 0; i < idx_.size(); ++i) pos_[idx_[i]] = static_cast<int>(i);
}

int FockIndexSet::find(const MultiIndex& alpha) const {
    const auto it = pos_.find(alpha);
    return it == pos_.end() ? -1 : it->second;
}

int FockIndexSet::levelCount(int n) const {
    return levelBegin_[static_cast<size_t>(n) + 1] - levelBegin_[static_cast<size_t>(n)];
}

double SymTensor::norm2() const {
    double s = 0.0;
    for (const auto& [a, v] : coeffs) s += v * v;
    return s;
}

SymTensor sym_product(const SymTensor& a, const SymTensor& b, int cap) {
    if (a.d != b.d) throw Error("sym_product: dimension mismatch");
    if (a.degree + b.degree > cap)
        throw LevelOverflow("sym_product: result degree " + std::to_string(a.degree + b.degree) +
                            " exceeds cap " + std::to_string(cap));
    SymTensor out;
    out.d = a.d;
    out.degree = a.degree + b.degree;
    for (const auto& [al, va] : a.coeffs)
        for (const auto& [be, vb] : b.coeffs) {
            MultiIndex sum(al.size());
            double comb = 1.0;
            for (size_t j = 0; j < al.size(); ++j) {
                sum[j] = al[j] + be[j];
                // C(al_j + be_j, al_j) built up factor by factor.
                for (int t = 1; t <= be[j]; ++t)
                    comb *= static_cast<double>(al[j] + t) / static_cast<double>(t);
            }
            out.coeffs[sum] += va * vb * std::sqrt(comb);
        }
    return out;
}

double FockVector::norm2() const {
    double s = 0.0;
    for (const auto& t : levels) s += t.norm2();
    return s;
}

GammaMuSpace space_for(const std::vector<PolyBasis>& bases, int N) {
    std::vector<int> sizes;
    sizes.reserve(bases.size());
    for (const auto& b : bases) sizes.push_back(b.K() + 1);
    return GammaMuSpace(sizes, N);
}

GammaMuVector zero_vector(const GammaMuSpace& space) {
    GammaMuVector v;
    v.space = &space;
    v.c = Eigen::VectorXd::Zero(space.dim());
    return v;
}

namespace {

// w += scale * (op1d on coordinate j) v over the tensor polynomial layout.
void apply_coordinate_op(Eigen::Ref<Eigen::VectorXd> w, const Eigen::Ref<const Eigen::VectorXd>& v,
                         const PolyIndexer& poly, int j, const Eigen::MatrixXd& op1d,
                         double scale) {
    const int d = static_cast<int>(poly.sizes.size());
    const int sj = poly.sizes[static_cast<size_t>(j)];
    int stride = 1;
    for (int m = d - 1; m > j; --m) stride *= poly.sizes[static_cast<size_t>(m)];
    const int outer = poly.dim() / sj;
    for (int o = 0; o < outer; ++o) {
        const int hi = o / stride;
        const int lo = o % stride;
        const int base = hi * stride * sj + lo;
        for (int r = 0; r < sj; ++r) {
            double acc = 0.0;
            for (int c = 0; c < sj; ++c) acc += op1d(r, c) * v(base + c * stride);
            w(base + r * stride) += scale * acc;
        }
    }
}

// Highest degree on coordinate j among binarily nonzero entries of the block.
int max_degree_on(const Eigen::Ref<const Eigen::VectorXd>& v, const PolyIndexer& poly, int j) {
    int best = -1;
    for (int f = 0; f < poly.dim(); ++f)
        if (v(f) != 0.0) best = std::max(best, poly.degrees(f)[static_cast<size_t>(j)]);
    return best;
}

struct OpsSet {
    std::vector<Ops1D> per;
};

OpsSet ops_for(const std::vector<PolyBasis>& bases) {
    OpsSet s;
    s.per.reserve(bases.size());
    for (const auto& b : bases) s.per.push_back(build_ops(b));
    return s;
}

void require_space(const GammaMuVector& F) {
    if (F.space == nullptr) throw Error("vector is not attached to a space");
    if (F.c.size() != F.space->dim()) throw Error("vector length does not match its space");
}

std::string gm_basis_id(const GammaMuSpace& sp) {
    std::string s = "poly-fock K=(";
    for (size_t j = 0; j < sp.poly.sizes.size(); ++j) {
        if (j) s += ",";
        s += std::to_string(sp.poly.sizes[j] - 1);
    }
    return s + ") N=" + std::to_string(sp.fock.N());
}

std::string gm_truncation_note(const std::vector<PolyBasis>& bases) {
    std::string s = "entries with any per-coordinate degree above (";
    for (size_t j = 0; j < bases.size(); ++j) {
        if (j) s += ",";
        s += std::to_string(bases[j].Krel());
    }
    return s + ") include truncated multiplication by beta; all particle levels exact";
}

} // namespace

std::vector<int> reliable_gm_indices(const GammaMuSpace& sp, const std::vector<PolyBasis>& bases) {
    const std::vector<int> polyRel = reliable_poly_indices(sp.poly, bases);
    std::vector<int> out;
    out.reserve(polyRel.size() * static_cast<size_t>(sp.fock.size()));
    for (int f = 0; f < sp.fock.size(); ++f)
        for (int p : polyRel) out.push_back(sp.flat(f, p));
    return out;
}

GammaMuVector delta(const GammaMuVector& F, const ProductMeasure& m,
                    const std::vector<PolyBasis>& bases) {
    require_space(F);
    const GammaMuSpace& sp = *F.space;
    const int pd = sp.poly.dim();
    const int N = sp.fock.N();
    for (int f = sp.fock.levelBegin(N); f < sp.fock.size(); ++f)
        if ((F.c.segment(f * pd, pd).array() != 0.0).any())
            throw TruncationLoss("delta: top level is nonzero, result would be truncated");
    if (static_cast<int>(bases.size()) != m.d())
        throw Error("delta: basis list does not match measure dimension");
    const OpsSet ops = ops_for(bases);
    GammaMuVector out = zero_vector(sp);
    for (int f = 0; f < sp.fock.size(); ++f) {
        if (sp.fock.level(f) >= N) continue;
        const MultiIndex& alpha = sp.fock.at(f);
        for (int j = 0; j < sp.fock.d(); ++j) {
            MultiIndex up = alpha;
            ++up[static_cast<size_t>(j)];
            const int tgt = sp.fock.find(up);
            apply_coordinate_op(out.c.segment(tgt * pd, pd), F.c.segment(f * pd, pd), sp.poly, j,
                                ops.per[static_cast<size_t>(j)].D,
                                std::sqrt(static_cast<double>(alpha[static_cast<size_t>(j)] + 1)));
        }
    }
    return out;
}

GammaMuVector delta_star(const GammaMuVector& F, const ProductMeasure& m,
                         const std::vector<PolyBasis>& bases) {
    require_space(F);
    const GammaMuSpace& sp = *F.space;
    const int pd = sp.poly.dim();
    if (static_cast<int>(bases.size()) != m.d())
        throw Error("delta_star: basis list does not match measure dimension");
    const OpsSet ops = ops_for(bases);
    GammaMuVector out = zero_vector(sp);
    for (int f = 0; f < sp.fock.size(); ++f) {
        const MultiIndex& alpha = sp.fock.at(f);
        for (int j = 0; j < sp.fock.d(); ++j) {
            if (alpha[static_cast<size_t>(j)] == 0) continue;
            const int maxdeg = max_degree_on(F.c.segment(f * pd, pd), sp.poly, j);
            if (maxdeg > bases[static_cast<size_t>(j)].Krel() - 1)
                throw DegreeOverflow(
                    "delta_star: multiplication by beta on coordinate " + std::to_string(j) +
                    " would exceed the declared degree window (degree " + std::to_string(maxdeg) +
                    ")");
            MultiIndex down = alpha;
            --down[static_cast<size_t>(j)];
            const int tgt = sp.fock.find(down);
            apply_coordinate_op(out.c.segment(tgt * pd, pd), F.c.segment(f * pd, pd), sp.poly, j,
                                ops.per[static_cast<size_t>(j)].DB,
                                -std::sqrt(static_cast<double>(alpha[static_cast<size_t>(j)])));
        }
    }
    return out;
}

GammaMuVector dgamma_R(const GammaMuVector& F, const ProductMeasure& m,
                       const std::vector<PolyBasis>& bases) {
    require_space(F);
    const GammaMuSpace& sp = *F.space;
    const int pd = sp.poly.dim();
    if (static_cast<int>(bases.size()) != m.d())
        throw Error("dgamma_R: basis list does not match measure dimension");
    const OpsSet ops = ops_for(bases);
    GammaMuVector out = zero_vector(sp);
    for (int f = 0; f < sp.fock.size(); ++f) {
        const MultiIndex& alpha = sp.fock.at(f);
        for (int j = 0; j < sp.fock.d(); ++j) {
            if (alpha[static_cast<size_t>(j)] == 0) continue;
            const int maxdeg = max_degree_on(F.c.segment(f * pd, pd), sp.poly, j);
            if (maxdeg > bases[static_cast<size_t>(j)].Krel())
                throw DegreeOverflow(
                    "dgamma_R: multiplication by V'' on coordinate " + std::to_string(j) +
                    " would exceed the declared degree window (degree " + std::to_string(maxdeg) +
                    ")");
            apply_coordinate_op(out.c.segment(f * pd, pd), F.c.segment(f * pd, pd), sp.poly, j,
                                ops.per[static_cast<size_t>(j)].W,
                                static_cast<double>(alpha[static_cast<size_t>(j)]));
        }
    }
    return out;
}

std::pair<OperatorMatrix, OperatorMatrix> assemble_delta_matrices(
    const ProductMeasure& m, const std::vector<PolyBasis>& bases, int N) {
    if (static_cast<int>(bases.size()) != m.d())
        throw Error("assemble_delta_matrices: basis list does not match measure dimension");
    const GammaMuSpace sp = space_for(bases, N);
    const OpsSet ops = ops_for(bases);
    const int pd = sp.poly.dim();
    OperatorMatrix del, delStar;
    del.entries = Eigen::MatrixXd::Zero(sp.dim(), sp.dim());
    delStar.entries = Eigen::MatrixXd::Zero(sp.dim(), sp.dim());
    for (int f = 0; f < sp.fock.size(); ++f) {
        const MultiIndex& alpha = sp.fock.at(f);
        for (int j = 0; j < sp.fock.d(); ++j) {
            const int aj = alpha[static_cast<size_t>(j)];
            MultiIndex up = alpha;
            ++up[static_cast<size_t>(j)];
            const int tgtUp = sp.fock.find(up);
            if (tgtUp >= 0)
                place_coordinate_op(del.entries.block(tgtUp * pd, f * pd, pd, pd), sp.poly, j,
                                    ops.per[static_cast<size_t>(j)].D,
                                    std::sqrt(static_cast<double>(aj + 1)));
            if (aj > 0) {
                MultiIndex down = alpha;
                --down[static_cast<size_t>(j)];
                const int tgtDown = sp.fock.find(down);
                place_coordinate_op(delStar.entries.block(tgtDown * pd, f * pd, pd, pd), sp.poly, j,
                                    ops.per[static_cast<size_t>(j)].DB,
                                    -std::sqrt(static_cast<double>(aj)));
            }
        }
    }
    del.rowBasis = del.colBasis = gm_basis_id(sp);
    delStar.rowBasis = delStar.colBasis = del.rowBasis;
    del.symmetric = delStar.symmetric = false;
    del.truncationNote = "level-raising: the image of the top level falls outside the truncation";
    delStar.truncationNote = gm_truncation_note(bases);
    del.reliable = reliable_gm_indices(sp, bases);
    delStar.reliable = del.reliable;
    return {del, delStar};
}

namespace {

// M(tgtFock, srcFock block) += scale * (opj on coordinate j) (opk on coordinate k),
// j != k.
void place_two_coordinate_op(Eigen::Ref<Eigen::MatrixXd> M, const PolyIndexer& poly, int j,
                             const Eigen::MatrixXd& opj, int k, const Eigen::MatrixXd& opk,
                             double scale) {
    const int dim = poly.dim();
    for (int c = 0; c < dim; ++c) {
        const std::vector<int> cdeg = poly.degrees(c);
        std::vector<int> rdeg = cdeg;
        const int sj = poly.sizes[static_cast<size_t>(j)];
        const int sk = poly.sizes[static_cast<size_t>(k)];
        for (int rj = 0; rj < sj; ++rj) {
            const double ej = opj(rj, cdeg[static_cast<size_t>(j)]);
            if (ej == 0.0) continue;
            rdeg[static_cast<size_t>(j)] = rj;
            for (int rk = 0; rk < sk; ++rk) {
                const double ek = opk(rk, cdeg[static_cast<size_t>(k)]);
                if (ek == 0.0) continue;
                rdeg[static_cast<size_t>(k)] = rk;
                M(poly.flat(rdeg), c) += scale * ej * ek;
            }
            rdeg[static_cast<size_t>(k)] = cdeg[static_cast<size_t>(k)];
        }
    }
}

} // namespace

OperatorMatrix assemble_h_tensor_one(const ProductMeasure& m,
                                     const std::vector<PolyBasis>& bases, int N) {
    const GammaMuSpace sp = space_for(bases, N);
    const int pd = sp.poly.dim();
    OperatorMatrix out;
    out.entries = Eigen::MatrixXd::Zero(sp.dim(), sp.dim());
    for (int f = 0; f < sp.fock.size(); ++f)
        for (int j = 0; j < m.d(); ++j) {
            const Ops1D ops = build_ops(bases[static_cast<size_t>(j)]);
            place_coordinate_op(out.entries.block(f * pd, f * pd, pd, pd), sp.poly, j, ops.H1, 1.0);
        }
    out.rowBasis = out.colBasis = gm_basis_id(sp);
    out.symmetric = true;
    out.truncationNote = gm_truncation_note(bases);
    out.reliable = reliable_gm_indices(sp, bases);
    return out;
}

OperatorMatrix assemble_dgamma_matrix(const ProductMeasure& m,
                                      const std::vector<PolyBasis>& bases, int N) {
    if (static_cast<int>(bases.size()) != m.d())
        throw Error("assemble_dgamma_matrix: basis list does not match measure dimension");
    const GammaMuSpace sp = space_for(bases, N);
    const OpsSet ops = ops_for(bases);
    const int pd = sp.poly.dim();
    OperatorMatrix out;
    out.entries = Eigen::MatrixXd::Zero(sp.dim(), sp.dim());
    for (int f = 0; f < sp.fock.size(); ++f) {
        const MultiIndex& alpha = sp.fock.at(f);
        for (int j = 0; j < sp.fock.d(); ++j)
            if (alpha[static_cast<size_t>(j)] > 0)
                place_coordinate_op(out.entries.block(f * pd, f * pd, pd, pd), sp.poly, j,
                                    ops.per[static_cast<size_t>(j)].W,
                                    static_cast<double>(alpha[static_cast<size_t>(j)]));
    }
    out.rowBasis = out.colBasis = gm_basis_id(sp);
    out.symmetric = true;
    out.truncationNote = gm_truncation_note(bases);
    out.reliable = reliable_gm_indices(sp, bases);
    return out;
}

OperatorMatrix assemble_laplacian(const ProductMeasure& m,
                                  const std::vector<PolyBasis>& bases, int N) {
    for (const auto& b : bases)
        if (b.Krel() < 0)
            throw DegreeOverflow("assemble_laplacian: reliable degree window is empty");
    const GammaMuSpace sp = space_for(bases, N);
    const int pd = sp.poly.dim();
    OperatorMatrix out;
    out.entries = Eigen::MatrixXd::Zero(sp.dim(), sp.dim());
    // Fock-diagonal blocks. The vacuum block repeats the H_mu assembly
    // instruction for instruction (scale 1, no G1 term), which is what makes
    // the level-0 extension property exact rather than approximate.
    for (int f = 0; f < sp.fock.size(); ++f) {
        const MultiIndex& alpha = sp.fock.at(f);
        auto block = out.entries.block(f * pd, f * pd, pd, pd);
        for (int j = 0; j < m.d(); ++j) {
            const Ops1D ops = build_ops(bases[static_cast<size_t>(j)]);
            const int aj = alpha[static_cast<size_t>(j)];
            place_coordinate_op(block, sp.poly, j, ops.H1, 1.0 + aj);
            if (aj > 0) place_coordinate_op(block, sp.poly, j, ops.G1, static_cast<double>(aj));
        }
    }
    // Particle-transfer blocks, j lowered and k raised.
    const OpsSet ops = ops_for(bases);
    for (int f = 0; f < sp.fock.size(); ++f) {
        const MultiIndex& alpha = sp.fock.at(f);
        for (int j = 0; j < sp.fock.d(); ++j) {
            if (alpha[static_cast<size_t>(j)] == 0) continue;
            for (int k = 0; k < sp.fock.d(); ++k) {
                if (k == j) continue;
                MultiIndex tgt = alpha;
                --tgt[static_cast<size_t>(j)];
                ++tgt[static_cast<size_t>(k)];
                const int t = sp.fock.find(tgt);
                const double amp = -2.0 * std::sqrt(static_cast<double>(
                                              alpha[static_cast<size_t>(j)] *
                                              (alpha[static_cast<size_t>(k)] + 1)));
                place_two_coordinate_op(out.entries.block(t * pd, f * pd, pd, pd), sp.poly, j,
                                        ops.per[static_cast<size_t>(j)].DB, k,
                                        ops.per[static_cast<size_t>(k)].D, amp);
            }
        }
    }
    out.rowBasis = out.colBasis = gm_basis_id(sp);
    out.symmetric = true;
    out.truncationNote = gm_truncation_note(bases);
    out.reliable = reliable_gm_indices(sp, bases);
    return out;
}

Theorem1Decomposition decompose_theorem1(const ProductMeasure& m,
                                         const std::vector<PolyBasis>& bases, int N) {
    const OperatorMatrix delta = assemble_laplacian(m, bases, N);
    const OperatorMatrix hTensorOne = assemble_h_tensor_one(m, bases, N);
    const OperatorMatrix dGamma = assemble_dgamma_matrix(m, bases, N);
    Theorem1Decomposition out;
    out.A = delta;
    out.A.entries = delta.entries - hTensorOne.entries - dGamma.entries;
    out.symmetryResidual = out.A.symmetry_defect();
    out.A.symmetric = out.symmetryResidual <= 1e-10;
    out.A.truncationNote = delta.truncationNote;
    const auto spec = out.A.reliable_spectrum();
    out.minReliableEigenvalue = spec.empty() ? 0.0 : spec.front();
    return out;
}

} // namespace sedop
