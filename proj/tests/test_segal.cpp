#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "sedop/errors.hpp"
#include "sedop/fock.hpp"
#include "sedop/measure.hpp"
#include "sedop/segal.hpp"

using namespace sedop;

namespace {

Measure1D gauss() { return build_measure(Potential1D::gaussian(1.0)); }
Measure1D quartic() { return build_measure(Potential1D::polynomial({0.0, 0.0, 0.5, 0.0, 0.25})); }

} // namespace

TEST_CASE("the basis change is a permutation with orthonormal targets") {
    ProductMeasure pm{{quartic(), gauss()}};
    std::vector<PolyBasis> bases{build_basis(pm.factors[0], 5), build_basis(pm.factors[1], 5)};
    GammaMuSpace sp = space_for(bases, 3);
    SegalMap S = build_segal_map(sp);
    CHECK(S.gramResidual < 1e-8);
    REQUIRE(S.matrix.rows() == sp.dim());
    // permutation: every row and column holds exactly one 1
    for (int r = 0; r < S.matrix.rows(); ++r) {
        CHECK(S.matrix.row(r).sum() == doctest::Approx(1.0));
        CHECK(S.matrix.row(r).cwiseAbs().maxCoeff() == doctest::Approx(1.0));
    }
    for (int c = 0; c < S.matrix.cols(); ++c) CHECK(S.matrix.col(c).sum() == doctest::Approx(1.0));
    // orthogonality makes it norm preserving
    CHECK((S.matrix.transpose() * S.matrix - Eigen::MatrixXd::Identity(sp.dim(), sp.dim())).norm() <
          1e-14);
}

TEST_CASE("coefficient transport preserves norms and refuses mismatched shapes") {
    ProductMeasure pm{{gauss()}};
    std::vector<PolyBasis> bases{build_basis(pm.factors[0], 6)};
    GammaMuSpace sp = space_for(bases, 3);
    SegalMap S = build_segal_map(sp);
    GammaMuVector F = zero_vector(sp);
    for (int i = 0; i < sp.dim(); ++i) F.c(i) = std::sin(1.0 + i);
    Eigen::VectorXd out = segal_transform(F, S);
    CHECK(out.norm() == doctest::Approx(F.c.norm()).epsilon(1e-15));
    CHECK((S.matrix * F.c - out).norm() < 1e-14);

    GammaMuSpace other = space_for(bases, 4);
    GammaMuVector G = zero_vector(other);
    CHECK_THROWS_AS(segal_transform(G, S), TruncationMismatch);
}

TEST_CASE("transport leaves the spectrum unchanged") {
    for (const Measure1D& m : {gauss(), quartic()}) {
        ProductMeasure pm{{m}};
        std::vector<PolyBasis> bases{build_basis(m, 8)};
        OperatorMatrix lap = assemble_laplacian(pm, bases, 4);
        GammaMuSpace sp = space_for(bases, 4);
        TwoVariableOperator t = conjugate_to_two_variable(lap, sp);
        auto s1 = lap.reliable_spectrum();
        auto s2 = t.op.reliable_spectrum();
        REQUIRE(s1.size() == s2.size());
        for (size_t i = 0; i < s1.size(); ++i) CHECK(std::abs(s1[i] - s2[i]) < 1e-8);
    }
}

TEST_CASE("transported extension keeps the generator as its y-constant block") {
    for (const Measure1D& m : {gauss(), quartic()}) {
        ProductMeasure pm{{m}};
        std::vector<PolyBasis> bases{build_basis(m, 8)};
        OperatorMatrix H = assemble_h_mu(pm, bases);
        OperatorMatrix lap = assemble_laplacian(pm, bases, 4);
        GammaMuSpace sp = space_for(bases, 4);
        TwoVariableOperator t = conjugate_to_two_variable(lap, sp);
        const int F = sp.fock.size();
        double worst = 0.0;
        for (int rx = 0; rx < sp.poly.dim(); ++rx)
            for (int cx = 0; cx < sp.poly.dim(); ++cx)
                worst = std::max(worst,
                                 std::abs(t.op.entries(rx * F, cx * F) - H.entries(rx, cx)));
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("y-side curvature operator for the gaussian is the number operator") {
    ProductMeasure pm{{gauss()}};
    std::vector<PolyBasis> bases{build_basis(pm.factors[0], 5)};
    const int N = 4;
    TwoVariableOperator hg = assemble_h_gamma_R(pm, bases, N);
    GammaMuSpace sp = space_for(bases, N);
    const int F = sp.fock.size();
    for (int rx = 0; rx < sp.poly.dim(); ++rx)
        for (int ry = 0; ry < F; ++ry)
            for (int cx = 0; cx < sp.poly.dim(); ++cx)
                for (int cy = 0; cy < F; ++cy) {
                    double expected = (rx == cx && ry == cy) ? (double)sp.fock.level(ry) : 0.0;
                    CHECK(std::abs(hg.op.entries(rx * F + ry, cx * F + cy) - expected) < 1e-10);
                }
}

TEST_CASE("tensoring with the y identity reproduces block structure") {
    ProductMeasure pm{{quartic()}};
    std::vector<PolyBasis> bases{build_basis(pm.factors[0], 6)};
    const int N = 3;
    OperatorMatrix H = assemble_h_mu(pm, bases);
    GammaMuSpace sp = space_for(bases, N);
    TwoVariableOperator t = tensor_with_y_identity(H, sp);
    const int F = sp.fock.size();
    for (int rx = 0; rx < sp.poly.dim(); ++rx)
        for (int ry = 0; ry < F; ++ry)
            for (int cx = 0; cx < sp.poly.dim(); ++cx)
                for (int cy = 0; cy < F; ++cy) {
                    double expected = (ry == cy) ? H.entries(rx, cx) : 0.0;
                    CHECK(std::abs(t.op.entries(rx * F + ry, cx * F + cy) - expected) < 1e-14);
                }
}

TEST_CASE("one-coordinate transported extension matches the tensor identity") {
    for (const Measure1D& m : {gauss(), quartic()}) {
        ProductMeasure pm{{m}};
        std::vector<PolyBasis> bases{build_basis(m, 8)};
        BoldDelta bd = assemble_bold_delta(pm, bases, 4);
        CHECK(std::isfinite(bd.identity1dResidual));
        CHECK(bd.identity1dResidual < 1e-8);
        CHECK(bd.cBest == doctest::Approx(2.0));
        CHECK(bd.residualAtBest < 1e-8);
        // with the best constant the component sum reproduces the transported
        // operator on the reliable block
        Eigen::MatrixXd diff = bd.conjugated.op.entries - bd.componentSum.op.entries;
        double worst = 0.0;
        for (int r : bd.conjugated.op.reliable)
            for (int c : bd.conjugated.op.reliable)
                worst = std::max(worst, std::abs(diff(r, c)));
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("explicit cross operator is symmetric and annihilates constants") {
    ProductMeasure pm{{quartic(), gauss()}};
    std::vector<PolyBasis> bases{build_basis(pm.factors[0], 6), build_basis(pm.factors[1], 6)};
    TwoVariableOperator a = assemble_a_mu_explicit(pm, bases, 3);
    CHECK(a.op.symmetry_defect() < 1e-10);
    CHECK(a.op.entries.col(0).norm() < 1e-12);
}

TEST_CASE("cross operator assembly refuses empty reliable windows") {
    Measure1D m = build_measure(Potential1D::polynomial({0.0, 0.0, 0.25, 0.0, 0.0, 0.0, 1.0}));
    ProductMeasure pm{{m}};
    std::vector<PolyBasis> bases{build_basis(m, 3)};
    CHECK_THROWS_AS(assemble_a_mu_explicit(pm, bases, 2), DegreeOverflow);
}

TEST_CASE("conjugation refuses a mismatched space") {
    ProductMeasure pm{{gauss()}};
    std::vector<PolyBasis> bases{build_basis(pm.factors[0], 6)};
    OperatorMatrix lap = assemble_laplacian(pm, bases, 3);
    GammaMuSpace wrong = space_for(bases, 5);
    CHECK_THROWS_AS(conjugate_to_two_variable(lap, wrong), TruncationMismatch);
}
