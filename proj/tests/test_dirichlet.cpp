#include <cmath>
#include <random>

#include "doctest.h"
#include "sedop/dirichlet.hpp"
#include "sedop/errors.hpp"
#include "sedop/measure.hpp"
#include "sedop/rng.hpp"

using namespace sedop;

namespace {

Measure1D gauss() { return build_measure(Potential1D::gaussian(1.0)); }
Measure1D quartic() { return build_measure(Potential1D::polynomial({0.0, 0.0, 0.5, 0.0, 0.25})); }

} // namespace

TEST_CASE("flat indexing is a bijection on per-coordinate degrees") {
    PolyIndexer idx{{5, 3, 4}};
    CHECK(idx.dim() == 60);
    for (int f = 0; f < idx.dim(); ++f) {
        auto deg = idx.degrees(f);
        CHECK(idx.flat(deg) == f);
    }
    CHECK(idx.flat({0, 0, 0}) == 0);
    CHECK(idx.flat({4, 2, 3}) == 59);
    // coordinate 0 is the slowest-varying digit
    CHECK(idx.flat({1, 0, 0}) == 12);
}

TEST_CASE("one-coordinate gaussian blocks are the known ladder operators") {
    Ops1D ops = build_ops(build_basis(gauss(), 8));
    for (int r = 0; r <= 8; ++r)
        for (int c = 0; c <= 8; ++c) {
            CHECK(ops.H1(r, c) == doctest::Approx(r == c ? (double)r : 0.0).epsilon(1e-12));
            CHECK(ops.W(r, c) == doctest::Approx(r == c ? 1.0 : 0.0).epsilon(1e-12));
            CHECK(ops.G1(r, c) == doctest::Approx(r == c ? (double)r + 1.0 : 0.0).epsilon(1e-12));
            CHECK(ops.B(r, c) == doctest::Approx(-ops.X(r, c)).epsilon(1e-12));
        }
    // the two assembly routes for the form matrix agree
    CHECK((ops.E - ops.H1).norm() < 1e-9);
}

TEST_CASE("one-coordinate identities hold for the quartic blocks") {
    Ops1D ops = build_ops(build_basis(quartic(), 10));
    CHECK((ops.G1 - ops.H1 - ops.W).norm() < 1e-12);
    CHECK((ops.DB - ops.D - ops.B).norm() < 1e-12);
    CHECK((ops.E - ops.H1).norm() < 1e-8);
    CHECK(ops.H1.isApprox(ops.H1.transpose(), 1e-12));
}

TEST_CASE("generator matrix annihilates constants and is symmetric") {
    for (const Measure1D& m : {gauss(), quartic()}) {
        ProductMeasure pm{{m}};
        std::vector<PolyBasis> bases{build_basis(m, 10)};
        OperatorMatrix H = assemble_h_mu(pm, bases);
        CHECK(H.entries.col(0).norm() < 1e-12);
        CHECK(H.symmetry_defect() < 1e-10);
        CHECK(H.symmetric);
    }
}

TEST_CASE("gaussian generator spectrum is 0..K exactly") {
    ProductMeasure pm{{gauss()}};
    std::vector<PolyBasis> bases{build_basis(pm.factors[0], 10)};
    OperatorMatrix H = assemble_h_mu(pm, bases);
    auto s = H.reliable_spectrum();
    REQUIRE(s.size() == 11);
    for (int k = 0; k <= 10; ++k) CHECK(s[(size_t)k] == doctest::Approx((double)k).epsilon(1e-9));
}

TEST_CASE("quartic generator eigenvalues match the converged reference") {
    // reference values from refinement to K = 26, converged to 12 digits
    ProductMeasure pm{{quartic()}};
    std::vector<PolyBasis> bases{build_basis(pm.factors[0], 22)};
    auto s = assemble_h_mu(pm, bases).reliable_spectrum();
    CHECK(std::abs(s[0]) < 1e-10);
    CHECK(s[1] == doctest::Approx(2.067999258293).epsilon(5e-9));
    CHECK(s[2] == doctest::Approx(5.631827307419).epsilon(5e-9));
    CHECK(s[3] == doctest::Approx(9.995229977595).epsilon(5e-9));
}

TEST_CASE("generator agrees with the quadrature form matrix on reliable entries") {
    // 1D and a mixed 2D product, both measures
    std::vector<ProductMeasure> cases;
    cases.push_back(ProductMeasure{{gauss()}});
    cases.push_back(ProductMeasure{{quartic()}});
    cases.push_back(ProductMeasure{{gauss(), quartic()}});
    for (const auto& pm : cases) {
        std::vector<PolyBasis> bases;
        for (const auto& f : pm.factors) bases.push_back(build_basis(f, 8));
        OperatorMatrix H = assemble_h_mu(pm, bases);
        OperatorMatrix E = assemble_form_matrix(pm, bases);
        double worst = 0.0;
        for (int r : H.reliable)
            for (int c : H.reliable)
                worst = std::max(worst, std::abs(H.entries(r, c) - E.entries(r, c)));
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("dirichlet form evaluation matches the quadratic form of the matrix") {
    ProductMeasure pm{{quartic(), gauss()}};
    std::vector<PolyBasis> bases{build_basis(pm.factors[0], 6), build_basis(pm.factors[1], 6)};
    OperatorMatrix H = assemble_h_mu(pm, bases);
    int dim = static_cast<int>(H.entries.rows());
    std::mt19937_64 g = rng::engine_for(17, 0);
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::VectorXd u = Eigen::VectorXd::Zero(dim), v = Eigen::VectorXd::Zero(dim);
        for (int i : H.reliable) {
            u(i) = 2.0 * rng::uniform01(g) - 1.0;
            v(i) = 2.0 * rng::uniform01(g) - 1.0;
        }
        double viaMatrix = u.dot(H.entries * v);
        double viaForm = dirichlet_form(u, v, pm, bases);
        CHECK(std::abs(viaMatrix - viaForm) < 1e-8 * (1.0 + u.norm() * v.norm()));
    }
}

TEST_CASE("assembly is reproducible bit for bit") {
    ProductMeasure pm{{quartic(), gauss()}};
    std::vector<PolyBasis> bases{build_basis(pm.factors[0], 6), build_basis(pm.factors[1], 6)};
    OperatorMatrix H1m = assemble_h_mu(pm, bases);
    OperatorMatrix H2m = assemble_h_mu(pm, bases);
    CHECK((H1m.entries.array() == H2m.entries.array()).all());
}

TEST_CASE("reliable indices select exactly the per-coordinate degree windows") {
    ProductMeasure pm{{gauss(), quartic()}};
    std::vector<PolyBasis> bases{build_basis(pm.factors[0], 4), build_basis(pm.factors[1], 6)};
    PolyIndexer idx{{5, 7}};
    auto rel = reliable_poly_indices(idx, bases);
    // gaussian Krel = 4 keeps all 5 degrees, quartic Krel = 4 keeps 5 of 7
    CHECK(rel.size() == 25);
    for (int f : rel) {
        auto deg = idx.degrees(f);
        CHECK(deg[0] <= 4);
        CHECK(deg[1] <= 4);
    }
}

TEST_CASE("an empty reliable window is rejected") {
    // deg V' = 5 forces Krel = K - 4; K = 3 leaves no reliable degrees
    Measure1D m = build_measure(Potential1D::polynomial({0.0, 0.0, 0.25, 0.0, 0.0, 0.0, 1.0}));
    ProductMeasure pm{{m}};
    std::vector<PolyBasis> bases{build_basis(m, 3)};
    CHECK_THROWS_AS(assemble_h_mu(pm, bases), DegreeOverflow);
}

TEST_CASE("expansion in the internal family refuses degrees beyond it") {
    PolyBasis b = build_basis(gauss(), 4);  // internal degree 6
    poly::Coeffs tooBig(8, 0.0L);
    tooBig[7] = 1.0L;
    CHECK_THROWS_AS(expand_in_family(b, tooBig), DegreeOverflow);
}
