#include <doctest.h>

#include <numbers>

#include "aggsync/models.hpp"
#include "aggsync/reduction.hpp"
#include "aggsync/rng.hpp"

using namespace aggsync;

namespace {

constexpr double kPi = std::numbers::pi;

VectorStates random_unit_vectors(Xoshiro256PlusPlus& rng, int n, int d) {
    VectorStates out;
    for (int j = 0; j < n; ++j) {
        CVector v(d);
        for (int i = 0; i < d; ++i) v[i] = rng.normal_complex();
        out.push_back(renormalize_vector(v));
    }
    return out;
}

MatrixStates random_unitaries(Xoshiro256PlusPlus& rng, int n, int d) {
    MatrixStates out;
    for (int j = 0; j < n; ++j) out.push_back(sample_haar_unitary(rng, d));
    return out;
}

RVector random_zero_mean(Xoshiro256PlusPlus& rng, int n, double scale = 1.0) {
    RVector a(n);
    for (int j = 0; j < n; ++j) a[j] = scale * rng.normal();
    a.array() -= a.mean();
    return a;
}

Complex phase(double t) { return Complex(std::cos(t), std::sin(t)); }

}  // namespace

TEST_CASE("kuramoto right-hand side") {
    // two agents at quarter-cycle separation balance exactly
    PhaseVec theta(2);
    theta << 0.0, kPi / 2.0;
    RVector a(2);
    a << -0.5, 0.5;
    const PhaseVec t = rhs_kuramoto(theta, a, 1.0);
    CHECK(std::abs(t[0]) < 1e-15);
    CHECK(std::abs(t[1]) < 1e-15);

    Xoshiro256PlusPlus rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        PhaseVec th(5);
        for (int i = 0; i < 5; ++i) th[i] = rng.normal();
        const RVector az = random_zero_mean(rng, 5);
        CHECK(std::abs(rhs_kuramoto(th, az, 1.7).sum()) < 1e-12);
    }
}

TEST_CASE("synchronized states are equilibria of the homogeneous flows") {
    Xoshiro256PlusPlus rng(4);
    const CVector base = random_unit_vectors(rng, 1, 3)[0];
    VectorStates same(4, base);
    const RVector zero = RVector::Zero(4);
    for (ModelKind kind : {ModelKind::ComplexSphere, ModelKind::SchrodingerLohe,
                           ModelKind::LoheHermitianSphere}) {
        const VectorStates t = rhs_primary(kind, same, zero, Coupling(1.3, 0.4));
        CHECK(tangent_sup_norm(t) < 1e-15);
    }
}

TEST_CASE("single-agent matrix flow is stationary") {
    Xoshiro256PlusPlus rng(6);
    MatrixStates u = random_unitaries(rng, 1, 3);
    const RVector zero = RVector::Zero(1);
    const MatrixStates t = rhs_primary(ModelKind::LoheMatrix, u, zero, Coupling(2.0));
    CHECK(tangent_sup_norm(t) < 1e-14);
}

TEST_CASE("schrodinger_lohe and complex_sphere coincide on real 1-d states") {
    VectorStates states;
    for (double x : {1.0, -1.0, 1.0}) {
        CVector v(1);
        v[0] = x;
        states.push_back(v);
    }
    RVector a(3);
    a << 0.3, -0.1, -0.2;
    const VectorStates sl = rhs_primary(ModelKind::SchrodingerLohe, states, a, Coupling(0.9));
    const VectorStates cs = rhs_primary(ModelKind::ComplexSphere, states, a, Coupling(0.9));
    for (size_t j = 0; j < 3; ++j) {
        CHECK((sl[j] - cs[j]).norm() < 1e-15);
    }
}

TEST_CASE("tangency: sphere tangents are orthogonal to the state") {
    Xoshiro256PlusPlus rng(8);
    for (int trial = 0; trial < 250; ++trial) {
        const int n = 4, d = 3;
        const VectorStates w = random_unit_vectors(rng, n, d);
        const RVector a = random_zero_mean(rng, n);
        const Coupling c(1.2, 0.3);
        for (ModelKind kind : {ModelKind::ComplexSphere, ModelKind::SchrodingerLohe,
                               ModelKind::LoheHermitianSphere}) {
            const VectorStates t = rhs_primary(kind, w, a, c);
            for (size_t j = 0; j < static_cast<size_t>(n); ++j) {
                CHECK(std::abs(hermitian_inner(t[j], w[j]).real()) < 1e-12);
            }
        }
    }
}

TEST_CASE("tangency holds for the reduced vector flows") {
    Xoshiro256PlusPlus rng(9);
    for (int trial = 0; trial < 250; ++trial) {
        const int n = 4, d = 2;
        const VectorStates z = random_unit_vectors(rng, n, d);
        PhaseVec th(n);
        for (int i = 0; i < n; ++i) th[i] = rng.normal();
        const Coupling c(1.2, 0.3);
        for (ModelKind kind :
             {ModelKind::ReducedSphereZ, ModelKind::ReducedSlXi, ModelKind::ReducedLhsXi}) {
            const VectorStates t = rhs_reduced(kind, z, th, c);
            for (size_t j = 0; j < static_cast<size_t>(n); ++j) {
                CHECK(std::abs(hermitian_inner(t[j], z[j]).real()) < 1e-12);
            }
        }
    }
}

TEST_CASE("matrix velocities are skew-Hermitian after right translation") {
    Xoshiro256PlusPlus rng(10);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3, d = 2;
        const MatrixStates u = random_unitaries(rng, n, d);
        const RVector a = random_zero_mean(rng, n);
        const MatrixStates t = rhs_primary(ModelKind::LoheMatrix, u, a, Coupling(1.5));
        PhaseVec th(n);
        for (int i = 0; i < n; ++i) th[i] = rng.normal();
        const MatrixStates tr = rhs_reduced(ModelKind::ReducedLmV, u, th, Coupling(1.5));
        for (size_t j = 0; j < static_cast<size_t>(n); ++j) {
            const CMatrix s = t[j] * u[j].adjoint();
            CHECK((s + s.adjoint()).norm() < 1e-12);
            const CMatrix sr = tr[j] * u[j].adjoint();
            CHECK((sr + sr.adjoint()).norm() < 1e-12);
        }
    }
}

TEST_CASE("reduced flows vanish on synchronized data") {
    Xoshiro256PlusPlus rng(12);
    const CVector base = random_unit_vectors(rng, 1, 2)[0];
    VectorStates same(4, base);
    const PhaseVec th = PhaseVec::Constant(4, 0.37);
    for (ModelKind kind :
         {ModelKind::ReducedSphereZ, ModelKind::ReducedSlXi, ModelKind::ReducedLhsXi}) {
        CHECK(tangent_sup_norm(rhs_reduced(kind, same, th, Coupling(1.0, 0.2))) < 1e-15);
    }
}

TEST_CASE("constant phases reduce to the homogeneous coupling") {
    Xoshiro256PlusPlus rng(13);
    const int n = 5, d = 2;
    const VectorStates z = random_unit_vectors(rng, n, d);
    const PhaseVec th = PhaseVec::Constant(n, -0.8);
    const RVector zero = RVector::Zero(n);
    const VectorStates red = rhs_reduced(ModelKind::ReducedSphereZ, z, th, Coupling(1.4));
    const VectorStates hom = rhs_primary(ModelKind::ComplexSphere, z, zero, Coupling(1.4));
    for (size_t j = 0; j < static_cast<size_t>(n); ++j) {
        CHECK((red[j] - hom[j]).norm() < 1e-13);
    }
}

TEST_CASE("gauge identity: reduced + companion assemble the primary flow") {
    // d/dt (z_j e^{i theta_j}) against the primary RHS at w_j = z_j e^{i theta_j}
    Xoshiro256PlusPlus rng(14);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 4, d = 2;
        const VectorStates z = random_unit_vectors(rng, n, d);
        PhaseVec th(n);
        for (int i = 0; i < n; ++i) th[i] = rng.normal();
        const RVector a = random_zero_mean(rng, n);
        const Coupling c(1.1, 0.35);

        auto assemble = [&](ModelKind primary_kind, ModelKind reduced_kind) {
            const double k_eff = coupling_map(primary_kind, c);
            const PhaseVec tk = rhs_kuramoto(th, a, k_eff);
            const VectorStates zdot = rhs_reduced(reduced_kind, z, th, c);
            double worst = 0.0;
            for (size_t j = 0; j < static_cast<size_t>(n); ++j) {
                const CVector w = z[j] * phase(th[static_cast<Eigen::Index>(j)]);
                const CVector assembled =
                    zdot[j] * phase(th[static_cast<Eigen::Index>(j)]) +
                    Complex(0.0, tk[static_cast<Eigen::Index>(j)]) * w;
                VectorStates ws(n);
                for (size_t q = 0; q < static_cast<size_t>(n); ++q) {
                    ws[q] = z[q] * phase(th[static_cast<Eigen::Index>(q)]);
                }
                const VectorStates direct = rhs_primary(primary_kind, ws, a, c);
                worst = std::max(worst, (assembled - direct[j]).norm());
            }
            return worst;
        };
        CHECK(assemble(ModelKind::ComplexSphere, ModelKind::ReducedSphereZ) < 1e-12);
        CHECK(assemble(ModelKind::SchrodingerLohe, ModelKind::ReducedSlXi) < 1e-12);
        CHECK(assemble(ModelKind::LoheHermitianSphere, ModelKind::ReducedLhsXi) < 1e-12);

        const MatrixStates v = random_unitaries(rng, n, d);
        const double k_eff = coupling_map(ModelKind::LoheMatrix, c);
        const PhaseVec tk = rhs_kuramoto(th, a, k_eff);
        const MatrixStates vdot = rhs_reduced(ModelKind::ReducedLmV, v, th, c);
        MatrixStates u(n);
        for (size_t j = 0; j < static_cast<size_t>(n); ++j) {
            u[j] = phase(th[static_cast<Eigen::Index>(j)]) * v[j];
        }
        const MatrixStates direct = rhs_primary(ModelKind::LoheMatrix, u, a, c);
        for (size_t j = 0; j < static_cast<size_t>(n); ++j) {
            const CMatrix assembled = phase(th[static_cast<Eigen::Index>(j)]) * vdot[j] +
                                      Complex(0.0, tk[static_cast<Eigen::Index>(j)]) * u[j];
            CHECK((assembled - direct[j]).norm() < 1e-12);
        }
    }
}

TEST_CASE("permutation equivariance") {
    Xoshiro256PlusPlus rng(15);
    const int n = 5, d = 2;
    const VectorStates w = random_unit_vectors(rng, n, d);
    const RVector a = random_zero_mean(rng, n);
    const Coupling c(0.9, 0.2);
    const std::vector<size_t> perm = {3, 0, 4, 1, 2};

    for (ModelKind kind : {ModelKind::ComplexSphere, ModelKind::SchrodingerLohe,
                           ModelKind::LoheHermitianSphere}) {
        const VectorStates t = rhs_primary(kind, w, a, c);
        VectorStates wp(n);
        RVector ap(n);
        for (size_t j = 0; j < static_cast<size_t>(n); ++j) {
            wp[j] = w[perm[j]];
            ap[static_cast<Eigen::Index>(j)] = a[static_cast<Eigen::Index>(perm[j])];
        }
        const VectorStates tp = rhs_primary(kind, wp, ap, c);
        for (size_t j = 0; j < static_cast<size_t>(n); ++j) {
            CHECK((tp[j] - t[perm[j]]).norm() < 1e-13);
        }
    }
}

TEST_CASE("gram derivatives vanish on synchronized data and unit diagonals") {
    Xoshiro256PlusPlus rng(16);
    const int n = 4;
    PhaseVec th = PhaseVec::Zero(n);
    const CMatrix ones = CMatrix::Ones(n, n);
    CHECK(rhs_gram_real(ones, th, 1.3).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(rhs_gram(ModelKind::ReducedSlXi, ones, th, Coupling(1.3)).cwiseAbs().maxCoeff() <
          1e-14);

    const VectorStates z = random_unit_vectors(rng, n, 3);
    for (int i = 0; i < n; ++i) th[i] = rng.normal();
    CMatrix hz(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            hz(i, j) = hermitian_inner(z[static_cast<size_t>(i)], z[static_cast<size_t>(j)]);
        }
    }
    const CMatrix dsl = rhs_gram(ModelKind::ReducedSlXi, hz, th, Coupling(1.3));
    const CMatrix dlhs = rhs_gram(ModelKind::ReducedLhsXi, hz, th, Coupling(1.3, 0.4));
    for (int i = 0; i < n; ++i) {
        CHECK(std::abs(dsl(i, i)) < 1e-13);
        CHECK(std::abs(dlhs(i, i)) < 1e-13);
    }
}

TEST_CASE("gram derivatives match a central-difference oracle") {
    Xoshiro256PlusPlus rng(18);
    const int n = 4, d = 2;
    const double eps = 1e-5;
    const RVector a = random_zero_mean(rng, n);
    PhaseVec th0(n);
    for (int i = 0; i < n; ++i) th0[i] = 0.5 * rng.normal();
    th0.array() -= th0.mean();

    struct Case {
        ModelKind reduced;
        ModelKind primary;
        Coupling c;
    };
    const Case cases[] = {{ModelKind::ReducedSphereZ, ModelKind::ComplexSphere, Coupling(1.3)},
                          {ModelKind::ReducedSlXi, ModelKind::SchrodingerLohe, Coupling(1.3)},
                          {ModelKind::ReducedLhsXi, ModelKind::LoheHermitianSphere,
                           Coupling(1.3, 0.4)}};
    for (const auto& cs : cases) {
        const VectorStates z0 = random_unit_vectors(rng, n, d);
        const double k_eff = coupling_map(cs.primary, cs.c);
        auto joint_rhs = [&](const Paired<VectorStates>& s) {
            return Paired<VectorStates>{rhs_reduced(cs.reduced, s.x, s.theta, cs.c),
                                        rhs_kuramoto(s.theta, a, k_eff)};
        };
        auto gram_of = [&](const VectorStates& z) {
            CMatrix h(n, n);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    h(i, j) = hermitian_inner(z[static_cast<size_t>(i)],
                                              z[static_cast<size_t>(j)]);
                }
            }
            return h;
        };
        const Paired<VectorStates> fwd = rk4_step(joint_rhs, Paired<VectorStates>{z0, th0}, eps);
        const Paired<VectorStates> bwd = rk4_step(joint_rhs, Paired<VectorStates>{z0, th0}, -eps);
        const CMatrix dh_fd = (gram_of(fwd.x) - gram_of(bwd.x)) / (2.0 * eps);

        if (cs.reduced == ModelKind::ReducedSphereZ) {
            const RMatrix done = rhs_gram_real(gram_of(z0), th0, cs.c.kappa);
            // returns d/dt (1 - Re h); compare against -Re dh/dt
            CHECK((done + dh_fd.real()).cwiseAbs().maxCoeff() < 1e-8);
        } else {
            const CMatrix done = rhs_gram(cs.reduced, gram_of(z0), th0, cs.c);
            CHECK((done - dh_fd).cwiseAbs().maxCoeff() < 1e-8);
        }
    }

    const MatrixStates v0 = random_unitaries(rng, n, d);
    const Coupling cm(1.5);
    auto joint_rhs = [&](const Paired<MatrixStates>& s) {
        return Paired<MatrixStates>{rhs_reduced(ModelKind::ReducedLmV, s.x, s.theta, cm),
                                    rhs_kuramoto(s.theta, a, cm.kappa)};
    };
    auto blocks_of = [&](const MatrixStates& v) {
        std::vector<CMatrix> out;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                out.push_back(v[static_cast<size_t>(i)] * v[static_cast<size_t>(j)].adjoint());
            }
        }
        return out;
    };
    const auto fwd = rk4_step(joint_rhs, Paired<MatrixStates>{v0, th0}, eps);
    const auto bwd = rk4_step(joint_rhs, Paired<MatrixStates>{v0, th0}, -eps);
    const auto bf = blocks_of(fwd.x);
    const auto bb = blocks_of(bwd.x);
    const auto db = rhs_gram_blocks(blocks_of(v0), n, th0, cm.kappa);
    double worst = 0.0;
    for (size_t i = 0; i < db.size(); ++i) {
        worst = std::max(worst, (db[i] - (bf[i] - bb[i]) / (2.0 * eps)).norm());
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("flavor and shape errors") {
    Xoshiro256PlusPlus rng(20);
    const VectorStates w = random_unit_vectors(rng, 2, 2);
    const RVector a2 = RVector::Zero(2);
    CHECK_THROWS_AS(rhs_primary(ModelKind::LoheMatrix, w, a2, Coupling(1.0)), ConfigError);
    CHECK_THROWS_AS(rhs_primary(ModelKind::ComplexSphere, w, RVector::Zero(3), Coupling(1.0)),
                    DimensionError);
    CHECK_THROWS_AS(rhs_reduced(ModelKind::ReducedSphereZ, w, PhaseVec::Zero(3), Coupling(1.0)),
                    DimensionError);
    CHECK_THROWS_AS(rhs_real_sphere(w, {}, 1.0), ConfigError);
}
