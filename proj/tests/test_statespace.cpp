#include <doctest.h>

#include "aggsync/rng.hpp"
#include "aggsync/statespace.hpp"

using namespace aggsync;

namespace {

CVector cvec(std::initializer_list<Complex> xs) {
    CVector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (const auto& x : xs) v[i++] = x;
    return v;
}

}  // namespace

TEST_CASE("hermitian_inner basics") {
    const CVector e1 = cvec({1.0, 0.0});
    const CVector e2 = cvec({0.0, 1.0});
    CHECK(hermitian_inner(e1, e1) == Complex(1.0, 0.0));
    CHECK(hermitian_inner(e1, e2) == Complex(0.0, 0.0));
    // conjugate-second convention: <(1,0), (i,0)> = conj(i) = -i
    const CVector ei = cvec({Complex(0.0, 1.0), 0.0});
    CHECK(hermitian_inner(e1, ei) == Complex(0.0, -1.0));
    CHECK_THROWS_AS(hermitian_inner(e1, cvec({1.0, 0.0, 0.0})), DimensionError);
}

TEST_CASE("hermitian_inner properties over seeded vectors") {
    Xoshiro256PlusPlus rng(321);
    for (int trial = 0; trial < 200; ++trial) {
        CVector u(3), v(3);
        for (int i = 0; i < 3; ++i) {
            u[i] = rng.normal_complex();
            v[i] = rng.normal_complex();
        }
        const Complex uu = hermitian_inner(u, u);
        CHECK(uu.imag() == 0.0);
        CHECK(uu.real() == doctest::Approx(u.squaredNorm()).epsilon(1e-14));
        const Complex uv = hermitian_inner(u, v);
        const Complex vu = hermitian_inner(v, u);
        CHECK(uv.real() == doctest::Approx(vu.real()).epsilon(1e-14));
        CHECK(uv.imag() == doctest::Approx(-vu.imag()).epsilon(1e-14));
    }
}

TEST_CASE("renormalize") {
    const CVector unit = cvec({1.0, 0.0});
    CHECK((renormalize_vector(unit) - unit).norm() == 0.0);
    const CVector two = cvec({0.0, 2.0});
    const CVector r = renormalize_vector(two);
    CHECK(r.norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r[1].real() == doctest::Approx(1.0));
    CHECK_THROWS_AS(renormalize_vector(cvec({1e-7, 0.0})), DegenerateStateError);

    // drift of the size an RK4 step leaves behind
    CVector drifted = cvec({1.0 + 3e-10, 0.0});
    CHECK(std::abs(renormalize_vector(drifted).norm() - 1.0) < 1e-15);

    // whole-ensemble projection preserves directions
    SphereEnsemble e(SphereFlavor::Complex, 2,
                     {cvec({1.0, 0.0}), cvec({0.0, Complex(0.6, 0.8)})});
    const SphereEnsemble r2 = renormalize(e);
    CHECK((r2.state(1) - e.state(1)).norm() < 1e-15);
}

TEST_CASE("unitarize") {
    Xoshiro256PlusPlus rng(7);
    const CMatrix q = sample_haar_unitary(rng, 3);
    CHECK((unitarize(q) - q).norm() < 1e-14);

    CMatrix d2 = CMatrix::Zero(2, 2);
    d2(0, 0) = 1.01;
    d2(1, 1) = 0.99;
    CHECK((unitarize(d2) - CMatrix::Identity(2, 2)).norm() < 1e-13);

    const CMatrix scaled = 1.001 * q;
    CHECK((unitarize(scaled) - q).norm() < 1e-12);

    // idempotence
    const CMatrix once = unitarize(scaled);
    CHECK((unitarize(once) - once).norm() < 1e-13);

    CHECK_THROWS_AS(unitarize(CMatrix::Zero(2, 2)), DegenerateStateError);
    CHECK_THROWS_AS(unitarize(2.0 * CMatrix::Identity(2, 2)), StructureError);
}

TEST_CASE("gram") {
    const CVector s = renormalize_vector(cvec({1.0, Complex(0.5, 0.5)}));
    SphereEnsemble same(SphereFlavor::Complex, 2, {s, s, s});
    const GramMatrix g = gram(same);
    CHECK((g.entries - CMatrix::Ones(3, 3)).norm() < 1e-14);

    SphereEnsemble ortho(SphereFlavor::Complex, 2, {cvec({1.0, 0.0}), cvec({0.0, 1.0})});
    CHECK(std::abs(gram(ortho).entries(0, 1)) == 0.0);

    // diagonal exactly 1 after renormalization
    Xoshiro256PlusPlus rng(5);
    std::vector<CVector> states;
    for (int j = 0; j < 4; ++j) {
        CVector v(3);
        for (int i = 0; i < 3; ++i) v[i] = rng.normal_complex();
        states.push_back(renormalize_vector(v));
    }
    const GramMatrix gr = gram(SphereEnsemble(SphereFlavor::Complex, 3, states));
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(gr.entries(i, i) - 1.0) < 1e-14);
    }
}

TEST_CASE("gram of the bundled reference initial data") {
    // frozen from an independent arithmetic pass over the four listed states
    const CVector w1 = renormalize_vector(cvec({Complex(0.3895, -0.9178), Complex(-0.0770, 0.0004)}));
    const CVector w2 = renormalize_vector(cvec({Complex(-0.5190, 0.4832), Complex(-0.5974, -0.3746)}));
    const Complex h12 = hermitian_inner(w1, w2);
    CHECK(h12.real() == doctest::Approx(-0.5997815).epsilon(1e-5));
    CHECK(h12.imag() == doctest::Approx(0.25904864).epsilon(1e-5));
}

TEST_CASE("geodesic_distance") {
    const CVector u = cvec({1.0, 0.0});
    CHECK(geodesic_distance(u, u) == 0.0);
    const CVector anti = cvec({-1.0, 0.0});
    CHECK(geodesic_distance(u, anti) == doctest::Approx(std::acos(-1.0)));

    // reference final states, distance 0.2726 within 1e-3
    const CVector w1 = renormalize_vector(cvec({Complex(-0.5002, -0.4755), Complex(-0.3890, -0.6102)}));
    const CVector w2 = renormalize_vector(cvec({Complex(-0.3537, -0.5926), Complex(-0.2104, -0.6924)}));
    CHECK(geodesic_distance(w1, w2) == doctest::Approx(0.2726).epsilon(4e-3));
}

TEST_CASE("geodesic triangle inequality on 1000 seeded triples") {
    Xoshiro256PlusPlus rng(99);
    for (int trial = 0; trial < 1000; ++trial) {
        CVector a(2), b(2), c(2);
        for (int i = 0; i < 2; ++i) {
            a[i] = rng.normal_complex();
            b[i] = rng.normal_complex();
            c[i] = rng.normal_complex();
        }
        a = renormalize_vector(a);
        b = renormalize_vector(b);
        c = renormalize_vector(c);
        const double ab = geodesic_distance(a, b);
        const double bc = geodesic_distance(b, c);
        const double ac = geodesic_distance(a, c);
        CHECK(ac <= ab + bc + 1e-12);
    }
}

TEST_CASE("ensemble invariants") {
    CHECK_THROWS_AS(SphereEnsemble(SphereFlavor::Complex, 2, {cvec({1.0, 1.0})}),
                    StructureError);
    CHECK_THROWS_AS(SphereEnsemble(SphereFlavor::Real, 2,
                                   {cvec({Complex(0.0, 1.0), 0.0})}),
                    StructureError);
    CHECK_THROWS_AS(UnitaryEnsemble(2, {2.0 * CMatrix::Identity(2, 2)}), StructureError);
    CHECK_THROWS_AS(PhaseEnsemble::zero_sum((RVector(2) << 0.5, 0.6).finished()),
                    StructureError);
    CHECK(PhaseEnsemble::zero_sum((RVector(2) << 0.5, -0.5).finished()).diameter() ==
          doctest::Approx(1.0));
}

TEST_CASE("frequency spectrum centers and caches the diameter") {
    FrequencySpectrum a((RVector(4) << -0.2831, -0.0196, 0.0708, 0.2318).finished());
    CHECK(std::abs(a.values().sum()) < 1e-12);
    CHECK(a.mean_shift() == doctest::Approx(-0.25e-4).epsilon(1e-9));
    CHECK(a.diameter() == doctest::Approx(0.5149).epsilon(1e-12));
}
