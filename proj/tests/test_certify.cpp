#include <doctest.h>

#include <cmath>

#include "aggsync/certify.hpp"
#include "aggsync/rng.hpp"

using namespace aggsync;

namespace {

RVector reference_a() {
    return (RVector(4) << -0.2831, -0.0196, 0.0708, 0.2318).finished();
}

RVector reference_gaps() {
    return (RVector(4) << 0.0, 0.2726, 0.3647, 0.5310).finished();
}

}  // namespace

TEST_CASE("beta roots against an independent high-precision oracle") {
    // frozen from a 30-digit scan/bisection done outside this code path
    CHECK(solve_beta_sphere() == doctest::Approx(0.433649502934).epsilon(1e-9));
    CHECK(solve_beta_sl() == doctest::Approx(0.250162951365).epsilon(1e-9));
    CHECK(solve_beta_matrix(1) == doctest::Approx(0.502637249048).epsilon(1e-9));
    CHECK(solve_beta_matrix(2) == doctest::Approx(0.334370321262).epsilon(1e-9));
    CHECK(solve_beta_matrix(3) == doctest::Approx(0.250490777463).epsilon(1e-9));
    CHECK(solve_beta_matrix(4) == doctest::Approx(0.200267604321).epsilon(1e-9));
    CHECK(solve_beta_lhs(3.0) == doctest::Approx(0.062503179244).epsilon(1e-9));
    CHECK(solve_beta_lhs(5.0) == doctest::Approx(0.125023744783).epsilon(1e-9));
    CHECK(solve_beta_lhs(10.0) == doctest::Approx(0.181886531950).epsilon(1e-9));

    // headline values
    CHECK(std::abs(solve_beta_sphere() - 0.434) < 5e-3);
    CHECK(std::abs(solve_beta_sl() - 0.250) < 5e-3);
}

TEST_CASE("beta residuals vanish and brackets have a sign change") {
    const double bs = solve_beta_sphere();
    CHECK(std::abs(std::sqrt(2.0 * (1.0 - 2.0 * bs) / (1.0 + bs)) -
                   2.0 * std::sin(bs / 2.0)) < 1e-9);
    const double bm = solve_beta_matrix(2);
    CHECK(std::abs(1.0 - bm - 4.0 * std::sin(bm / 2.0)) < 1e-9);
    const double bl = solve_beta_lhs(5.0);
    CHECK(std::abs((5.0 - 2.0 - 17.0 * bl) / 7.0 - 2.0 * std::sin(bl / 2.0)) < 1e-9);

    CHECK_THROWS_AS(solve_beta_lhs(2.0), RootError);
    CHECK_THROWS_AS(solve_beta_matrix(0), RootError);
    CHECK_THROWS_AS(
        bisect_root([](double) { return 1.0; }, 0.0, 1.0), RootError);
}

TEST_CASE("order_parameter") {
    CHECK(order_parameter(PhaseEnsemble(RVector::Constant(5, 0.7))) ==
          doctest::Approx(1.0).epsilon(1e-12));
    RVector two(2);
    two << 0.0, std::acos(-1.0);
    CHECK(order_parameter(PhaseEnsemble(two)) < 1e-7);
    RVector four(4);
    four << 0.0, std::acos(-1.0) / 2.0, std::acos(-1.0), 1.5 * std::acos(-1.0);
    CHECK(order_parameter(PhaseEnsemble(four)) < 1e-7);

    // matches the modulus of the mean phase factor
    Xoshiro256PlusPlus rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        RVector th(6);
        for (int i = 0; i < 6; ++i) th[i] = rng.normal();
        Complex mean(0.0, 0.0);
        for (int i = 0; i < 6; ++i) mean += Complex(std::cos(th[i]), std::sin(th[i]));
        mean /= 6.0;
        CHECK(order_parameter(PhaseEnsemble(th)) ==
              doctest::Approx(std::abs(mean)).epsilon(1e-12));
    }
}

TEST_CASE("check_hypotheses: sphere proposition with the reference spectrum") {
    FrequencySpectrum a(reference_a());
    CertificateInputs in{a, Coupling(2.0)};
    in.d_theta0 = 0.0;
    in.d_gram0 = 0.1;
    const Certificate cert = check_hypotheses(TheoremId::P31, in);
    CHECK(cert.pass);
    // kappa > 2 D(a): 2 > 1.0298
    bool found = false;
    for (const auto& c : cert.conditions) {
        if (c.name == "coupling") {
            found = true;
            CHECK(c.margin == doctest::Approx(2.0 - 1.0298).epsilon(1e-10));
        }
    }
    CHECK(found);
    // delta* lies inside (0, D(a)/kappa) = (0, 0.25745)
    CHECK(cert.delta_star > 0.0);
    CHECK(cert.delta_star < 0.25745 + 1e-12);

    // tightening the initial gram bound beyond every delta kills it
    in.d_gram0 = 1.01;
    CHECK_FALSE(check_hypotheses(TheoremId::P31, in).pass);
}

TEST_CASE("check_hypotheses: homogeneous branch") {
    FrequencySpectrum a(RVector::Zero(4));
    CertificateInputs in{a, Coupling(5.0)};
    in.d_primary0 = 0.5;
    in.dim = 2;
    const Certificate cert = check_hypotheses(TheoremId::T51, in);
    CHECK(cert.homogeneous);
    CHECK(cert.pass);
    CHECK(std::isnan(cert.delta_star));
}

TEST_CASE("check_hypotheses: order parameter threshold") {
    FrequencySpectrum a(reference_a());
    CertificateInputs in{a, Coupling(1.0)};
    in.r0 = 1.0;  // synchronized initial phases
    const Certificate cert = check_hypotheses(TheoremId::P21ii, in);
    // threshold is 1.6 * D(a) = 0.82384 < 1
    CHECK(cert.pass);
    CertificateInputs weak = in;
    weak.coupling = Coupling(0.8);
    CHECK_FALSE(check_hypotheses(TheoremId::P21ii, weak).pass);
}

TEST_CASE("certificate monotonicity in kappa where the conditions allow it") {
    Xoshiro256PlusPlus rng(6);
    for (int trial = 0; trial < 40; ++trial) {
        const FrequencySpectrum a = sample_frequencies(1000 + trial, 5, 0.4);
        const double da = a.diameter();
        CertificateInputs in{a, Coupling(0.0)};
        in.dim = 2;

        // P4.1: theta window survives doubling if D(theta0) < D(a)/(4 kappa)
        double kappa = 1.6 * da;
        in.coupling = Coupling(kappa);
        in.d_theta0 = 0.2 * da / (4.0 * kappa);
        in.d_gram0 = 0.3;
        if (check_hypotheses(TheoremId::P41, in).pass) {
            in.coupling = Coupling(2.0 * kappa);
            CHECK(check_hypotheses(TheoremId::P41, in).pass);
        }

        // P5.1 and T5.1 behave the same way
        kappa = 1.3 * da;
        in.coupling = Coupling(kappa);
        in.d_theta0 = 0.2 * da / (2.0 * kappa);
        in.d_gram0 = 0.4;
        in.d_primary0 = 0.3;
        if (check_hypotheses(TheoremId::P51, in).pass) {
            in.coupling = Coupling(2.0 * kappa);
            CHECK(check_hypotheses(TheoremId::P51, in).pass);
        }
        kappa = 4.0 * da;
        in.coupling = Coupling(kappa);
        if (check_hypotheses(TheoremId::T51, in).pass) {
            in.coupling = Coupling(2.0 * kappa);
            CHECK(check_hypotheses(TheoremId::T51, in).pass);
        }
    }
}

TEST_CASE("fit_decay_rate") {
    // exact exponential
    std::vector<double> ts, ds;
    for (int i = 0; i <= 2000; ++i) {
        const double t = 0.01 * i;
        ts.push_back(t);
        ds.push_back(std::exp(-3.0 * t));
    }
    const RateFit fit = fit_decay_rate(ts, ds);
    CHECK(fit.rate == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(fit.r_squared > 0.999999);
    CHECK(fit.samples >= 10);

    // too few in-band samples
    std::vector<double> t2 = {0.0, 1.0, 2.0};
    std::vector<double> d2 = {1e-4, 1e-5, 1e-6};
    CHECK_THROWS_AS(fit_decay_rate(t2, d2), FitError);
}

TEST_CASE("two-oscillator locking rate matches the scalar linearization") {
    // d(delta)/dt = -kappa sin(delta); near the origin the decay rate is kappa
    const double kappa = 1.0;
    double delta = 0.1;
    std::vector<double> ts, ds;
    const double dt = 0.01;
    for (int i = 0; i <= 4000; ++i) {
        ts.push_back(i * dt);
        ds.push_back(delta);
        const auto f = [&](double x) { return -kappa * std::sin(x); };
        const double k1 = f(delta);
        const double k2 = f(delta + 0.5 * dt * k1);
        const double k3 = f(delta + 0.5 * dt * k2);
        const double k4 = f(delta + dt * k3);
        delta += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    const RateFit fit = fit_decay_rate(ts, ds);
    CHECK(fit.rate == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(fit.r_squared > 0.999999);
}

TEST_CASE("verify_limits on a synchronized homogeneous limit") {
    Xoshiro256PlusPlus rng(9);
    CVector base(2);
    base[0] = rng.normal_complex();
    base[1] = rng.normal_complex();
    base = renormalize_vector(base);
    const VectorStates finals(4, base);
    const FrequencySpectrum a(RVector::Zero(4));
    ConvergenceReport conv;
    conv.converged = true;
    const LimitReport rep = verify_limits(ModelKind::ComplexSphere, finals,
                                          PhaseVec::Zero(4), a, 1.0, conv);
    CHECK(rep.gram_unit_modulus < 1e-12);
    CHECK(rep.additivity_residual < 1e-12);
    CHECK(rep.locked_state_residual < 1e-12);

    ConvergenceReport not_conv;
    CHECK_THROWS_AS(verify_limits(ModelKind::ComplexSphere, finals, PhaseVec::Zero(4), a, 1.0,
                                  not_conv),
                    StateError);
}

TEST_CASE("verify_limits on the reference final configuration") {
    auto mk = [](double p, double q, double r, double s) {
        CVector v(2);
        v[0] = Complex(p, q);
        v[1] = Complex(r, s);
        return renormalize_vector(v);
    };
    VectorStates finals;
    finals.push_back(mk(-0.5002, -0.4755, -0.3890, -0.6102));
    finals.push_back(mk(-0.3537, -0.5926, -0.2104, -0.6924));
    finals.push_back(mk(-0.2977, -0.6226, -0.1458, -0.7089));
    finals.push_back(mk(-0.1906, -0.6633, -0.0265, -0.7232));
    const FrequencySpectrum a(reference_a());
    ConvergenceReport conv;
    conv.converged = true;
    const LimitReport rep =
        verify_limits(ModelKind::ComplexSphere, finals, reference_gaps(), a, 1.0, conv);
    CHECK(rep.gram_unit_modulus < 1e-3);
    CHECK(rep.additivity_residual <= 1e-3);
    // e.g. 0.2726 + 0.0922 = 0.3648 vs 0.3647 in the printed matrix
    CHECK(rep.geodesic_matrix(0, 1) == doctest::Approx(0.2726).epsilon(2e-3));
}

TEST_CASE("calibrate_kappa") {
    const FrequencySpectrum a(reference_a());
    const double kappa_star = calibrate_kappa(reference_gaps(), a);
    CHECK(kappa_star == doctest::Approx(0.9999569).epsilon(1e-5));
    // linearized sanity bound: (a4 - a1) / gap14
    CHECK(kappa_star == doctest::Approx(0.5149 / 0.5310).epsilon(0.05));

    CHECK_THROWS_AS(calibrate_kappa(RVector::Zero(4), FrequencySpectrum(RVector::Zero(4))),
                    CalibrationError);
}

TEST_CASE("calibrate_kappa round-trips a locked state") {
    // integrate a 5-agent run to convergence at kappa = 2, feed the locked
    // gaps back
    const double kappa = 2.0;
    FrequencySpectrum a = sample_frequencies(417, 5, 0.4);
    PhaseVec th = PhaseVec::Zero(5);
    const double dt = 0.01;
    for (int i = 0; i < 60000; ++i) {
        const auto f = [&](const PhaseVec& x) { return rhs_kuramoto(x, a.values(), kappa); };
        th = rk4_step(f, th, dt);
    }
    CHECK(tangent_sup_norm(rhs_kuramoto(th, a.values(), kappa)) < 1e-12);

    // order agents by frequency, gaps relative to the slowest
    std::vector<int> idx = {0, 1, 2, 3, 4};
    std::sort(idx.begin(), idx.end(),
              [&](int p, int q) { return a.values()[p] < a.values()[q]; });
    RVector gaps(5);
    RVector a_sorted(5);
    for (int i = 0; i < 5; ++i) {
        gaps[i] = th[idx[static_cast<size_t>(i)]] - th[idx[0]];
        a_sorted[i] = a.values()[idx[static_cast<size_t>(i)]];
    }
    const double kappa_star = calibrate_kappa(gaps, FrequencySpectrum(a_sorted));
    CHECK(kappa_star == doctest::Approx(2.0).epsilon(1e-6));
}
