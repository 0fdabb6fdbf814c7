#include <benchmark/benchmark.h>

#include "aggsync/certify.hpp"
#include "aggsync/rng.hpp"
#include "aggsync/scenario.hpp"

using namespace aggsync;

namespace {

VectorStates make_states(int n, int d) {
    Xoshiro256PlusPlus rng(7);
    VectorStates out;
    for (int j = 0; j < n; ++j) {
        CVector v(d);
        for (int i = 0; i < d; ++i) v[i] = rng.normal_complex();
        out.push_back(renormalize_vector(v));
    }
    return out;
}

MatrixStates make_unitaries(int n, int d) {
    Xoshiro256PlusPlus rng(7);
    MatrixStates out;
    for (int j = 0; j < n; ++j) out.push_back(sample_haar_unitary(rng, d));
    return out;
}

RVector make_spectrum(int n) {
    return FrequencySpectrum(sample_frequencies(7, n, 0.4).values()).values();
}

void BM_RhsComplexSphere(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const VectorStates w = make_states(n, 2);
    const RVector a = make_spectrum(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rhs_primary(ModelKind::ComplexSphere, w, a, Coupling(1.5)));
    }
}
BENCHMARK(BM_RhsComplexSphere)->Arg(4)->Arg(16)->Arg(64);

void BM_RhsLoheMatrix(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const MatrixStates u = make_unitaries(n, 2);
    const RVector a = make_spectrum(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rhs_primary(ModelKind::LoheMatrix, u, a, Coupling(1.5)));
    }
}
BENCHMARK(BM_RhsLoheMatrix)->Arg(4)->Arg(16);

void BM_RhsReducedSphere(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const VectorStates z = make_states(n, 2);
    const RVector a = make_spectrum(n);
    PhaseVec th = PhaseVec::LinSpaced(n, -0.2, 0.2);
    th.array() -= th.mean();
    for (auto _ : state) {
        benchmark::DoNotOptimize(rhs_reduced(ModelKind::ReducedSphereZ, z, th, Coupling(1.5)));
    }
}
BENCHMARK(BM_RhsReducedSphere)->Arg(4)->Arg(16)->Arg(64);

void BM_Rk4StepKuramoto(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const RVector a = make_spectrum(n);
    PhaseVec th = PhaseVec::Zero(n);
    auto rhs = [&](const PhaseVec& x) { return rhs_kuramoto(x, a, 1.5); };
    for (auto _ : state) {
        th = rk4_step(rhs, th, 0.01);
        benchmark::DoNotOptimize(th);
    }
}
BENCHMARK(BM_Rk4StepKuramoto)->Arg(4)->Arg(64)->Arg(256);

void BM_Unitarize(benchmark::State& state) {
    Xoshiro256PlusPlus rng(11);
    const CMatrix q = 1.0001 * sample_haar_unitary(rng, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(unitarize(q));
    }
}
BENCHMARK(BM_Unitarize)->Arg(2)->Arg(4)->Arg(8);

void BM_SolveBetaSphere(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_beta_sphere());
    }
}
BENCHMARK(BM_SolveBetaSphere);

void BM_CheckHypotheses(benchmark::State& state) {
    CertificateInputs in{FrequencySpectrum(sample_frequencies(3, 5, 0.4).values()),
                         Coupling(2.0)};
    in.d_gram0 = 0.2;
    for (auto _ : state) {
        benchmark::DoNotOptimize(check_hypotheses(TheoremId::P31, in));
    }
}
BENCHMARK(BM_CheckHypotheses);

void BM_PairedRunShort(benchmark::State& state) {
    const FrequencySpectrum a = sample_frequencies(5, 4, 0.4);
    const SphereEnsemble e = sample_near_synchronized_sphere(6, ModelKind::ComplexSphere, 2,
                                                             4, SphereFlavor::Complex, 0.1);
    const PhaseEnsemble th0 = PhaseEnsemble::zero_sum(RVector::Zero(4));
    const IntegratorConfig cfg{0.01, 1.0, 1, 10};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            paired_run(ModelKind::ComplexSphere, e, th0, a, Coupling(2.0), cfg));
    }
}
BENCHMARK(BM_PairedRunShort);

}  // namespace

BENCHMARK_MAIN();
