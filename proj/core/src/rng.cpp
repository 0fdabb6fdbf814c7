#include "aggsync/rng.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace aggsync {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::uint64_t kind_tag(ModelKind kind) { return static_cast<std::uint64_t>(kind) + 1; }

}  // namespace

Xoshiro256PlusPlus::Xoshiro256PlusPlus(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& s : state_) {
        s = splitmix64(x);
    }
}

void Xoshiro256PlusPlus::absorb(std::uint64_t tag) {
    std::uint64_t x = next() ^ (tag * 0x9e3779b97f4a7c15ULL);
    for (auto& s : state_) {
        s = splitmix64(x);
    }
    has_cached_ = false;
}

std::uint64_t Xoshiro256PlusPlus::next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Xoshiro256PlusPlus::uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Xoshiro256PlusPlus::uniform01_open() {
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
}

double Xoshiro256PlusPlus::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_normal_;
    }
    const double u1 = uniform01_open();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_normal_ = r * std::sin(kTwoPi * u2);
    has_cached_ = true;
    return r * std::cos(kTwoPi * u2);
}

Complex Xoshiro256PlusPlus::normal_complex() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im);
}

SphereEnsemble sample_sphere_ensemble(std::uint64_t seed, ModelKind kind, int d, int n,
                                      SphereFlavor flavor) {
    Xoshiro256PlusPlus rng(seed);
    rng.absorb(kind_tag(kind));
    rng.absorb(static_cast<std::uint64_t>(d));
    rng.absorb(static_cast<std::uint64_t>(n));
    std::vector<CVector> states;
    states.reserve(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        CVector v(d);
        for (int i = 0; i < d; ++i) {
            v[i] = (flavor == SphereFlavor::Complex) ? rng.normal_complex()
                                                     : Complex(rng.normal(), 0.0);
        }
        states.push_back(renormalize_vector(v));
    }
    return SphereEnsemble(flavor, d, std::move(states));
}

CMatrix sample_haar_unitary(Xoshiro256PlusPlus& rng, int d) {
    CMatrix g(d, d);
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            g(r, c) = rng.normal_complex();
        }
    }
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < d; ++c) {
        const Complex rc = r(c, c);
        const double mag = std::abs(rc);
        const Complex ph = mag > 0.0 ? rc / mag : Complex(1.0, 0.0);
        q.col(c) *= ph;
    }
    return q;
}

UnitaryEnsemble sample_unitary_ensemble(std::uint64_t seed, int d, int n) {
    Xoshiro256PlusPlus rng(seed);
    rng.absorb(kind_tag(ModelKind::LoheMatrix));
    rng.absorb(static_cast<std::uint64_t>(d));
    rng.absorb(static_cast<std::uint64_t>(n));
    std::vector<CMatrix> mats;
    mats.reserve(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        mats.push_back(sample_haar_unitary(rng, d));
    }
    return UnitaryEnsemble(d, std::move(mats));
}

FrequencySpectrum sample_frequencies(std::uint64_t seed, int n, double spread) {
    Xoshiro256PlusPlus rng(seed);
    rng.absorb(0xF5EC5u);
    rng.absorb(static_cast<std::uint64_t>(n));
    RVector a(n);
    for (int j = 0; j < n; ++j) {
        a[j] = (2.0 * rng.uniform01() - 1.0) * spread;
    }
    return FrequencySpectrum(std::move(a));
}

SphereEnsemble sample_near_synchronized_sphere(std::uint64_t seed, ModelKind kind, int d,
                                               int n, SphereFlavor flavor, double eps) {
    Xoshiro256PlusPlus rng(seed);
    rng.absorb(kind_tag(kind));
    rng.absorb(static_cast<std::uint64_t>(d));
    rng.absorb(static_cast<std::uint64_t>(n));
    rng.absorb(0xC1u);
    CVector base(d);
    for (int i = 0; i < d; ++i) {
        base[i] = (flavor == SphereFlavor::Complex) ? rng.normal_complex()
                                                    : Complex(rng.normal(), 0.0);
    }
    base = renormalize_vector(base);
    std::vector<CVector> states;
    states.reserve(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        CVector v = base;
        for (int i = 0; i < d; ++i) {
            v[i] += eps * ((flavor == SphereFlavor::Complex) ? rng.normal_complex()
                                                             : Complex(rng.normal(), 0.0));
        }
        states.push_back(renormalize_vector(v));
    }
    return SphereEnsemble(flavor, d, std::move(states));
}

UnitaryEnsemble sample_near_synchronized_unitary(std::uint64_t seed, int d, int n, double eps) {
    Xoshiro256PlusPlus rng(seed);
    rng.absorb(kind_tag(ModelKind::LoheMatrix));
    rng.absorb(static_cast<std::uint64_t>(d));
    rng.absorb(static_cast<std::uint64_t>(n));
    rng.absorb(0xC1u);
    const CMatrix base = sample_haar_unitary(rng, d);
    std::vector<CMatrix> mats;
    mats.reserve(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        CMatrix x(d, d);
        for (int r = 0; r < d; ++r) {
            for (int c = 0; c < d; ++c) {
                x(r, c) = rng.normal_complex();
            }
        }
        CMatrix skew = 0.5 * (x - x.adjoint());
        CMatrix u = (eps * skew).exp() * base;
        mats.push_back(unitarize(u));
    }
    return UnitaryEnsemble(d, std::move(mats));
}

}  // namespace aggsync
