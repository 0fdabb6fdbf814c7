#pragma once

// Seedable, platform-independent randomness: xoshiro256++ over a splitmix64
// seeding chain, normals via Box-Muller. Golden files depend on this exact
// generator semantics, so no std:: distribution is used anywhere.

#include <cstdint>

#include "aggsync/models.hpp"

namespace aggsync {

class Xoshiro256PlusPlus {
  public:
    explicit Xoshiro256PlusPlus(std::uint64_t seed);

    std::uint64_t next();
    // Uniform on [0, 1) with 53 random bits.
    double uniform01();
    // Uniform on (0, 1]; never returns 0 (safe under log).
    double uniform01_open();
    // Standard normal (Box-Muller, pair-cached).
    double normal();
    Complex normal_complex();  // independent N(0,1) real and imaginary parts

    // Mixes a tag into the stream so (seed, kind, d, N) selects distinct,
    // reproducible substreams.
    void absorb(std::uint64_t tag);

  private:
    std::uint64_t state_[4];
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

// Uniform states on the unit sphere: normalized standard-normal components
// (complex flavor draws independent real and imaginary normals).
SphereEnsemble sample_sphere_ensemble(std::uint64_t seed, ModelKind kind, int d, int n,
                                      SphereFlavor flavor);

// Haar-distributed unitaries: QR of a complex Gaussian matrix with the
// R_ii/|R_ii| diagonal phase fix.
UnitaryEnsemble sample_unitary_ensemble(std::uint64_t seed, int d, int n);

CMatrix sample_haar_unitary(Xoshiro256PlusPlus& rng, int d);

// Uniform on [-spread, spread], then mean-subtracted by the constructor.
FrequencySpectrum sample_frequencies(std::uint64_t seed, int n, double spread);

// Clustered initial data for near-synchronized starts: base state plus an
// eps-sized perturbation, projected back to the manifold.
SphereEnsemble sample_near_synchronized_sphere(std::uint64_t seed, ModelKind kind, int d,
                                               int n, SphereFlavor flavor, double eps);
UnitaryEnsemble sample_near_synchronized_unitary(std::uint64_t seed, int d, int n, double eps);

}  // namespace aggsync
