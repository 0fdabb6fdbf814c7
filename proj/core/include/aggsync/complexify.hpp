#pragma once

// Block decomposition of skew-symmetric drift matrices and the R^{2d} <-> C^d
// state correspondence that turns the real sphere model into its complex form.
//
// A 2d x 2d skew-symmetric Omega splits into quadrants [[A, B], [-B^T, C]].
// When A = C (skew) and B is symmetric, the free flow x' = Omega x is carried
// by omega = y + i z (with x = (y, z)) into omega' = Xi omega with the
// skew-Hermitian Xi = A - i B. Odd real dimensions are first padded by one
// zero row/column and one zero coordinate.
//
// The per-agent family assembled by build_frequency:
//   Omega_j = [[A, B], [-B, A]] + a_j [[0, I], [-I, 0]],
// i.e. the B-quadrant is B + a_j I, which complexifies to Xi_j = (A - iB)
// - i a_j I (drift minus i a_j). The paired real-sphere scenario therefore
// assembles its drift with -a_j so that the complexified trajectory carries
// the +i a_j drift of the reduced complex-sphere model and shares the
// companion Kuramoto's spectrum; the two spectra differ only by relabeling.

#include <utility>
#include <vector>

#include "aggsync/statespace.hpp"

namespace aggsync {

struct BlockFrequency {
    int half_dimension = 0;
    RMatrix a_block;  // skew-symmetric, d x d
    RMatrix b_block;  // symmetric, d x d
    double scalar = 0.0;

    BlockFrequency(RMatrix a, RMatrix b, double a_j);
};

struct ComplexFrequency {
    int dimension = 0;
    CMatrix xi;  // skew-Hermitian

    explicit ComplexFrequency(CMatrix m);
};

struct BlockDecomposition {
    RMatrix a_block;
    RMatrix b_block;
    RMatrix c_block;
    // True iff ||A - C||_F <= 1e-10 and ||B - B^T||_F <= 1e-10, i.e. the
    // matrix complexifies.
    bool valid = false;
};

// Quadrant split of a 2d x 2d skew-symmetric matrix. Throws StructureError on
// non-skew input and DimensionError on odd total dimension.
BlockDecomposition decompose_blocks(const RMatrix& omega);

// Xi = A - i B for skew-symmetric A and symmetric B.
ComplexFrequency complexify_matrix(const RMatrix& a_block, const RMatrix& b_block);

// x = (y, z) in R^{2d} -> omega = y + i z in C^d, and its inverse.
CVector real_to_complex_state(const RVector& x);
RVector complex_to_real_state(const CVector& omega);

// Pads Omega with a zero row/column and x with a trailing zero coordinate.
std::pair<RMatrix, RVector> augment_odd(const RMatrix& omega, const RVector& x);

// Assembles Omega_j = [[A, B + a_j I], [-(B + a_j I), A]].
RMatrix build_frequency(const RMatrix& a_block, const RMatrix& b_block, double a_j);

}  // namespace aggsync
