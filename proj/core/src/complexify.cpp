#include "aggsync/complexify.hpp"

#include <cmath>

namespace aggsync {

namespace {

constexpr double kStructureTol = 1e-12;
constexpr double kBlockTol = 1e-10;

void require_skew(const RMatrix& m, double tol, const char* what) {
    if (m.rows() != m.cols()) {
        throw DimensionError(std::string(what) + ": matrix must be square");
    }
    if ((m + m.transpose()).norm() > tol) {
        throw StructureError(std::string(what) + ": matrix is not skew-symmetric");
    }
}

void require_symmetric(const RMatrix& m, double tol, const char* what) {
    if (m.rows() != m.cols()) {
        throw DimensionError(std::string(what) + ": matrix must be square");
    }
    if ((m - m.transpose()).norm() > tol) {
        throw StructureError(std::string(what) + ": matrix is not symmetric");
    }
}

}  // namespace

BlockFrequency::BlockFrequency(RMatrix a, RMatrix b, double a_j)
    : half_dimension(static_cast<int>(a.rows())),
      a_block(std::move(a)),
      b_block(std::move(b)),
      scalar(a_j) {
    require_skew(a_block, kStructureTol, "BlockFrequency");
    require_symmetric(b_block, kStructureTol, "BlockFrequency");
    if (b_block.rows() != half_dimension) {
        throw DimensionError("BlockFrequency: A and B must share one dimension");
    }
}

ComplexFrequency::ComplexFrequency(CMatrix m) : dimension(static_cast<int>(m.rows())), xi(std::move(m)) {
    if (xi.rows() != xi.cols()) {
        throw DimensionError("ComplexFrequency: matrix must be square");
    }
    if ((xi + xi.adjoint()).norm() > kStructureTol) {
        throw StructureError("ComplexFrequency: matrix is not skew-Hermitian");
    }
}

BlockDecomposition decompose_blocks(const RMatrix& omega) {
    require_skew(omega, kBlockTol, "decompose_blocks");
    const auto n = omega.rows();
    if (n % 2 != 0) {
        throw DimensionError("decompose_blocks: odd dimension; augment first");
    }
    const auto d = n / 2;
    BlockDecomposition out;
    out.a_block = omega.topLeftCorner(d, d);
    out.b_block = omega.topRightCorner(d, d);
    out.c_block = omega.bottomRightCorner(d, d);
    out.valid = (out.a_block - out.c_block).norm() <= kBlockTol &&
                (out.b_block - out.b_block.transpose()).norm() <= kBlockTol;
    return out;
}

ComplexFrequency complexify_matrix(const RMatrix& a_block, const RMatrix& b_block) {
    require_skew(a_block, kBlockTol, "complexify_matrix");
    require_symmetric(b_block, kBlockTol, "complexify_matrix");
    if (a_block.rows() != b_block.rows()) {
        throw DimensionError("complexify_matrix: block size mismatch");
    }
    CMatrix xi = a_block.cast<Complex>() - Complex(0.0, 1.0) * b_block.cast<Complex>();
    return ComplexFrequency(std::move(xi));
}

CVector real_to_complex_state(const RVector& x) {
    const auto n = x.size();
    if (n % 2 != 0) {
        throw DimensionError("real_to_complex_state: odd length");
    }
    const auto d = n / 2;
    CVector omega(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        omega[i] = Complex(x[i], x[d + i]);
    }
    return omega;
}

RVector complex_to_real_state(const CVector& omega) {
    const auto d = omega.size();
    RVector x(2 * d);
    for (Eigen::Index i = 0; i < d; ++i) {
        x[i] = omega[i].real();
        x[d + i] = omega[i].imag();
    }
    return x;
}

std::pair<RMatrix, RVector> augment_odd(const RMatrix& omega, const RVector& x) {
    require_skew(omega, kBlockTol, "augment_odd");
    const auto n = omega.rows();
    if (x.size() != n) {
        throw DimensionError("augment_odd: matrix/vector size mismatch");
    }
    RMatrix big = RMatrix::Zero(n + 1, n + 1);
    big.topLeftCorner(n, n) = omega;
    RVector xt(n + 1);
    xt.head(n) = x;
    xt[n] = 0.0;
    return {std::move(big), std::move(xt)};
}

RMatrix build_frequency(const RMatrix& a_block, const RMatrix& b_block, double a_j) {
    require_skew(a_block, kBlockTol, "build_frequency");
    require_symmetric(b_block, kBlockTol, "build_frequency");
    if (a_block.rows() != b_block.rows()) {
        throw DimensionError("build_frequency: block size mismatch");
    }
    const auto d = a_block.rows();
    RMatrix upper = b_block + a_j * RMatrix::Identity(d, d);
    RMatrix omega(2 * d, 2 * d);
    omega.topLeftCorner(d, d) = a_block;
    omega.topRightCorner(d, d) = upper;
    omega.bottomLeftCorner(d, d) = -upper.transpose();
    omega.bottomRightCorner(d, d) = a_block;
    return omega;
}

}  // namespace aggsync
