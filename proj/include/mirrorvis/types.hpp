#pragma once

#include <complex>

#include <Eigen/Dense>

namespace mirrorvis {

using Real = double;
using Complex = std::complex<Real>;

template <class Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using RealVector = DenseVector<Real>;
using ComplexVector = DenseVector<Complex>;
using ComplexMatrix = DenseMatrix<Complex>;

// Mirror wave function in the truncated number basis |0>..|n_trunc-1>.
// States evolved by the linear unraveling are deliberately left
// unnormalized; the norm is part of the estimator.
using MirrorState = ComplexVector;

inline constexpr Real two_pi = 6.283185307179586476925286766559;

inline constexpr Real hbar_si = 1.054571817e-34;  // J s

}  // namespace mirrorvis
