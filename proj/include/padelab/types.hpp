#pragma once

// Common scalar/vector aliases and error types shared across the library.
// Coefficient vectors are stored densely in ascending powers of z; index 0
// is the constant term.  Real-valued series keep an exactly zero imaginary
// part so that one complex code path serves every family.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace padelab {

using Real = double;
using Complex = std::complex<Real>;

template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXc = VectorX<Complex>;
using VectorXr = VectorX<Real>;
using MatrixXc = MatrixX<Complex>;
using MatrixXr = MatrixX<Real>;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when the Toeplitz system is singular or numerically rank deficient
// and the active policy does not permit a reduced or regularized solve.
struct SolveError : std::runtime_error {
  int estimated_rank;
  int requested_order;
  SolveError(const std::string& what, int rank, int order)
      : std::runtime_error(what), estimated_rank(rank), requested_order(order) {}
};

// Thrown by evaluate() when |Q(z)| is below the underflow guard.
struct PoleProximityError : std::runtime_error {
  Real denominator_magnitude;
  PoleProximityError(const std::string& what, Real qmag)
      : std::runtime_error(what), denominator_magnitude(qmag) {}
};

// Thrown by denoise_signal() when no stable pole survives classification.
struct EmptyModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown by boundary_statistics() on fewer than two poles.
struct StatsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace padelab
