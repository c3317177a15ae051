#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "fqc/core.hpp"

namespace fqc {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

double bessel_j0(double x);

namespace detail {
double bessel_j0_series(double x);
double bessel_j0_asymptotic(double x);
}  // namespace detail

/// Extended runs the QR iteration in long double; eigenvector columns are
/// still returned in double.
enum class Precision { Double, Extended };

struct EigenDecomposition {
  std::vector<Complex> values;          // sorted by (re, im)
  std::optional<CMatrix> right_vectors; // column k pairs with values[k], unit 2-norm
};

EigenDecomposition eig_dense(const CMatrix& H, bool want_vectors, Precision precision = Precision::Double);

struct DetPhase {
  double phase;    // arg det, in (-pi, pi]
  double log_abs;  // ln |det|
};

DetPhase det_phase_and_log_abs(const CMatrix& H);

/// exp(-i H dt); requires ||H||_1 * |dt| <= 1.
CMatrix expm_multiply_step(const CMatrix& H, double dt);

double norm1(const CMatrix& H);

}  // namespace fqc
