#include "fqc/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace fqc {

namespace detail {

// Long double keeps the cancellation error below 1e-13 out to |x| = 20.
double bessel_j0_series(double x) {
  const long double q = static_cast<long double>(x) * x / 4;
  long double term = 1, sum = 1;
  for (int k = 1; k < 200; ++k) {
    term *= -q / (static_cast<long double>(k) * k);
    sum += term;
    if (k > 4 && std::fabs(term) < 1e-21L * std::max<long double>(1, std::fabs(sum))) break;
  }
  return static_cast<double>(sum);
}

double bessel_j0_asymptotic(double x) {
  x = std::fabs(x);
  // b_k = a_k / x^k with a_k the Hankel coefficients for order zero
  double P = 1.0, Q = 0.0;
  double b = 1.0;
  for (int k = 1; k < 80; ++k) {
    const double next = b * -((2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k * x);
    if (std::fabs(next) > std::fabs(b) || std::fabs(next) < 1e-18) break;
    b = next;
    const double sgn = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0)
      P += sgn * b;
    else
      Q += sgn * b;
  }
  const double chi = x - std::numbers::pi / 4;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (P * std::cos(chi) - Q * std::sin(chi));
}

}  // namespace detail

double bessel_j0(double x) {
  if (std::fabs(x) <= 20.0) return detail::bessel_j0_series(x);
  return detail::bessel_j0_asymptotic(x);
}

namespace {

// Parlett-Reinsch diagonal scaling (radix 2, no permutations). On return
// B = D^-1 A D and scale holds diag(D).
template <class M>
void balance(M& A, std::vector<typename M::RealScalar>& scale) {
  using R = typename M::RealScalar;
  const Eigen::Index n = A.rows();
  scale.assign(n, R(1));
  bool done = false;
  for (int sweep = 0; !done && sweep < 100000; ++sweep) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      R c = 0, r = 0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(A(j, i).real()) + std::abs(A(j, i).imag());
        r += std::abs(A(i, j).real()) + std::abs(A(i, j).imag());
      }
      if (c == 0 || r == 0) continue;
      const R s = c + r;
      R f = 1, g = r / 2;
      while (c < g) { f *= 2; c *= 4; }
      g = r * 2;
      while (c > g) { f /= 2; c /= 4; }
      if ((c + r) / f < R(0.95) * s) {
        done = false;
        A.row(i) /= f;
        A.col(i) *= f;
        scale[i] *= f;
      }
    }
  }
}

template <class R>
EigenDecomposition eig_impl(const CMatrix& H, bool want_vectors) {
  using C = std::complex<R>;
  using M = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = H.rows();
  M A = H.template cast<C>();
  std::vector<R> scale;
  balance(A, scale);

  Eigen::ComplexEigenSolver<M> solver;
  solver.setMaxIterations(30 * n);
  solver.compute(A, want_vectors);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::NoConvergence, "QR iteration cap (30*dim) exceeded, dim = " + std::to_string(n));

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto& ev = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (ev[a].real() != ev[b].real()) return ev[a].real() < ev[b].real();
    return ev[a].imag() < ev[b].imag();
  });

  EigenDecomposition out;
  out.values.reserve(n);
  for (auto k : order) out.values.emplace_back(double(ev[k].real()), double(ev[k].imag()));
  if (want_vectors) {
    const M& vecs = solver.eigenvectors();
    CMatrix V(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
      Eigen::Matrix<C, Eigen::Dynamic, 1> v = vecs.col(order[c]);
      for (Eigen::Index i = 0; i < n; ++i) v[i] *= scale[i];
      v /= v.norm();
      V.col(c) = v.template cast<Complex>();
    }
    out.right_vectors = std::move(V);
  }
  return out;
}

}  // namespace

EigenDecomposition eig_dense(const CMatrix& H, bool want_vectors, Precision precision) {
  if (H.rows() < 1 || H.rows() != H.cols())
    throw Error(ErrorCode::InvalidParameter, "eig_dense needs a square matrix of dim >= 1");
  if (!H.allFinite()) throw Error(ErrorCode::InvalidParameter, "matrix has non-finite entries");
  if (precision == Precision::Extended) return eig_impl<long double>(H, want_vectors);
  return eig_impl<double>(H, want_vectors);
}

DetPhase det_phase_and_log_abs(const CMatrix& H) {
  if (H.rows() != H.cols() || H.rows() < 1)
    throw Error(ErrorCode::InvalidParameter, "determinant needs a square matrix");
  Eigen::PartialPivLU<CMatrix> lu(H);
  const CMatrix& LU = lu.matrixLU();
  double phase = lu.permutationP().determinant() < 0 ? std::numbers::pi : 0.0;
  double log_abs = 0.0;
  for (Eigen::Index i = 0; i < LU.rows(); ++i) {
    const Complex u = LU(i, i);
    const double a = std::abs(u);
    if (!(a >= 1e-300))
      throw Error(ErrorCode::SingularMatrix, "pivot " + std::to_string(i) + " below 1e-300");
    phase += std::arg(u);
    log_abs += std::log(a);
  }
  phase = std::remainder(phase, 2 * std::numbers::pi);
  if (phase <= -std::numbers::pi) phase += 2 * std::numbers::pi;
  return {phase, log_abs};
}

double norm1(const CMatrix& H) {
  if (H.size() == 0) return 0.0;
  return H.cwiseAbs().colwise().sum().maxCoeff();
}

CMatrix expm_multiply_step(const CMatrix& H, double dt) {
  const double a = norm1(H) * std::fabs(dt);
  if (!(a <= 1.0))
    throw Error(ErrorCode::StepTooLarge, "||H|| dt = " + std::to_string(a) + " exceeds 1");
  const Eigen::Index n = H.rows();
  const CMatrix A = Complex(0.0, -dt) * H;
  CMatrix sum = CMatrix::Identity(n, n);
  CMatrix term = CMatrix::Identity(n, n);
  for (int k = 1; k <= 40; ++k) {
    term = (term * A) / double(k);
    sum += term;
    if (norm1(term) < 1e-18) break;
  }
  return sum;
}

}  // namespace fqc
