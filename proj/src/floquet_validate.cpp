#include "fqc/floquet_validate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <tuple>

namespace fqc {

namespace {

double period(const DriveConfig& drive) {
  if (!drive.omega) throw Error(ErrorCode::MissingOmega, "floquet validation needs drive.omega");
  return 2 * std::numbers::pi / *drive.omega;
}

double fold(double x, double omega) { return x - omega * std::floor((x + omega / 2) / omega); }

}  // namespace

int stable_step_count(const ModelSpec& spec, const LatticeConfig& lattice, const DriveConfig& drive) {
  const double T = period(drive);
  // |e^{i f}| = 1, so the 1-norm does not depend on t
  const double h = norm1(build_rotating_frame(spec, lattice, drive, 0.0).matrix);
  int n = 256;
  while (h * T / n > 0.5) n *= 2;
  return n;
}

CMatrix one_period_propagator(const ModelSpec& spec, const LatticeConfig& lattice, const DriveConfig& drive,
                              int n_steps) {
  const double T = period(drive);
  if (n_steps < 256) throw Error(ErrorCode::InvalidParameter, "n_steps must be >= 256");
  const double dt = T / n_steps;
  CMatrix U = CMatrix::Identity(lattice.L, lattice.L);
  for (int j = 1; j <= n_steps; ++j) {
    const CMatrix H = build_rotating_frame(spec, lattice, drive, (j - 0.5) * dt).matrix;
    const double a = norm1(H) * dt;
    if (a > 0.5)
      throw Error(ErrorCode::StepTooLarge, "||H_r|| dt = " + std::to_string(a) + " > 0.5 with n_steps = " +
                                               std::to_string(n_steps) + "; need more steps");
    U = expm_multiply_step(H, dt) * U;
  }
  return U;
}

PropagatorReport compare_quasienergies(const CMatrix& U, double T, const CMatrix& H_eff) {
  if (U.rows() != H_eff.rows() || U.cols() != H_eff.cols())
    throw Error(ErrorCode::InvalidParameter, "U and H_eff differ in dimension");
  const double omega = 2 * std::numbers::pi / T;
  PropagatorReport r;
  r.U = U;
  r.unitarity_defect = (U.adjoint() * U - CMatrix::Identity(U.rows(), U.cols())).norm();

  for (auto u : eig_dense(U, false).values)
    r.quasienergies.emplace_back(fold(-std::arg(u) / T, omega), std::log(std::abs(u)) / T);
  std::sort(r.quasienergies.begin(), r.quasienergies.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::vector<Complex> eff;
  for (auto e : eig_dense(H_eff, false).values) eff.emplace_back(fold(e.real(), omega), e.imag());

  const size_t n = eff.size();
  std::vector<std::tuple<double, size_t, size_t>> pairs;
  pairs.reserve(n * n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) pairs.emplace_back(std::abs(r.quasienergies[i] - eff[j]), i, j);
  std::sort(pairs.begin(), pairs.end());
  std::vector<bool> used_q(n, false), used_e(n, false);
  r.matched.assign(n, Complex(0));
  r.distances.assign(n, 0.0);
  size_t done = 0;
  for (const auto& [d, i, j] : pairs) {
    if (used_q[i] || used_e[j]) continue;
    used_q[i] = used_e[j] = true;
    r.matched[i] = eff[j];
    r.distances[i] = d;
    r.max_distance = std::max(r.max_distance, d);
    if (++done == n) break;
  }
  return r;
}

PropagatorReport validate_high_frequency(const ModelSpec& spec, const LatticeConfig& lattice, const DriveConfig& drive,
                                         int n_steps) {
  if (n_steps == 0) n_steps = stable_step_count(spec, lattice, drive);
  const CMatrix U = one_period_propagator(spec, lattice, drive, n_steps);
  auto r = compare_quasienergies(U, period(drive), build_real_space(spec, lattice, drive).matrix);
  r.n_steps = n_steps;
  return r;
}

}  // namespace fqc
