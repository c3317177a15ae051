#include "fqc/winding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fqc/observables.hpp"

namespace fqc {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap(double d) {
  d = std::remainder(d, 2 * kPi);
  return d <= -kPi ? d + 2 * kPi : d;
}

void check_off_spectrum(const CMatrix& H, const std::vector<Complex>& bases, double theta) {
  const auto ev = eig_dense(H, false).values;
  for (auto b : bases) {
    double d = 1e300;
    for (auto e : ev) d = std::min(d, std::abs(e - b));
    if (d < 1e-8)
      throw Error(ErrorCode::BaseOnSpectrum, "base (" + std::to_string(b.real()) + ", " + std::to_string(b.imag()) +
                                                 ") within 1e-8 of the spectrum at theta = " + std::to_string(theta));
  }
}

double det_phase_at(const CMatrix& H, Complex base, double theta) {
  CMatrix A = H;
  A.diagonal().array() -= base;
  try {
    return det_phase_and_log_abs(A).phase;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularMatrix) throw;
    throw Error(ErrorCode::BaseOnSpectrum, "H(theta) - base is singular at theta = " + std::to_string(theta));
  }
}

}  // namespace

double twist_range(ModelId model) { return model == ModelId::M4 ? kPi : 2 * kPi; }

CMatrix twisted_hamiltonian(const ModelSpec& spec, const LatticeConfig& lattice, const DriveConfig& drive, double theta,
                            bool real_space_m1) {
  LatticeConfig tw = lattice;
  tw.boundary = Boundary::twisted(theta);
  if (tw.alpha_den != tw.L) throw Error(ErrorCode::InvalidParameter, "winding numbers need q = L");
  if (spec.model == ModelId::M1 && !real_space_m1) return build_momentum_space(spec, tw, drive).matrix;
  return build_real_space(spec, tw, drive).matrix;
}

WindingResult winding_of_family(const std::function<CMatrix(double)>& H_of_theta, double range,
                                const std::vector<Complex>& bases, const WindingOptions& options) {
  if (options.n_theta < 64) throw Error(ErrorCode::InvalidParameter, "n_theta must be >= 64");
  const size_t nb = bases.size();
  int n = options.n_theta;
  // phases[b][j] = arg det(H(j*range/n) - base_b)
  std::vector<std::vector<double>> phases(nb, std::vector<double>(n));
  for (int j = 0; j < n; ++j) {
    const double theta = range * j / n;
    const CMatrix H = H_of_theta(theta);
    if (j == 0 || options.check_all_theta) check_off_spectrum(H, bases, theta);
    for (size_t b = 0; b < nb; ++b) phases[b][j] = det_phase_at(H, bases[b], theta);
  }

  while (true) {
    WindingResult r;
    r.base_energies = bases;
    r.n_theta = n;
    bool ok = true;
    for (size_t b = 0; b < nb; ++b) {
      double total = 0.0;
      for (int j = 0; j < n; ++j) {
        const double d = wrap(phases[b][(j + 1) % n] - phases[b][j]);
        total += d;
        r.max_phase_step = std::max(r.max_phase_step, std::fabs(d));
      }
      const double w = total / (2 * kPi);
      const double rounded = std::round(w);
      if (std::fabs(w - rounded) >= 0.05) ok = false;
      r.windings.push_back(int(rounded));
    }
    if (ok && r.max_phase_step < kPi / 2) return r;
    if (2 * n > options.max_n_theta)
      throw Error(ErrorCode::NonIntegerWinding, "phase unwrapping did not settle at n_theta = " + std::to_string(n) +
                                                    " (max step " + std::to_string(r.max_phase_step) + ")");
    // refine: keep the old points at even indices
    std::vector<std::vector<double>> finer(nb, std::vector<double>(2 * n));
    for (size_t b = 0; b < nb; ++b)
      for (int j = 0; j < n; ++j) finer[b][2 * j] = phases[b][j];
    for (int j = 0; j < n; ++j) {
      const double theta = range * (2 * j + 1) / (2 * n);
      const CMatrix H = H_of_theta(theta);
      if (options.check_all_theta) check_off_spectrum(H, bases, theta);
      for (size_t b = 0; b < nb; ++b) finer[b][2 * j + 1] = det_phase_at(H, bases[b], theta);
    }
    phases = std::move(finer);
    n *= 2;
  }
}

WindingResult winding_numbers(const ModelSpec& spec, const LatticeConfig& lattice, const DriveConfig& drive,
                              const std::vector<Complex>& bases, const WindingOptions& options) {
  spec.validate();
  drive.validate();
  auto family = [&](double theta) { return twisted_hamiltonian(spec, lattice, drive, theta, options.real_space_m1); };
  WindingResult r = winding_of_family(family, twist_range(spec.model), bases, options);
  r.model = spec.model;
  return r;
}

int winding_number(const ModelSpec& spec, const LatticeConfig& lattice, const DriveConfig& drive, Complex base,
                   int n_theta) {
  WindingOptions o;
  o.n_theta = n_theta;
  return winding_numbers(spec, lattice, drive, {base}, o).windings.at(0);
}

double default_offset_im(Complex base) { return 1e-4 * std::max(1.0, std::abs(base)); }

std::pair<Complex, Complex> m4_base_energies(const ModelSpec& spec, const DriveConfig& drive,
                                             std::optional<double> offset_im) {
  const Complex e1(0.0, spec.V);
  const Complex e2(2 * effective_hopping(spec.J, drive.K_over_omega), spec.V);
  return {e1 + Complex(0, offset_im.value_or(default_offset_im(e1))),
          e2 + Complex(0, offset_im.value_or(default_offset_im(e2)))};
}

std::pair<int, int> winding_pair_m4(const ModelSpec& spec, const LatticeConfig& lattice, const DriveConfig& drive,
                                    int n_theta, std::optional<double> offset_im) {
  if (spec.model != ModelId::M4) throw Error(ErrorCode::UnsupportedModel, "winding_pair_m4 needs model M4");
  const auto [e1, e2] = m4_base_energies(spec, drive, offset_im);
  WindingOptions o;
  o.n_theta = n_theta;
  const auto r = winding_numbers(spec, lattice, drive, {e1, e2}, o);
  return {r.windings[0], r.windings[1]};
}

Complex m5_base_energy(const ModelSpec& spec, const DriveConfig& drive, std::optional<double> offset_im,
                       std::optional<double> offset_re) {
  const double ec = mobility_edge_m5(spec, drive);
  const double off = offset_im.value_or(default_offset_im(ec));
  if (!(off > 0)) throw Error(ErrorCode::InvalidParameter, "offset_im must be > 0");
  // E_c is the cusp where the localized loop leaves the real axis; at finite L
  // the loop closes within a few level spacings of it, so step inside.
  const double re = offset_re.value_or(1e-2 * std::max(1.0, ec));
  if (!(re >= 0)) throw Error(ErrorCode::InvalidParameter, "offset_re must be >= 0");
  return {ec + re, off};
}

int winding_m5(const ModelSpec& spec, const LatticeConfig& lattice, const DriveConfig& drive,
               std::optional<double> offset_im, int n_theta, std::optional<double> offset_re) {
  if (spec.model != ModelId::M5) throw Error(ErrorCode::UnsupportedModel, "winding_m5 needs model M5");
  return winding_number(spec, lattice, drive, m5_base_energy(spec, drive, offset_im, offset_re), n_theta);
}

}  // namespace fqc
