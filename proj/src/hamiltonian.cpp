#include "fqc/hamiltonian.hpp"

#include <cmath>

namespace fqc {

namespace {

void check_inputs(const ModelSpec& spec, const LatticeConfig& lattice, const DriveConfig& drive) {
  spec.validate();
  lattice.validate();
  drive.validate();
  if (lattice.boundary.closed() && lattice.L < 3)
    throw Error(ErrorCode::InvalidParameter, "closed boundaries need L >= 3");
}

Complex phase_factor(double theta) { return {std::cos(theta), std::sin(theta)}; }

}  // namespace

Hoppings bare_hoppings(const ModelSpec& spec) {
  if (spec.model == ModelId::M3) return {spec.J * std::exp(-spec.gamma), spec.J * std::exp(spec.gamma)};
  return {spec.J, spec.J};
}

HamiltonianBuild build_real_space(const ModelSpec& spec, const LatticeConfig& lattice, const DriveConfig& drive) {
  check_inputs(spec, lattice, drive);
  const int L = lattice.L;
  const auto& bc = lattice.boundary;
  const double j0 = dressing_factor(drive.K_over_omega);
  const Hoppings hop = bare_hoppings(spec);
  const double tr = hop.right * j0;
  const double tl = hop.left * j0;

  double shift = 0.0;
  bool corner_twist = bc.kind == BoundaryKind::Flux;
  if (bc.kind == BoundaryKind::Twisted) {
    if (spec.model == ModelId::M1 || spec.model == ModelId::M3)
      corner_twist = true;
    else
      shift = bc.theta / L;
  }

  CMatrix H = CMatrix::Zero(L, L);
  for (int n = 1; n <= L; ++n) H(n - 1, n - 1) = onsite_potential(spec, lattice, n, shift);
  for (int i = 0; i + 1 < L; ++i) {
    H(i, i + 1) = tr;
    H(i + 1, i) = tl;
  }
  if (bc.closed()) {
    const Complex ph = corner_twist ? phase_factor(bc.theta) : Complex(1.0);
    H(L - 1, 0) += tr * ph;
    H(0, L - 1) += tl * std::conj(ph);
  }

  HamiltonianBuild b{std::move(H), Representation::RealSpace, 0.0, spec, lattice, drive, std::nullopt};
  if (bc.kind == BoundaryKind::Twisted || bc.kind == BoundaryKind::Flux) b.twist_theta = bc.theta;
  return b;
}

HamiltonianBuild build_momentum_space(const ModelSpec& spec, const LatticeConfig& lattice, const DriveConfig& drive) {
  if (spec.model == ModelId::M4 || spec.model == ModelId::M5)
    throw Error(ErrorCode::UnsupportedModel,
                "momentum-space form exists only for M1-M3, got " + std::string(to_string(spec.model)));
  check_inputs(spec, lattice, drive);
  const auto& bc = lattice.boundary;
  const bool twisted_m1 = bc.kind == BoundaryKind::Twisted && spec.model == ModelId::M1;
  if (bc.kind != BoundaryKind::Periodic && !twisted_m1)
    throw Error(ErrorCode::InvalidParameter, "momentum space needs a periodic lattice (twist allowed for M1)");

  const int L = lattice.L;
  const double jp = effective_hopping(spec.J, drive.K_over_omega);
  const double V = spec.V;
  const double g = spec.gamma;
  CMatrix H = CMatrix::Zero(L, L);
  for (int n = 1; n <= L; ++n) {
    const double x = quasi_phase(lattice, n);
    if (spec.model == ModelId::M3)
      H(n - 1, n - 1) = Complex(2 * jp * std::cos(x) * std::cosh(g), 2 * jp * std::sin(x) * std::sinh(g));
    else
      H(n - 1, n - 1) = 2 * jp * std::cos(x);
  }
  Complex sub, super;
  switch (spec.model) {
    case ModelId::M1: sub = V; super = 0.0; break;
    case ModelId::M2: sub = 0.5 * V * std::exp(g); super = 0.5 * V * std::exp(-g); break;
    default: sub = 0.5 * V; super = 0.5 * V; break;
  }
  for (int i = 0; i + 1 < L; ++i) {
    H(i + 1, i) = sub;
    H(i, i + 1) = super;
  }
  H(0, L - 1) += twisted_m1 ? sub * phase_factor(-bc.theta) : sub;
  H(L - 1, 0) += super;

  HamiltonianBuild b{std::move(H), Representation::MomentumSpace, 0.0, spec, lattice, drive, std::nullopt};
  if (twisted_m1) b.twist_theta = bc.theta;
  return b;
}

HamiltonianBuild build_rotating_frame(const ModelSpec& spec, const LatticeConfig& lattice, const DriveConfig& drive,
                                      double t) {
  if (!drive.omega) throw Error(ErrorCode::MissingOmega, "rotating frame needs drive.omega");
  check_inputs(spec, lattice, drive);
  const auto kind = lattice.boundary.kind;
  if (kind != BoundaryKind::Periodic && kind != BoundaryKind::Open)
    throw Error(ErrorCode::InvalidParameter, "rotating frame supports open or periodic boundaries only");

  const int L = lattice.L;
  const double f = drive.K_over_omega * std::sin(*drive.omega * t);
  const Complex peierls = phase_factor(f);
  const Hoppings hop = bare_hoppings(spec);
  CMatrix H = CMatrix::Zero(L, L);
  for (int n = 1; n <= L; ++n) H(n - 1, n - 1) = onsite_potential(spec, lattice, n);
  for (int i = 0; i + 1 < L; ++i) {
    H(i, i + 1) = hop.right * peierls;
    H(i + 1, i) = hop.left * std::conj(peierls);
  }
  if (kind == BoundaryKind::Periodic) {
    H(L - 1, 0) += hop.right * peierls;
    H(0, L - 1) += hop.left * std::conj(peierls);
  }
  return {std::move(H), Representation::RotatingFrame, t, spec, lattice, drive, std::nullopt};
}

}  // namespace fqc
