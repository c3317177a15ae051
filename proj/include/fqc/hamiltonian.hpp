#pragma once

#include <optional>

#include "fqc/core.hpp"
#include "fqc/numerics.hpp"

namespace fqc {

enum class Representation { RealSpace, MomentumSpace, RotatingFrame };

struct HamiltonianBuild {
  CMatrix matrix;
  Representation representation = Representation::RealSpace;
  double time = 0.0;  // RotatingFrame only
  ModelSpec spec;
  LatticeConfig lattice;
  DriveConfig drive;
  std::optional<double> twist_theta;
};

/// Bare hoppings: right multiplies c+_n c_{n+1}, left multiplies c+_{n+1} c_n.
struct Hoppings {
  double right;
  double left;
};
Hoppings bare_hoppings(const ModelSpec& spec);

/// Twisted on M1 applies corner phases in real space (experimental variant;
/// the winding module twists M1 in momentum space).
HamiltonianBuild build_real_space(const ModelSpec& spec, const LatticeConfig& lattice, const DriveConfig& drive);

/// M1-M3 only. Periodic boundary, or Twisted for M1 (wrap entry times e^{-i theta}).
HamiltonianBuild build_momentum_space(const ModelSpec& spec, const LatticeConfig& lattice, const DriveConfig& drive);

/// Undressed hoppings with Peierls factors e^{+-i f(t)}, f(t) = (K/omega) sin(omega t).
HamiltonianBuild build_rotating_frame(const ModelSpec& spec, const LatticeConfig& lattice, const DriveConfig& drive,
                                      double t);

}  // namespace fqc
