#pragma once

#include <vector>

#include "fqc/hamiltonian.hpp"

namespace fqc {

struct PropagatorReport {
  CMatrix U;
  std::vector<Complex> quasienergies;  // Re folded into [-omega/2, omega/2), sorted by (re, im)
  std::vector<Complex> matched;        // effective eigenvalue paired with each quasienergy
  std::vector<double> distances;
  double max_distance = 0.0;
  double unitarity_defect = 0.0;  // ||U^dagger U - I||_F
  int n_steps = 0;
};

/// Smallest step count (>= 256, power of two) with ||H_r||_1 * T / n <= 0.5.
int stable_step_count(const ModelSpec& spec, const LatticeConfig& lattice, const DriveConfig& drive);

/// Midpoint product of exp(-i H_r(t_j) dt), later times on the left.
CMatrix one_period_propagator(const ModelSpec& spec, const LatticeConfig& lattice, const DriveConfig& drive,
                              int n_steps);

PropagatorReport compare_quasienergies(const CMatrix& U, double T, const CMatrix& H_eff);

/// Propagate with n_steps (0 picks stable_step_count) and compare with the
/// real-space effective Hamiltonian.
PropagatorReport validate_high_frequency(const ModelSpec& spec, const LatticeConfig& lattice, const DriveConfig& drive,
                                         int n_steps = 0);

}  // namespace fqc
