#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "fqc/hamiltonian.hpp"

namespace fqc {

struct WindingOptions {
  int n_theta = 256;
  int max_n_theta = 4096;
  bool real_space_m1 = false;    // experimental: twist M1 through the real-space corners
  bool check_all_theta = false;  // eigenvalue distance test at every theta, O(n_theta) diagonalizations
};

struct WindingResult {
  ModelId model = ModelId::M1;
  std::vector<Complex> base_energies;
  std::vector<int> windings;
  int n_theta = 0;
  double max_phase_step = 0.0;
};

/// 2*pi for M1, M2, M3, M5; pi for M4.
double twist_range(ModelId model);

/// H(theta) under the model's twist convention. Needs q = L.
CMatrix twisted_hamiltonian(const ModelSpec& spec, const LatticeConfig& lattice, const DriveConfig& drive, double theta,
                            bool real_space_m1 = false);

/// Winding of det(H(theta) - base) over theta in [0, range), divided by 2*pi.
/// H(range) must be similar to H(0).
WindingResult winding_of_family(const std::function<CMatrix(double)>& H_of_theta, double range,
                                 const std::vector<Complex>& bases, const WindingOptions& options = {});

WindingResult winding_numbers(const ModelSpec& spec, const LatticeConfig& lattice, const DriveConfig& drive,
                              const std::vector<Complex>& bases, const WindingOptions& options = {});

int winding_number(const ModelSpec& spec, const LatticeConfig& lattice, const DriveConfig& drive, Complex base,
                   int n_theta = 256);

/// 1e-4 * max(1, |E|)
double default_offset_im(Complex base);

/// Bases iV and 2*J*J0 + iV, each shifted by i*offset (default_offset_im when unset).
std::pair<Complex, Complex> m4_base_energies(const ModelSpec& spec, const DriveConfig& drive,
                                             std::optional<double> offset_im = std::nullopt);
std::pair<int, int> winding_pair_m4(const ModelSpec& spec, const LatticeConfig& lattice, const DriveConfig& drive,
                                    int n_theta = 256, std::optional<double> offset_im = std::nullopt);

/// E_c + offset_re + i*offset_im. Defaults: offset_im = default_offset_im(E_c),
/// offset_re = 1e-2 * max(1, E_c), a step into the localized loop.
Complex m5_base_energy(const ModelSpec& spec, const DriveConfig& drive, std::optional<double> offset_im = std::nullopt,
                       std::optional<double> offset_re = std::nullopt);
int winding_m5(const ModelSpec& spec, const LatticeConfig& lattice, const DriveConfig& drive,
               std::optional<double> offset_im = std::nullopt, int n_theta = 256,
               std::optional<double> offset_re = std::nullopt);

}  // namespace fqc
