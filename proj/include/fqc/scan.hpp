#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fqc/observables.hpp"
#include "fqc/winding.hpp"

namespace fqc {

enum class ScanParameter { V, gamma, eta, K_over_omega };
std::string_view to_string(ScanParameter p);
std::optional<ScanParameter> parse_scan_parameter(std::string_view s);

struct ScanAxis {
  ScanParameter parameter = ScanParameter::V;
  double min = 0.0;
  double max = 1.0;
  int n_points = 2;

  double value(int i) const;
};

struct ScanConfig {
  ModelSpec spec;
  LatticeConfig lattice;
  DriveConfig drive;
  ScanAxis axis1;
  ScanAxis axis2{ScanParameter::K_over_omega, 0.0, 1.0, 2};
  bool compute_iprs = true;
  bool compute_winding = false;
  int n_theta = 256;
  Complex winding_base = 0.0;              // M1-M3
  std::optional<double> winding_offset_im;  // M4, M5 bases
  std::optional<double> winding_offset_re;  // M5 base
  double ipr_threshold_factor = 10.0;       // threshold = factor / L
  Precision precision = Precision::Double;

  void validate() const;
  /// Template parameters with (axis1, axis2) values applied.
  std::pair<ModelSpec, DriveConfig> point(double p1, double p2) const;
};

struct ScanCell {
  double param1 = 0.0;
  double param2 = 0.0;
  double max_abs_im = 0.0;
  double min_ipr = 0.0;  // NaN without IPRs
  double max_ipr = 0.0;
  double re_min = 0.0;
  double re_max = 0.0;
  double lyapunov_min = 0.0;  // closed forms; NaN for M5
  double lyapunov_max = 0.0;
  int lyapunov_sign = 0;      // sign of lyapunov_max, zero within 1e-6
  std::vector<int> windings;  // M4: (w1, w2)
  std::optional<PhaseLabel> label;
  bool ipr_conflict = false;
  std::string error;
};

struct PhaseGrid {
  ScanConfig config;
  int n1 = 0;
  int n2 = 0;
  std::vector<ScanCell> cells;  // row-major, axis1 outer

  const ScanCell& at(int i1, int i2) const { return cells.at(size_t(i1) * n2 + i2); }
  int error_count() const;
};

ScanCell compute_cell(const ScanConfig& config, double p1, double p2);

PhaseGrid run_scan(const ScanConfig& config, int workers);

}  // namespace fqc
