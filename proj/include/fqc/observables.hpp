#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fqc/hamiltonian.hpp"

namespace fqc {

struct SpectrumReport {
  std::vector<Complex> eigenvalues;
  std::vector<double> iprs;  // empty when eigenvectors were not requested
  double max_abs_im = 0.0;
  double min_ipr = 0.0;
  double max_ipr = 0.0;
  double re_min = 0.0;
  double re_max = 0.0;

  bool has_iprs() const { return !iprs.empty(); }
};

double ipr(const CVector& psi);

SpectrumReport summarize(const EigenDecomposition& eig);
SpectrumReport compute_spectrum(const CMatrix& H, bool with_iprs, Precision precision = Precision::Double);

double default_ipr_threshold(int L);  // 10 / L

struct LyapunovValue {
  double value;
  bool saturated;  // hopping dressed to (numerically) zero, value uses epsilon
};

constexpr double kLyapunovEpsilon = 1e-15;

/// Natural log, per site. E is required for M4 and ignored otherwise.
LyapunovValue lyapunov_analytic(const ModelSpec& spec, const DriveConfig& drive,
                                std::optional<Complex> E = std::nullopt);

/// Transfer-matrix estimate over sites 1..N_sites using lattice.alpha; pick a
/// high-order approximant (q > N_sites) to mimic an irrational alpha.
double lyapunov_transfer_matrix(const ModelSpec& spec, const LatticeConfig& lattice, const DriveConfig& drive,
                                Complex E, std::int64_t N_sites = 100000, std::uint64_t seed = 0);

struct M4Boundaries {
  double gamma1;
  double gamma2;
  std::optional<double> beta0;
  double delta;
};

/// beta0 is evaluated for spec.gamma when the inner square root is real.
M4Boundaries m4_boundaries(const ModelSpec& spec, const DriveConfig& drive);

enum class M4Branch { Localized, Extended };
Complex m4_quasienergy_curves(const ModelSpec& spec, const DriveConfig& drive, double beta, M4Branch branch);

double mobility_edge_m5(const ModelSpec& spec, const DriveConfig& drive);

enum class PhaseLabel { Extended, MobilityEdge, Localized };
std::string_view to_string(PhaseLabel p);

struct PhaseClassification {
  PhaseLabel label = PhaseLabel::Extended;
  std::optional<PhaseLabel> ipr_label;  // only when the report has IPRs
  bool conflict = false;
  std::string diagnostic;
};

/// Label from IPRs alone: all below threshold Extended, all above Localized.
PhaseLabel ipr_phase(const SpectrumReport& report, double threshold);

/// Analytic conditions for M1-M4; M5 uses the spectrum against E_c.
PhaseClassification classify_phase(const ModelSpec& spec, const DriveConfig& drive, const SpectrumReport& report,
                                   std::optional<double> ipr_threshold = std::nullopt);

/// sign(E_c - E_r^max) + sign(E_c - E_r^min): 2, 0 or -2 in generic cases.
int m5_sign_sum(double Ec, double re_min, double re_max);

}  // namespace fqc
