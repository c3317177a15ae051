#include "fqc/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace fqc {

double ipr(const CVector& psi) {
  const double n2 = psi.squaredNorm();
  if (!(n2 > 0.0)) throw Error(ErrorCode::ZeroVector, "IPR of a zero vector");
  double s = 0.0;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    const double p = std::norm(psi[i]);
    s += p * p;
  }
  return std::fabs(n2 - 1.0) <= 1e-10 ? s : s / (n2 * n2);
}

SpectrumReport summarize(const EigenDecomposition& eig) {
  SpectrumReport r;
  r.eigenvalues = eig.values;
  r.re_min = std::numeric_limits<double>::infinity();
  r.re_max = -std::numeric_limits<double>::infinity();
  for (auto e : eig.values) {
    r.max_abs_im = std::max(r.max_abs_im, std::fabs(e.imag()));
    r.re_min = std::min(r.re_min, e.real());
    r.re_max = std::max(r.re_max, e.real());
  }
  if (eig.right_vectors) {
    const CMatrix& V = *eig.right_vectors;
    r.iprs.reserve(V.cols());
    for (Eigen::Index k = 0; k < V.cols(); ++k) r.iprs.push_back(ipr(V.col(k)));
    r.min_ipr = *std::min_element(r.iprs.begin(), r.iprs.end());
    r.max_ipr = *std::max_element(r.iprs.begin(), r.iprs.end());
  } else {
    r.min_ipr = r.max_ipr = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

SpectrumReport compute_spectrum(const CMatrix& H, bool with_iprs, Precision precision) {
  return summarize(eig_dense(H, with_iprs, precision));
}

double default_ipr_threshold(int L) { return 10.0 / L; }

LyapunovValue lyapunov_analytic(const ModelSpec& spec, const DriveConfig& drive, std::optional<Complex> E) {
  spec.validate();
  double jp = effective_hopping(spec.J, drive.K_over_omega);
  bool saturated = false;
  if (std::fabs(jp) < kLyapunovEpsilon) {
    jp = kLyapunovEpsilon;
    saturated = true;
  }
  const double aj = std::fabs(jp);
  const double g = std::fabs(spec.gamma);
  auto log_ratio = [&](double num, double den) {
    if (num < kLyapunovEpsilon) {
      saturated = true;
      num = kLyapunovEpsilon;
    }
    return std::log(num / den);
  };
  switch (spec.model) {
    case ModelId::M1: return {log_ratio(std::fabs(spec.V), aj), saturated};
    case ModelId::M2: return {log_ratio(std::fabs(spec.V) * std::exp(g), 2 * aj), saturated};
    case ModelId::M3: return {log_ratio(std::fabs(spec.V) * std::exp(-g), 2 * aj), saturated};
    case ModelId::M4: {
      if (!E) throw Error(ErrorCode::InvalidParameter, "M4 Lyapunov exponent needs an energy");
      const double er = E->real(), ei = E->imag();
      const double a = std::hypot(2 * aj + er, spec.V - ei);
      const double b = std::hypot(2 * aj - er, spec.V - ei);
      return {std::acosh(std::max(1.0, (a + b) / (4 * aj))), saturated};
    }
    case ModelId::M5: break;
  }
  throw Error(ErrorCode::UnsupportedModel, "no closed-form Lyapunov exponent for M5");
}

double lyapunov_transfer_matrix(const ModelSpec& spec, const LatticeConfig& lattice, const DriveConfig& drive,
                                Complex E, std::int64_t N_sites, std::uint64_t seed) {
  spec.validate();
  drive.validate();
  if (N_sites < 10000) throw Error(ErrorCode::InvalidParameter, "transfer matrix needs N_sites >= 1e4");
  // symmetric gauge for M3: sqrt(J_L J_R) = J
  const double jp = effective_hopping(spec.J, drive.K_over_omega);
  if (std::fabs(jp) < kLyapunovEpsilon) throw Error(ErrorCode::HoppingZero, "dressed hopping is zero");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Complex a(nd(rng), nd(rng)), b(nd(rng), nd(rng));  // (psi_n, psi_{n-1})
  double scale = std::sqrt(std::norm(a) + std::norm(b));
  a /= scale;
  b /= scale;
  double log_sum = 0.0;
  for (std::int64_t n = 1; n <= N_sites; ++n) {
    const Complex vn = onsite_potential(spec, lattice, n);
    const Complex next = (E - vn) / jp * a - b;
    b = a;
    a = next;
    if (n % 16 == 0 || n == N_sites) {
      scale = std::sqrt(std::norm(a) + std::norm(b));
      log_sum += std::log(scale);
      a /= scale;
      b /= scale;
    }
  }
  double lambda = log_sum / double(N_sites);
  if (spec.model == ModelId::M3) lambda -= std::fabs(spec.gamma);
  return lambda;
}

M4Boundaries m4_boundaries(const ModelSpec& spec, const DriveConfig& drive) {
  if (spec.model != ModelId::M4) throw Error(ErrorCode::UnsupportedModel, "m4_boundaries needs model M4");
  const double jp = effective_hopping(spec.J, drive.K_over_omega);
  if (std::fabs(jp) < kLyapunovEpsilon) throw Error(ErrorCode::HoppingZero, "dressed hopping is zero");
  const double r = spec.V / jp;
  M4Boundaries b;
  b.gamma1 = 0.5 * std::asinh(std::fabs(spec.V / jp));
  b.delta = (2 + r * r) / 2;
  b.gamma2 = 0.5 * std::acosh(std::sqrt(b.delta + std::sqrt(b.delta * b.delta - 1)));
  const double s2 = jp * std::sin(2 * spec.gamma);
  if (s2 != 0.0) {
    const double inner = 1 - spec.V * spec.V / (s2 * s2);
    if (inner >= 0) b.beta0 = std::acos(std::clamp(std::cos(2 * spec.gamma) * std::sqrt(inner), -1.0, 1.0));
  }
  return b;
}

Complex m4_quasienergy_curves(const ModelSpec& spec, const DriveConfig& drive, double beta, M4Branch branch) {
  const double jp = effective_hopping(spec.J, drive.K_over_omega);
  if (branch == M4Branch::Extended) return {2 * jp * std::cos(beta), spec.V};
  const Complex z(beta, spec.gamma);
  const double s2 = std::pow(std::sin(beta), 2) + std::pow(std::sinh(spec.gamma), 2);  // |sin z|^2
  if (s2 < 1e-24) throw Error(ErrorCode::BranchCut, "cot(beta + i gamma) is singular");
  const Complex c = 2 * jp * std::cos(z);
  const Complex cot = std::cos(z) / std::sin(z);
  Complex E = std::sqrt(c * c + spec.V * spec.V * cot * cot);
  // Im E > 0; on the real axis keep Re E aligned with cos(beta)
  if (std::fabs(E.imag()) <= 1e-14 * std::abs(E)) {
    if (E.real() * std::cos(beta) < 0) E = -E;
  } else if (E.imag() < 0) {
    E = -E;
  }
  return E;
}

double mobility_edge_m5(const ModelSpec& spec, const DriveConfig& drive) {
  if (spec.model != ModelId::M5) throw Error(ErrorCode::UnsupportedModel, "mobility_edge_m5 needs model M5");
  if (!(spec.eta > 0.0 && spec.eta < 1.0)) throw Error(ErrorCode::InvalidEta, "mobility edge needs 0 < eta < 1");
  return std::fabs(effective_hopping(spec.J, drive.K_over_omega) * (spec.eta + 1.0 / spec.eta));
}

std::string_view to_string(PhaseLabel p) {
  switch (p) {
    case PhaseLabel::Extended: return "Extended";
    case PhaseLabel::MobilityEdge: return "MobilityEdge";
    case PhaseLabel::Localized: return "Localized";
  }
  return "?";
}

PhaseLabel ipr_phase(const SpectrumReport& report, double threshold) {
  if (report.max_ipr <= threshold) return PhaseLabel::Extended;
  if (report.min_ipr > threshold) return PhaseLabel::Localized;
  return PhaseLabel::MobilityEdge;
}

int m5_sign_sum(double Ec, double re_min, double re_max) {
  auto sgn = [](double x) { return (x > 0) - (x < 0); };
  return sgn(Ec - re_max) + sgn(Ec - re_min);
}

PhaseClassification classify_phase(const ModelSpec& spec, const DriveConfig& drive, const SpectrumReport& report,
                                   std::optional<double> ipr_threshold) {
  PhaseClassification out;
  const double jp = std::fabs(effective_hopping(spec.J, drive.K_over_omega));
  const double V = std::fabs(spec.V);
  const double g = std::fabs(spec.gamma);
  auto ext_if = [](bool c) { return c ? PhaseLabel::Extended : PhaseLabel::Localized; };
  switch (spec.model) {
    case ModelId::M1: out.label = ext_if(V < jp); break;
    case ModelId::M2: out.label = ext_if(V * std::exp(g) < 2 * jp); break;
    case ModelId::M3: out.label = ext_if(V < 2 * jp * std::exp(g)); break;
    case ModelId::M4: {
      if (jp < kLyapunovEpsilon) {
        out.label = PhaseLabel::Localized;
        break;
      }
      const auto b = m4_boundaries(spec, drive);
      out.label = g < b.gamma1 ? PhaseLabel::Localized : (g < b.gamma2 ? PhaseLabel::MobilityEdge : PhaseLabel::Extended);
      break;
    }
    case ModelId::M5: {
      const int s = m5_sign_sum(mobility_edge_m5(spec, drive), report.re_min, report.re_max);
      out.label = s == 2 ? PhaseLabel::Extended : (s == -2 ? PhaseLabel::Localized : PhaseLabel::MobilityEdge);
      break;
    }
  }
  if (report.has_iprs()) {
    const double thr = ipr_threshold.value_or(default_ipr_threshold(int(report.eigenvalues.size())));
    out.ipr_label = ipr_phase(report, thr);
    if (*out.ipr_label != out.label) {
      out.conflict = true;
      out.diagnostic = "ClassificationConflict: analytic " + std::string(to_string(out.label)) + ", IPR rule " +
                       std::string(to_string(*out.ipr_label)) + " (threshold " + std::to_string(thr) + ")";
    }
  }
  return out;
}

}  // namespace fqc
