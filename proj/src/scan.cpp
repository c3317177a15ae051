#include "fqc/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace fqc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void apply(ScanParameter p, double v, ModelSpec& spec, DriveConfig& drive) {
  switch (p) {
    case ScanParameter::V: spec.V = v; break;
    case ScanParameter::gamma: spec.gamma = v; break;
    case ScanParameter::eta: spec.eta = v; break;
    case ScanParameter::K_over_omega: drive.K_over_omega = v; break;
  }
}

int sign_with_tolerance(double x) { return x > 1e-6 ? 1 : (x < -1e-6 ? -1 : 0); }

}  // namespace

std::string_view to_string(ScanParameter p) {
  switch (p) {
    case ScanParameter::V: return "V";
    case ScanParameter::gamma: return "gamma";
    case ScanParameter::eta: return "eta";
    case ScanParameter::K_over_omega: return "K_over_omega";
  }
  return "?";
}

std::optional<ScanParameter> parse_scan_parameter(std::string_view s) {
  if (s == "V") return ScanParameter::V;
  if (s == "gamma") return ScanParameter::gamma;
  if (s == "eta") return ScanParameter::eta;
  if (s == "K_over_omega") return ScanParameter::K_over_omega;
  return std::nullopt;
}

double ScanAxis::value(int i) const {
  if (n_points == 1) return min;
  return min + (max - min) * double(i) / double(n_points - 1);
}

void ScanConfig::validate() const {
  lattice.validate();
  drive.validate();
  for (const auto* a : {&axis1, &axis2}) {
    if (a->n_points < 1) throw Error(ErrorCode::InvalidParameter, "axis needs n_points >= 1");
    if (!std::isfinite(a->min) || !std::isfinite(a->max))
      throw Error(ErrorCode::InvalidParameter, "axis bounds must be finite");
  }
  if (axis1.parameter == axis2.parameter) throw Error(ErrorCode::InvalidParameter, "axes must sweep distinct parameters");
  if (n_theta < 64) throw Error(ErrorCode::InvalidParameter, "n_theta must be >= 64");
  if (!(ipr_threshold_factor > 0)) throw Error(ErrorCode::InvalidParameter, "ipr threshold factor must be > 0");
}

std::pair<ModelSpec, DriveConfig> ScanConfig::point(double p1, double p2) const {
  ModelSpec s = spec;
  DriveConfig d = drive;
  apply(axis1.parameter, p1, s, d);
  apply(axis2.parameter, p2, s, d);
  return {s, d};
}

int PhaseGrid::error_count() const {
  return int(std::count_if(cells.begin(), cells.end(), [](const ScanCell& c) { return !c.error.empty(); }));
}

ScanCell compute_cell(const ScanConfig& config, double p1, double p2) {
  ScanCell cell;
  cell.param1 = p1;
  cell.param2 = p2;
  cell.min_ipr = cell.max_ipr = kNaN;
  cell.lyapunov_min = cell.lyapunov_max = kNaN;
  try {
    const auto [spec, drive] = config.point(p1, p2);
    const CMatrix H = build_real_space(spec, config.lattice, drive).matrix;
    const SpectrumReport report = compute_spectrum(H, config.compute_iprs, config.precision);
    cell.max_abs_im = report.max_abs_im;
    cell.min_ipr = report.min_ipr;
    cell.max_ipr = report.max_ipr;
    cell.re_min = report.re_min;
    cell.re_max = report.re_max;

    if (spec.model == ModelId::M4) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (auto e : report.eigenvalues) {
        const double l = lyapunov_analytic(spec, drive, e).value;
        lo = std::min(lo, l);
        hi = std::max(hi, l);
      }
      cell.lyapunov_min = lo;
      cell.lyapunov_max = hi;
    } else if (spec.model != ModelId::M5) {
      cell.lyapunov_min = cell.lyapunov_max = lyapunov_analytic(spec, drive).value;
    }
    cell.lyapunov_sign = std::isnan(cell.lyapunov_max) ? 0 : sign_with_tolerance(cell.lyapunov_max);

    const auto cls = classify_phase(spec, drive, report, config.ipr_threshold_factor / config.lattice.L);
    cell.label = cls.label;
    cell.ipr_conflict = cls.conflict;

    if (config.compute_winding) {
      std::vector<Complex> bases;
      if (spec.model == ModelId::M4) {
        const auto [e1, e2] = m4_base_energies(spec, drive, config.winding_offset_im);
        bases = {e1, e2};
      } else if (spec.model == ModelId::M5) {
        bases = {m5_base_energy(spec, drive, config.winding_offset_im, config.winding_offset_re)};
      } else {
        bases = {config.winding_base};
      }
      WindingOptions o;
      o.n_theta = config.n_theta;
      cell.windings = winding_numbers(spec, config.lattice, drive, bases, o).windings;
    }
  } catch (const Error& e) {
    cell.error = e.what();
  } catch (const std::exception& e) {
    cell.error = std::string("InternalError: ") + e.what();
  }
  return cell;
}

PhaseGrid run_scan(const ScanConfig& config, int workers) {
  config.validate();
  if (workers < 1) throw Error(ErrorCode::InvalidParameter, "workers must be >= 1");
  PhaseGrid grid;
  grid.config = config;
  grid.n1 = config.axis1.n_points;
  grid.n2 = config.axis2.n_points;
  const size_t total = size_t(grid.n1) * grid.n2;
  grid.cells.resize(total);

  auto work = [&](size_t begin, size_t end) {
    for (size_t k = begin; k < end; ++k) {
      const int i1 = int(k / grid.n2), i2 = int(k % grid.n2);
      grid.cells[k] = compute_cell(config, config.axis1.value(i1), config.axis2.value(i2));
    }
  };
  const size_t w = std::min<size_t>(size_t(workers), std::max<size_t>(total, 1));
  if (w <= 1) {
    work(0, total);
    return grid;
  }
  std::vector<std::thread> threads;
  threads.reserve(w);
  for (size_t t = 0; t < w; ++t) threads.emplace_back(work, total * t / w, total * (t + 1) / w);
  for (auto& th : threads) th.join();
  return grid;
}

}  // namespace fqc
