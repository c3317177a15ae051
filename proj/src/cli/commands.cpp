#include "fqc/cli/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "fqc/cli/output.hpp"
#include "fqc/floquet_validate.hpp"

namespace fqc::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kKnownKeys = {
    "model", "model.id", "model.J", "model.V", "model.gamma", "model.eta",
    "lattice.L", "lattice.alpha", "lattice.boundary",
    "drive.K_over_omega", "drive.omega",
    "spectrum.ipr", "spectrum.precision",
    "scan.axis1.param", "scan.axis1.min", "scan.axis1.max", "scan.axis1.n",
    "scan.axis2.param", "scan.axis2.min", "scan.axis2.max", "scan.axis2.n",
    "scan.compute_iprs", "scan.compute_winding", "scan.n_theta", "scan.base_re", "scan.base_im",
    "scan.offset_im", "scan.offset_re", "scan.ipr_threshold_factor", "scan.precision", "scan.svg_quantities",
    "winding.base_re", "winding.base_im", "winding.offset_im", "winding.offset_re", "winding.n_theta", "winding.max_n_theta",
    "validate.n_steps",
    "lyapunov.E_re", "lyapunov.E_im", "lyapunov.N_sites", "lyapunov.alpha", "lyapunov.seed"};

using Clock = std::chrono::steady_clock;

struct Run {
  Config config;
  RunManifest manifest;
  Clock::time_point start = Clock::now();
};

// Config phase: parse, build, validate. Everything thrown here is exit 2.
template <class F>
int config_phase(const CommandOptions& o, const std::string& command, Run& run, std::ostream& err, F&& build) {
  try {
    if (o.config_path.empty()) throw ConfigError("--config is required");
    run.config = Config::load(o.config_path);
    run.manifest.command = command;
    run.manifest.config_digest = config_digest(run.config);
    run.manifest.config_text = run.config.serialize();
    for (const auto& k : run.config.unknown_keys(kKnownKeys)) run.manifest.warnings.push_back("unknown key '" + k + "'");
    build(run.config);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  return kOk;
}

template <class F>
int numerical_phase(const std::string& operation, std::ostream& err, F&& body) {
  try {
    body();
  } catch (const Error& e) {
    err << "error in " << operation << ": " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "error in " << operation << ": " << e.what() << "\n";
    return kNumericalError;
  }
  return kOk;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << text;
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

// Writes to the --out file (and its manifest) or to stdout.
void emit(const CommandOptions& o, Run& run, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  write_file(o.out, text);
  run.manifest.outputs.push_back(o.out);
  run.manifest.wall_time_s = std::chrono::duration<double>(Clock::now() - run.start).count();
  write_file(o.out + ".manifest.json", json_dump(manifest_json(run.manifest)));
}

void print_warnings(const Run& run, std::ostream& err) {
  for (const auto& w : run.manifest.warnings) err << "warning: " << w << "\n";
}

std::string describe(const ModelSpec& s, const LatticeConfig& lat, const DriveConfig& d) {
  std::ostringstream os;
  os << "model = " << to_string(s.model) << ", J = " << format_number(s.J, 12) << ", V = " << format_number(s.V, 12)
     << ", gamma = " << format_number(s.gamma, 12) << ", eta = " << format_number(s.eta, 12)
     << ", L = " << lat.L << ", alpha = " << lat.alpha_num << "/" << lat.alpha_den
     << ", boundary = " << format_boundary(lat.boundary) << ", K_over_omega = " << format_number(d.K_over_omega, 12);
  if (d.omega) os << ", omega = " << format_number(*d.omega, 12);
  return os.str();
}

Precision parse_precision(const std::string& s) {
  if (s == "double") return Precision::Double;
  if (s == "extended") return Precision::Extended;
  throw ConfigError("precision must be double or extended, got '" + s + "'");
}

std::string resolve_format(const CommandOptions& o, const std::string& fallback) {
  const std::string f = o.format.empty() ? fallback : o.format;
  if (f != "csv" && f != "json") throw ConfigError("--format must be csv or json");
  return f;
}

}  // namespace

int resolve_workers(std::optional<int> flag) {
  if (flag && *flag > 0) return *flag;
  if (const char* env = std::getenv("FLOQUET_QC_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 1024) return int(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int cmd_spectrum(const CommandOptions& o, std::ostream& out, std::ostream& err) {
  Run run;
  ModelSpec spec;
  LatticeConfig lat;
  DriveConfig drive;
  bool with_ipr = true;
  Precision prec = Precision::Double;
  std::string format;
  int rc = config_phase(o, "spectrum", run, err, [&](const Config& c) {
    format = resolve_format(o, "csv");
    spec = model_from_config(c);
    lat = lattice_from_config(c);
    drive = drive_from_config(c);
    with_ipr = c.bool_or("spectrum.ipr", true);
    prec = parse_precision(c.string_or("spectrum.precision", "double"));
    spec.validate();
    lat.validate();
    drive.validate();
    for (const auto& w : spec.warnings()) run.manifest.warnings.push_back(w);
  });
  if (rc) return rc;

  return numerical_phase("spectrum (eig_dense)", err, [&] {
    const auto H = build_real_space(spec, lat, drive);
    const SpectrumReport r = compute_spectrum(H.matrix, with_ipr, prec);
    std::optional<PhaseClassification> cls;
    try {
      cls = classify_phase(spec, drive, r);
    } catch (const Error& e) {
      run.manifest.warnings.push_back(std::string("phase classification skipped: ") + e.what());
    }
    std::string text;
    if (format == "csv") {
      std::vector<std::string> header{"floquet-qc " + std::string(kToolVersion) + " spectrum",
                                      describe(spec, lat, drive), "config_digest = " + run.manifest.config_digest,
                                      "max_abs_im = " + format_number(r.max_abs_im, 12),
                                      "min_ipr = " + format_number(r.min_ipr, 12),
                                      "max_ipr = " + format_number(r.max_ipr, 12),
                                      "re_range = " + format_number(r.re_min, 12) + " " + format_number(r.re_max, 12)};
      if (cls) header.push_back("phase = " + std::string(to_string(cls->label)));
      text = spectrum_csv(r, header);
    } else {
      json j = spectrum_json(r);
      j["model"] = std::string(to_string(spec.model));
      j["L"] = lat.L;
      j["config_digest"] = run.manifest.config_digest;
      j["phase"] = cls ? json(std::string(to_string(cls->label))) : json(nullptr);
      if (cls && cls->conflict) j["classification_diagnostic"] = cls->diagnostic;
      text = json_dump(j);
    }
    emit(o, run, text, out);
    print_warnings(run, err);
  });
}

int cmd_scan(const CommandOptions& o, std::ostream& out, std::ostream& err) {
  Run run;
  ScanConfig sc;
  std::vector<std::string> quantities;
  std::string requested;
  int rc = config_phase(o, "scan", run, err, [&](const Config& c) {
    sc = scan_from_config(c);
    sc.validate();
    requested = c.string_or("scan.svg_quantities", "");
    for (const auto& w : sc.spec.warnings()) run.manifest.warnings.push_back(w);
  });
  if (rc) return rc;

  const int workers = resolve_workers(o.workers);
  const fs::path dir = o.out.empty() ? fs::path("scan_out") : fs::path(o.out);
  return numerical_phase("scan", err, [&] {
    fs::create_directories(dir);
    const PhaseGrid g = run_scan(sc, workers);

    std::vector<std::string> header{
        "floquet-qc " + std::string(kToolVersion) + " scan",
        describe(sc.spec, sc.lattice, sc.drive),
        "axis1 = " + std::string(to_string(sc.axis1.parameter)) + " [" + format_number(sc.axis1.min, 12) + ", " +
            format_number(sc.axis1.max, 12) + "] n = " + std::to_string(sc.axis1.n_points),
        "axis2 = " + std::string(to_string(sc.axis2.parameter)) + " [" + format_number(sc.axis2.min, 12) + ", " +
            format_number(sc.axis2.max, 12) + "] n = " + std::to_string(sc.axis2.n_points),
        "config_digest = " + run.manifest.config_digest,
        "error_cells = " + std::to_string(g.error_count())};
    const std::string csv_path = (dir / "grid.csv").string(), json_path = (dir / "grid.json").string();
    write_file(csv_path, grid_csv(g, header));
    write_file(json_path, json_dump(grid_json(g)));
    run.manifest.outputs = {csv_path, json_path};

    if (o.svg) {
      if (requested.empty()) {
        quantities = heatmap_quantities(g);
      } else {
        std::stringstream ss(requested);
        for (std::string q; std::getline(ss, q, ',');)
          if (!q.empty()) quantities.push_back(q);
      }
      for (const auto& q : quantities) {
        const std::string svg = render_heatmap_svg(g, q);
        const std::string path = (dir / ("heatmap_" + q + ".svg")).string();
        write_file(path, svg);
        run.manifest.outputs.push_back(path);
      }
    }
    if (g.error_count() > 0)
      run.manifest.warnings.push_back(std::to_string(g.error_count()) + " cell(s) failed; see the error column");
    run.manifest.wall_time_s = std::chrono::duration<double>(Clock::now() - run.start).count();
    const std::string mpath = (dir / "manifest.json").string();
    write_file(mpath, json_dump(manifest_json(run.manifest)));
    out << "wrote " << g.cells.size() << " cells to " << dir.string() << "\n";
    print_warnings(run, err);
  });
}

int cmd_winding(const CommandOptions& o, std::ostream& out, std::ostream& err) {
  Run run;
  ModelSpec spec;
  LatticeConfig lat;
  DriveConfig drive;
  WindingOptions opts;
  std::optional<Complex> base;
  std::optional<double> offset, offset_re;
  int rc = config_phase(o, "winding", run, err, [&](const Config& c) {
    resolve_format(o, "json");
    spec = model_from_config(c);
    lat = lattice_from_config(c);
    drive = drive_from_config(c);
    opts.n_theta = int(c.int_or("winding.n_theta", 256));
    opts.max_n_theta = int(c.int_or("winding.max_n_theta", 4096));
    if (opts.n_theta < 8 || opts.max_n_theta < opts.n_theta) throw ConfigError("winding.n_theta out of range");
    const bool any = o.base_re || o.base_im || c.has("winding.base_re") || c.has("winding.base_im");
    if (any)
      base = Complex(o.base_re.value_or(c.double_or("winding.base_re", 0.0)),
                     o.base_im.value_or(c.double_or("winding.base_im", 0.0)));
    if (c.has("winding.offset_im")) offset = c.get_double("winding.offset_im");
    if (c.has("winding.offset_re")) offset_re = c.get_double("winding.offset_re");
    spec.validate();
    if (lat.boundary.kind == BoundaryKind::Open) lat.boundary = Boundary::periodic();
    lat.validate();
    drive.validate();
    if (o.format == "csv") run.manifest.warnings.push_back("winding output is JSON only");
  });
  if (rc) return rc;

  return numerical_phase("winding", err, [&] {
    std::vector<Complex> bases;
    if (base) {
      bases = {*base};
    } else if (spec.model == ModelId::M4) {
      auto [b1, b2] = m4_base_energies(spec, drive, offset);
      bases = {b1, b2};
    } else if (spec.model == ModelId::M5) {
      bases = {m5_base_energy(spec, drive, offset, offset_re)};
    } else {
      bases = {Complex(0.0, 0.0)};
    }
    const WindingResult w = winding_numbers(spec, lat, drive, bases, opts);
    json j;
    j["schema_version"] = 1;
    if (w.windings.size() == 2) {
      j["w1"] = w.windings[0];
      j["w2"] = w.windings[1];
    } else {
      j["w"] = w.windings.at(0);
    }
    json jb = json::array();
    for (const auto& b : w.base_energies) jb.push_back({b.real(), b.imag()});
    j["bases"] = jb;
    j["n_theta"] = w.n_theta;
    j["max_phase_step"] = w.max_phase_step;
    j["model"] = std::string(to_string(spec.model));
    j["config_digest"] = run.manifest.config_digest;
    emit(o, run, json_dump(j), out);
    print_warnings(run, err);
  });
}

int cmd_validate(const CommandOptions& o, std::ostream& out, std::ostream& err) {
  Run run;
  ModelSpec spec;
  LatticeConfig lat;
  DriveConfig drive;
  int n_steps = 0;
  int rc = config_phase(o, "validate", run, err, [&](const Config& c) {
    resolve_format(o, "json");
    spec = model_from_config(c);
    lat = lattice_from_config(c);
    drive = drive_from_config(c);
    n_steps = int(c.int_or("validate.n_steps", 0));
    spec.validate();
    lat.validate();
    drive.validate();
    if (!drive.omega) throw Error(ErrorCode::MissingOmega, "drive.omega is required for validate");
  });
  if (rc) return rc;

  return numerical_phase("validate (one-period propagator)", err, [&] {
    const PropagatorReport r = validate_high_frequency(spec, lat, drive, n_steps);
    json j;
    j["schema_version"] = 1;
    j["n_steps"] = r.n_steps;
    j["max_quasienergy_distance"] = r.max_distance;
    j["unitarity_defect"] = r.unitarity_defect;
    j["omega"] = *drive.omega;
    j["model"] = std::string(to_string(spec.model));
    j["config_digest"] = run.manifest.config_digest;
    emit(o, run, json_dump(j), out);
    print_warnings(run, err);
  });
}

int cmd_lyapunov(const CommandOptions& o, std::ostream& out, std::ostream& err) {
  Run run;
  ModelSpec spec;
  LatticeConfig chain;
  DriveConfig drive;
  Complex E;
  long long N = 100000;
  std::uint64_t seed = 0;
  int rc = config_phase(o, "lyapunov", run, err, [&](const Config& c) {
    resolve_format(o, "json");
    spec = model_from_config(c);
    drive = drive_from_config(c);
    E = {c.double_or("lyapunov.E_re", 0.0), c.double_or("lyapunov.E_im", 0.0)};
    N = c.int_or("lyapunov.N_sites", 100000);
    seed = std::uint64_t(c.int_or("lyapunov.seed", 0));
    const auto [p, q] = parse_fraction(c.string_or("lyapunov.alpha", "317811/514229"));
    chain.L = int(std::min<long long>(q, 1000000000));
    chain.alpha_num = p;
    chain.alpha_den = q;
    chain.boundary = Boundary::open();
    spec.validate();
    chain.validate();
    drive.validate();
  });
  if (rc) return rc;

  return numerical_phase("lyapunov", err, [&] {
    json j;
    j["schema_version"] = 1;
    j["model"] = std::string(to_string(spec.model));
    j["E"] = {E.real(), E.imag()};
    std::optional<LyapunovValue> an;
    try {
      an = lyapunov_analytic(spec, drive, E);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnsupportedModel) throw;
      run.manifest.warnings.push_back("no closed form for " + std::string(to_string(spec.model)));
    }
    const double tm = lyapunov_transfer_matrix(spec, chain, drive, E, N, seed);
    j["analytic"] = an ? json(an->value) : json(nullptr);
    j["analytic_saturated"] = an ? json(an->saturated) : json(nullptr);
    j["transfer_matrix"] = tm;
    j["difference"] = an ? json(tm - an->value) : json(nullptr);
    j["N_sites"] = N;
    j["alpha"] = std::to_string(chain.alpha_num) + "/" + std::to_string(chain.alpha_den);
    j["config_digest"] = run.manifest.config_digest;
    emit(o, run, json_dump(j), out);
    print_warnings(run, err);
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quasiperiodic non-Hermitian Floquet chain toolkit", "floquet-qc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  CommandOptions o;
  int workers = 0;
  double base_re = 0, base_im = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "Config file")->required();
    sub->add_option("--out", o.out, "Output file (directory for scan); stdout when omitted");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues, IPRs and summary of one Hamiltonian");
  add_common(spectrum);
  auto* scan = app.add_subcommand("scan", "Two-parameter phase scan");
  add_common(scan);
  scan->add_flag("--svg", o.svg, "Write heatmap_<quantity>.svg files");
  auto* workers_opt = scan->add_option("--workers", workers, "Worker threads (FLOQUET_QC_WORKERS fallback)")
                          ->check(CLI::Range(1, 1024));
  auto* winding = app.add_subcommand("winding", "Spectral winding numbers");
  add_common(winding);
  auto* bre = winding->add_option("--base-re", base_re, "Base energy, real part");
  auto* bim = winding->add_option("--base-im", base_im, "Base energy, imaginary part");
  auto* validate = app.add_subcommand("validate", "Compare exact one-period propagator with the effective model");
  add_common(validate);
  auto* lyapunov = app.add_subcommand("lyapunov", "Closed-form and transfer-matrix Lyapunov exponents");
  add_common(lyapunov);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o_out, o_err;
    const int code = app.exit(e, o_out, o_err);
    out << o_out.str();
    err << o_err.str();
    return code == 0 ? kOk : kUsage;
  }
  if (workers_opt->count()) o.workers = workers;
  if (bre->count()) o.base_re = base_re;
  if (bim->count()) o.base_im = base_im;

  if (spectrum->parsed()) return cmd_spectrum(o, out, err);
  if (scan->parsed()) return cmd_scan(o, out, err);
  if (winding->parsed()) return cmd_winding(o, out, err);
  if (validate->parsed()) return cmd_validate(o, out, err);
  return cmd_lyapunov(o, out, err);
}

}  // namespace fqc::cli
