#include "fqc/cli/output.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>

namespace fqc::cli {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void dump_into(const json& j, std::string& out, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  switch (j.type()) {
    case json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_number(x, 17) : "null";
      break;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      if (std::none_of(j.begin(), j.end(), [](const json& e) { return e.is_structured(); })) {
        out += "[";
        for (size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump_into(j[i], out, depth + 1);
        }
        out += "]";
        break;
      }
      out += "[\n";
      for (size_t i = 0; i < j.size(); ++i) {
        out += pad;
        dump_into(j[i], out, depth + 1);
        out += i + 1 < j.size() ? ",\n" : "\n";
      }
      out += close + "]";
      break;
    }
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        out += pad + json(it.key()).dump() + ": ";
        dump_into(it.value(), out, depth + 1);
        out += i + 1 < j.size() ? ",\n" : "\n";
      }
      out += close + "}";
      break;
    }
    default:
      out += j.dump();
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::string fixed(double x, int decimals = 2) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, decimals);
  return std::string(buf, r.ptr);
}

std::string join_windings(const std::vector<int>& w) {
  std::string out;
  for (size_t i = 0; i < w.size(); ++i) out += (i ? ";" : "") + std::to_string(w[i]);
  return out;
}

std::string fraction(const LatticeConfig& lat) {
  return std::to_string(lat.alpha_num) + "/" + std::to_string(lat.alpha_den);
}

// viridis, 9 anchors
constexpr std::array<std::array<int, 3>, 9> kRamp{{{68, 1, 84},
                                                    {71, 45, 123},
                                                    {59, 82, 139},
                                                    {44, 114, 142},
                                                    {33, 145, 140},
                                                    {40, 174, 128},
                                                    {94, 201, 98},
                                                    {173, 220, 48},
                                                    {253, 231, 37}}};

std::string ramp_color(double t) {
  if (!std::isfinite(t)) return "#bbbbbb";
  t = std::clamp(t, 0.0, 1.0) * (kRamp.size() - 1);
  const size_t i = std::min<size_t>(size_t(t), kRamp.size() - 2);
  const double f = t - double(i);
  char buf[8];
  int rgb[3];
  for (int k = 0; k < 3; ++k) rgb[k] = int(std::lround(kRamp[i][k] + f * (kRamp[i + 1][k] - kRamp[i][k])));
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Marching squares on an nx by ny sample grid; values stored x-major.
void contour(const std::vector<double>& f, int nx, int ny, const std::vector<double>& xs, const std::vector<double>& ys,
             std::vector<Segment>& out) {
  auto at = [&](int i, int j) { return f[size_t(i) * ny + j]; };
  for (int i = 0; i + 1 < nx; ++i) {
    for (int j = 0; j + 1 < ny; ++j) {
      const double v[4] = {at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)};
      if (!std::all_of(v, v + 4, [](double x) { return std::isfinite(x); })) continue;
      const double px[4] = {xs[i], xs[i + 1], xs[i + 1], xs[i]};
      const double py[4] = {ys[j], ys[j], ys[j + 1], ys[j + 1]};
      std::vector<std::pair<double, double>> hits;
      for (int e = 0; e < 4; ++e) {
        const int a = e, b = (e + 1) % 4;
        if ((v[a] < 0) != (v[b] < 0)) {
          const double t = v[a] / (v[a] - v[b]);
          hits.emplace_back(px[a] + t * (px[b] - px[a]), py[a] + t * (py[b] - py[a]));
        }
      }
      for (size_t h = 0; h + 1 < hits.size(); h += 2)
        out.push_back({hits[h].first, hits[h].second, hits[h + 1].first, hits[h + 1].second});
    }
  }
}

}  // namespace

std::string format_number(double x, int digits) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, digits);
  return std::string(buf, r.ptr);
}

std::string json_dump(const json& j) {
  std::string out;
  dump_into(j, out, 0);
  return out + "\n";
}

std::string spectrum_csv(const SpectrumReport& r, const std::vector<std::string>& header) {
  std::string out;
  for (const auto& h : header) out += "# " + h + "\n";
  out += "index,re_E,im_E,ipr\n";
  for (size_t i = 0; i < r.eigenvalues.size(); ++i) {
    out += std::to_string(i) + "," + format_number(r.eigenvalues[i].real(), 12) + "," +
           format_number(r.eigenvalues[i].imag(), 12) + "," +
           (r.has_iprs() ? format_number(r.iprs[i], 12) : std::string("nan")) + "\n";
  }
  return out;
}

json spectrum_json(const SpectrumReport& r) {
  json j;
  j["schema_version"] = 1;
  json ev = json::array();
  for (size_t i = 0; i < r.eigenvalues.size(); ++i) {
    json e = {{"index", i}, {"re", r.eigenvalues[i].real()}, {"im", r.eigenvalues[i].imag()}};
    e["ipr"] = r.has_iprs() ? number_or_null(r.iprs[i]) : json(nullptr);
    ev.push_back(e);
  }
  j["eigenvalues"] = ev;
  j["summary"] = {{"count", r.eigenvalues.size()},
                  {"max_abs_im", r.max_abs_im},
                  {"min_ipr", number_or_null(r.min_ipr)},
                  {"max_ipr", number_or_null(r.max_ipr)},
                  {"re_min", r.re_min},
                  {"re_max", r.re_max}};
  return j;
}

std::string grid_csv(const PhaseGrid& g, const std::vector<std::string>& header) {
  const std::string p1(to_string(g.config.axis1.parameter)), p2(to_string(g.config.axis2.parameter));
  std::string out;
  for (const auto& h : header) out += "# " + h + "\n";
  out += "# columns: i1,i2 grid indices; " + p1 + "," + p2 +
         " cell parameters; max_abs_im,min_ipr,max_ipr,re_min,re_max spectrum summary; "
         "lyapunov_min,lyapunov_max closed-form exponents (nan where none); lyapunov_sign; "
         "windings ';'-separated; label; ipr_conflict 0/1; error text (empty if none)\n";
  out += "i1,i2," + p1 + "," + p2 +
         ",max_abs_im,min_ipr,max_ipr,re_min,re_max,lyapunov_min,lyapunov_max,lyapunov_sign,windings,label,"
         "ipr_conflict,error\n";
  for (int i1 = 0; i1 < g.n1; ++i1) {
    for (int i2 = 0; i2 < g.n2; ++i2) {
      const ScanCell& c = g.at(i1, i2);
      auto n = [](double x) { return format_number(x, 12); };
      out += std::to_string(i1) + "," + std::to_string(i2) + "," + n(c.param1) + "," + n(c.param2) + "," +
             n(c.max_abs_im) + "," + n(c.min_ipr) + "," + n(c.max_ipr) + "," + n(c.re_min) + "," + n(c.re_max) +
             "," + n(c.lyapunov_min) + "," + n(c.lyapunov_max) + "," + std::to_string(c.lyapunov_sign) + "," +
             join_windings(c.windings) + "," + (c.label ? std::string(to_string(*c.label)) : std::string()) +
             "," + (c.ipr_conflict ? "1" : "0") + "," + csv_field(c.error) + "\n";
    }
  }
  return out;
}

json grid_json(const PhaseGrid& g) {
  const ScanConfig& s = g.config;
  json j;
  j["schema_version"] = 1;
  j["model"] = {{"id", std::string(to_string(s.spec.model))},
                {"J", s.spec.J},
                {"V", s.spec.V},
                {"gamma", s.spec.gamma},
                {"eta", s.spec.eta}};
  j["lattice"] = {{"L", s.lattice.L}, {"alpha", fraction(s.lattice)}, {"boundary", format_boundary(s.lattice.boundary)}};
  j["drive"] = {{"K_over_omega", s.drive.K_over_omega},
                {"omega", s.drive.omega ? json(*s.drive.omega) : json(nullptr)}};
  auto axis = [](const ScanAxis& a) {
    return json{{"param", std::string(to_string(a.parameter))}, {"min", a.min}, {"max", a.max}, {"n", a.n_points}};
  };
  j["axis1"] = axis(s.axis1);
  j["axis2"] = axis(s.axis2);
  j["compute_iprs"] = s.compute_iprs;
  j["compute_winding"] = s.compute_winding;
  j["n_theta"] = s.n_theta;
  j["ipr_threshold_factor"] = s.ipr_threshold_factor;
  j["n1"] = g.n1;
  j["n2"] = g.n2;
  j["error_count"] = g.error_count();
  json cells = json::array();
  for (int i1 = 0; i1 < g.n1; ++i1) {
    for (int i2 = 0; i2 < g.n2; ++i2) {
      const ScanCell& c = g.at(i1, i2);
      cells.push_back({{"i1", i1},
                       {"i2", i2},
                       {"param1", c.param1},
                       {"param2", c.param2},
                       {"max_abs_im", number_or_null(c.max_abs_im)},
                       {"min_ipr", number_or_null(c.min_ipr)},
                       {"max_ipr", number_or_null(c.max_ipr)},
                       {"re_min", number_or_null(c.re_min)},
                       {"re_max", number_or_null(c.re_max)},
                       {"lyapunov_min", number_or_null(c.lyapunov_min)},
                       {"lyapunov_max", number_or_null(c.lyapunov_max)},
                       {"lyapunov_sign", c.lyapunov_sign},
                       {"windings", c.windings},
                       {"label", c.label ? json(std::string(to_string(*c.label))) : json(nullptr)},
                       {"ipr_conflict", c.ipr_conflict},
                       {"error", c.error.empty() ? json(nullptr) : json(c.error)}});
    }
  }
  j["cells"] = std::move(cells);
  return j;
}

std::vector<std::string> heatmap_quantities(const PhaseGrid& g) {
  std::vector<std::string> q{"max_abs_im"};
  if (g.config.compute_iprs) q.push_back("min_ipr");
  if (g.config.spec.model != ModelId::M5) q.push_back("lyapunov_max");
  q.push_back("label");
  if (g.config.compute_winding) {
    q.push_back("w1");
    if (g.config.spec.model == ModelId::M4) q.push_back("w2");
  }
  return q;
}

double cell_quantity(const ScanCell& c, std::string_view q) {
  if (!c.error.empty()) return kNaN;
  if (q == "max_abs_im") return c.max_abs_im;
  if (q == "min_ipr") return c.min_ipr;
  if (q == "max_ipr") return c.max_ipr;
  if (q == "re_min") return c.re_min;
  if (q == "re_max") return c.re_max;
  if (q == "lyapunov_min") return c.lyapunov_min;
  if (q == "lyapunov_max") return c.lyapunov_max;
  if (q == "lyapunov_sign") return c.lyapunov_sign;
  if (q == "label") {
    if (!c.label) return kNaN;
    return *c.label == PhaseLabel::Extended ? 0.0 : *c.label == PhaseLabel::MobilityEdge ? 1.0 : 2.0;
  }
  if (q == "w1") return c.windings.size() > 0 ? c.windings[0] : kNaN;
  if (q == "w2") return c.windings.size() > 1 ? c.windings[1] : kNaN;
  throw Error(ErrorCode::InvalidParameter, "unknown heatmap quantity '" + std::string(q) + "'");
}

std::vector<Segment> boundary_segments(const PhaseGrid& g) {
  const ScanConfig& s = g.config;
  std::vector<Segment> out;
  if (g.n1 < 2 || g.n2 < 2) return out;

  if (s.spec.model == ModelId::M5) {
    // E_c against the spectral edges, sampled on the cell centres
    std::vector<double> fmax(size_t(g.n1) * g.n2), fmin(fmax.size());
    std::vector<double> xs(g.n1), ys(g.n2);
    for (int i = 0; i < g.n1; ++i) xs[i] = s.axis1.value(i);
    for (int j = 0; j < g.n2; ++j) ys[j] = s.axis2.value(j);
    for (int i = 0; i < g.n1; ++i) {
      for (int j = 0; j < g.n2; ++j) {
        const ScanCell& c = g.at(i, j);
        double ec = kNaN;
        if (c.error.empty()) {
          try {
            auto [spec, drive] = s.point(xs[i], ys[j]);
            ec = mobility_edge_m5(spec, drive);
          } catch (const Error&) {
          }
        }
        fmax[size_t(i) * g.n2 + j] = ec - c.re_max;
        fmin[size_t(i) * g.n2 + j] = ec - c.re_min;
      }
    }
    contour(fmax, g.n1, g.n2, xs, ys, out);
    contour(fmin, g.n1, g.n2, xs, ys, out);
    return out;
  }

  const int nx = 4 * (g.n1 - 1) + 1, ny = 4 * (g.n2 - 1) + 1;
  std::vector<double> xs(nx), ys(ny);
  for (int i = 0; i < nx; ++i) xs[i] = s.axis1.min + (s.axis1.max - s.axis1.min) * i / (nx - 1);
  for (int j = 0; j < ny; ++j) ys[j] = s.axis2.min + (s.axis2.max - s.axis2.min) * j / (ny - 1);
  const int n_funcs = s.spec.model == ModelId::M4 ? 2 : 1;
  for (int which = 0; which < n_funcs; ++which) {
    std::vector<double> f(size_t(nx) * ny, kNaN);
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        auto [spec, drive] = s.point(xs[i], ys[j]);
        const double jp = std::abs(effective_hopping(spec.J, drive.K_over_omega));
        const double v = std::abs(spec.V), gm = std::abs(spec.gamma);
        double val = kNaN;
        switch (spec.model) {
          case ModelId::M1: val = v - jp; break;
          case ModelId::M2: val = v * std::exp(gm) - 2.0 * jp; break;
          case ModelId::M3: val = v - 2.0 * jp * std::exp(gm); break;
          case ModelId::M4:
            try {
              const auto b = m4_boundaries(spec, drive);
              val = spec.gamma - (which == 0 ? b.gamma1 : b.gamma2);
            } catch (const Error&) {
            }
            break;
          case ModelId::M5: break;
        }
        f[size_t(i) * ny + j] = val;
      }
    }
    contour(f, nx, ny, xs, ys, out);
  }
  return out;
}

std::string render_heatmap_svg(const PhaseGrid& g, std::string_view quantity) {
  const ScanConfig& s = g.config;
  const double left = 80, top = 40, pw = 440, ph = 440, width = 660, height = 560;
  const double cw = pw / g.n1, chh = ph / g.n2;

  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const auto& c : g.cells) {
    const double v = cell_quantity(c, quantity);
    if (!std::isfinite(v)) continue;
    lo = any ? std::min(lo, v) : std::min(0.0, v);
    hi = any ? std::max(hi, v) : v;
    any = true;
  }
  if (!any || hi <= lo) hi = lo + 1.0;

  // parameter -> pixel; cells are centred on their parameter values
  const double h1 = g.n1 > 1 ? (s.axis1.max - s.axis1.min) / (g.n1 - 1) : 1.0;
  const double h2 = g.n2 > 1 ? (s.axis2.max - s.axis2.min) / (g.n2 - 1) : 1.0;
  const double x_lo = s.axis1.min - 0.5 * h1, x_hi = s.axis1.min + (g.n1 - 0.5) * h1;
  const double y_lo = s.axis2.min - 0.5 * h2, y_hi = s.axis2.min + (g.n2 - 0.5) * h2;
  auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double y) { return top + ph - (y - y_lo) / (y_hi - y_lo) * ph; };

  std::string o;
  o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(width, 0) + "\" height=\"" + fixed(height, 0) +
       "\" viewBox=\"0 0 " + fixed(width, 0) + " " + fixed(height, 0) + "\">\n";
  o += "<rect x=\"0\" y=\"0\" width=\"" + fixed(width, 0) + "\" height=\"" + fixed(height, 0) + "\" fill=\"white\"/>\n";
  o += "<text x=\"" + fixed(left + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
       xml_escape(std::string(to_string(s.spec.model)) + " " + std::string(quantity) + ", L = " +
                  std::to_string(s.lattice.L)) +
       "</text>\n";

  o += "<g shape-rendering=\"crispEdges\">\n";
  for (int i1 = 0; i1 < g.n1; ++i1) {
    for (int i2 = 0; i2 < g.n2; ++i2) {
      const double v = cell_quantity(g.at(i1, i2), quantity);
      const double x = left + i1 * cw, y = top + ph - (i2 + 1) * chh;
      o += "<rect x=\"" + fixed(x) + "\" y=\"" + fixed(y) + "\" width=\"" + fixed(cw + 0.01) + "\" height=\"" +
           fixed(chh + 0.01) + "\" fill=\"" + ramp_color((v - lo) / (hi - lo)) + "\"/>\n";
    }
  }
  o += "</g>\n";

  const auto segs = boundary_segments(g);
  if (!segs.empty()) {
    std::string d;
    for (const auto& sg : segs)
      d += "M" + fixed(px(sg.x0)) + " " + fixed(py(sg.y0)) + "L" + fixed(px(sg.x1)) + " " + fixed(py(sg.y1));
    o += "<path d=\"" + d + "\" fill=\"none\" stroke=\"white\" stroke-width=\"1.5\"/>\n";
  }

  o += "<rect x=\"" + fixed(left) + "\" y=\"" + fixed(top) + "\" width=\"" + fixed(pw) + "\" height=\"" + fixed(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t < 5; ++t) {
    const double xv = s.axis1.min + (s.axis1.max - s.axis1.min) * t / 4.0;
    const double yv = s.axis2.min + (s.axis2.max - s.axis2.min) * t / 4.0;
    const double X = px(xv), Y = py(yv);
    o += "<line x1=\"" + fixed(X) + "\" y1=\"" + fixed(top + ph) + "\" x2=\"" + fixed(X) + "\" y2=\"" +
         fixed(top + ph + 5) + "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + fixed(X) + "\" y=\"" + fixed(top + ph + 20) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + format_number(xv, 4) + "</text>\n";
    o += "<line x1=\"" + fixed(left - 5) + "\" y1=\"" + fixed(Y) + "\" x2=\"" + fixed(left) + "\" y2=\"" + fixed(Y) +
         "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + fixed(left - 8) + "\" y=\"" + fixed(Y + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + format_number(yv, 4) + "</text>\n";
  }
  o += "<text x=\"" + fixed(left + pw / 2) + "\" y=\"" + fixed(top + ph + 42) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
       xml_escape(to_string(s.axis1.parameter)) + "</text>\n";
  o += "<text x=\"20\" y=\"" + fixed(top + ph / 2) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 20 " +
       fixed(top + ph / 2) + ")\">" + xml_escape(to_string(s.axis2.parameter)) + "</text>\n";

  // colour bar
  const double bx = left + pw + 30, bw = 20;
  const int steps = 64;
  o += "<g shape-rendering=\"crispEdges\">\n";
  for (int k = 0; k < steps; ++k) {
    const double t0 = double(k) / steps;
    o += "<rect x=\"" + fixed(bx) + "\" y=\"" + fixed(top + ph * (1.0 - t0 - 1.0 / steps)) + "\" width=\"" + fixed(bw) +
         "\" height=\"" + fixed(ph / steps + 0.01) + "\" fill=\"" + ramp_color(t0 + 0.5 / steps) + "\"/>\n";
  }
  o += "</g>\n";
  o += "<rect x=\"" + fixed(bx) + "\" y=\"" + fixed(top) + "\" width=\"" + fixed(bw) + "\" height=\"" + fixed(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  o += "<text x=\"" + fixed(bx + bw + 5) + "\" y=\"" + fixed(top + 10) + "\" font-family=\"sans-serif\" font-size=\"11\">" +
       format_number(hi, 4) + "</text>\n";
  o += "<text x=\"" + fixed(bx + bw + 5) + "\" y=\"" + fixed(top + ph) + "\" font-family=\"sans-serif\" font-size=\"11\">" +
       format_number(lo, 4) + "</text>\n";
  o += "</svg>\n";
  return o;
}

json manifest_json(const RunManifest& m) {
  json j;
  j["schema_version"] = 1;
  j["tool"] = "floquet-qc";
  j["version"] = std::string(kToolVersion);
  j["command"] = m.command;
  j["config_digest"] = m.config_digest;
  j["config"] = m.config_text;
  j["wall_time_s"] = m.wall_time_s;
  j["outputs"] = m.outputs;
  j["warnings"] = m.warnings;
  return j;
}

}  // namespace fqc::cli
