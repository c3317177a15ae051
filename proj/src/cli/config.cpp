#include "fqc/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fqc::cli {

namespace {

std::string trim(std::string_view s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

bool valid_key(const std::string& k) {
  if (k.empty() || k.front() == '.' || k.back() == '.') return false;
  return std::all_of(k.begin(), k.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; });
}

std::string where(int line) { return "line " + std::to_string(line) + ": "; }

ConfigValue parse_value(std::string_view raw, int line) {
  std::string v = trim(raw);
  if (!v.empty() && v.front() == '"') {
    std::string out;
    size_t i = 1;
    for (; i < v.size() && v[i] != '"'; ++i) {
      if (v[i] == '\\' && i + 1 < v.size()) ++i;
      out += v[i];
    }
    if (i >= v.size()) throw ConfigError(where(line) + "unterminated string");
    const std::string rest = trim(std::string_view(v).substr(i + 1));
    if (!rest.empty() && rest.front() != '#') throw ConfigError(where(line) + "unexpected text after string");
    return {out, true};
  }
  const auto hash = v.find('#');
  if (hash != std::string::npos) v = trim(std::string_view(v).substr(0, hash));
  if (v.empty()) throw ConfigError(where(line) + "missing value");
  return {v, false};
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

Config Config::parse(std::string_view text) {
  Config c;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (t.front() == '[') {
      const auto close = t.find(']');
      if (close == std::string::npos) throw ConfigError(where(no) + "unterminated section header");
      section = trim(std::string_view(t).substr(1, close - 1));
      if (!section.empty() && !valid_key(section)) throw ConfigError(where(no) + "bad section name '" + section + "'");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(where(no) + "expected key = value");
    std::string key = trim(std::string_view(t).substr(0, eq));
    if (!valid_key(key)) throw ConfigError(where(no) + "bad key '" + key + "'");
    if (!section.empty()) key = section + "." + key;
    if (c.entries_.count(key)) throw ConfigError(where(no) + "duplicate key '" + key + "'");
    c.entries_[key] = parse_value(std::string_view(t).substr(eq + 1), no);
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

const ConfigValue& Config::require(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
  return it->second;
}

std::string Config::get_string(const std::string& key) const { return require(key).text; }

double Config::get_double(const std::string& key) const {
  const auto& v = require(key);
  double x = 0;
  const char* b = v.text.data();
  const char* e = b + v.text.size();
  auto [p, ec] = std::from_chars(b, e, x);
  if (v.quoted || ec != std::errc() || p != e || !std::isfinite(x))
    throw ConfigError("key '" + key + "' needs a finite number, got '" + v.text + "'");
  return x;
}

long long Config::get_int(const std::string& key) const {
  const auto& v = require(key);
  long long x = 0;
  const char* b = v.text.data();
  const char* e = b + v.text.size();
  auto [p, ec] = std::from_chars(b, e, x);
  if (v.quoted || ec != std::errc() || p != e)
    throw ConfigError("key '" + key + "' needs an integer, got '" + v.text + "'");
  return x;
}

bool Config::get_bool(const std::string& key) const {
  const auto& v = require(key);
  if (!v.quoted && v.text == "true") return true;
  if (!v.quoted && v.text == "false") return false;
  throw ConfigError("key '" + key + "' needs true or false, got '" + v.text + "'");
}

std::string Config::string_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}
double Config::double_or(const std::string& key, double fallback) const { return has(key) ? get_double(key) : fallback; }
long long Config::int_or(const std::string& key, long long fallback) const { return has(key) ? get_int(key) : fallback; }
bool Config::bool_or(const std::string& key, bool fallback) const { return has(key) ? get_bool(key) : fallback; }

std::string Config::serialize() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + (v.quoted ? quote(v.text) : v.text) + "\n";
  return out;
}

std::vector<std::string> Config::unknown_keys(const std::vector<std::string>& known) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_)
    if (std::find(known.begin(), known.end(), k) == known.end()) out.push_back(k);
  return out;
}

std::pair<std::int64_t, std::int64_t> parse_fraction(std::string_view s) {
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) throw ConfigError("alpha must be a fraction \"p/q\", got '" + std::string(s) + "'");
  auto num = trim(s.substr(0, slash)), den = trim(s.substr(slash + 1));
  std::int64_t p = 0, q = 0;
  auto r1 = std::from_chars(num.data(), num.data() + num.size(), p);
  auto r2 = std::from_chars(den.data(), den.data() + den.size(), q);
  if (r1.ec != std::errc() || r1.ptr != num.data() + num.size() || r2.ec != std::errc() ||
      r2.ptr != den.data() + den.size())
    throw ConfigError("alpha must be a fraction \"p/q\", got '" + std::string(s) + "'");
  return {p, q};
}

Boundary parse_boundary(std::string_view s) {
  const std::string t = trim(s);
  if (t == "open") return Boundary::open();
  if (t == "periodic") return Boundary::periodic();
  for (auto [name, kind] : {std::pair{"twisted:", BoundaryKind::Twisted}, std::pair{"flux:", BoundaryKind::Flux}}) {
    const std::string prefix = name;
    if (t.rfind(prefix, 0) == 0) {
      const std::string num = t.substr(prefix.size());
      double th = 0;
      auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), th);
      if (ec != std::errc() || p != num.data() + num.size()) break;
      return {kind, th};
    }
  }
  throw ConfigError("boundary must be open, periodic, twisted:<theta> or flux:<theta>, got '" + t + "'");
}

std::string format_boundary(const Boundary& b) {
  char buf[64];
  switch (b.kind) {
    case BoundaryKind::Open: return "open";
    case BoundaryKind::Periodic: return "periodic";
    case BoundaryKind::Twisted: {
      auto r = std::to_chars(buf, buf + sizeof buf, b.theta);
      return "twisted:" + std::string(buf, r.ptr);
    }
    case BoundaryKind::Flux: {
      auto r = std::to_chars(buf, buf + sizeof buf, b.theta);
      return "flux:" + std::string(buf, r.ptr);
    }
  }
  return "periodic";
}

ModelSpec model_from_config(const Config& c) {
  std::string id;
  if (c.has("model.id"))
    id = c.get_string("model.id");
  else if (c.has("model"))
    id = c.get_string("model");
  else
    throw ConfigError("missing required key 'model'");
  const auto m = parse_model_id(id);
  if (!m) throw ConfigError("unknown model '" + id + "' (expected M1..M5)");
  ModelSpec s;
  s.model = *m;
  s.J = c.double_or("model.J", 1.0);
  s.V = c.double_or("model.V", 0.0);
  s.gamma = c.double_or("model.gamma", 0.0);
  s.eta = c.double_or("model.eta", 0.0);
  return s;
}

LatticeConfig lattice_from_config(const Config& c) {
  LatticeConfig lat;
  lat.boundary = parse_boundary(c.string_or("lattice.boundary", "periodic"));
  if (c.has("lattice.L")) {
    const long long L = c.get_int("lattice.L");
    if (L < 1 || L > 100000) throw ConfigError("lattice.L out of range");
    lat.L = int(L);
    if (!c.has("lattice.alpha")) {
      try {
        const Boundary b = lat.boundary;
        lat = LatticeConfig::fibonacci(lat.L, b);
      } catch (const Error&) {
        throw ConfigError("lattice.alpha is required when L is not a Fibonacci number");
      }
    }
  }
  if (c.has("lattice.alpha")) std::tie(lat.alpha_num, lat.alpha_den) = parse_fraction(c.get_string("lattice.alpha"));
  return lat;
}

DriveConfig drive_from_config(const Config& c) {
  DriveConfig d;
  d.K_over_omega = c.double_or("drive.K_over_omega", 0.0);
  if (c.has("drive.omega")) d.omega = c.get_double("drive.omega");
  return d;
}

namespace {

ScanAxis axis_from_config(const Config& c, const std::string& name) {
  ScanAxis a;
  const std::string p = c.get_string("scan." + name + ".param");
  const auto sp = parse_scan_parameter(p);
  if (!sp) throw ConfigError("scan." + name + ".param must be V, gamma, eta or K_over_omega, got '" + p + "'");
  a.parameter = *sp;
  a.min = c.get_double("scan." + name + ".min");
  a.max = c.get_double("scan." + name + ".max");
  const long long n = c.get_int("scan." + name + ".n");
  if (n < 1 || n > 10000) throw ConfigError("scan." + name + ".n out of range");
  a.n_points = int(n);
  return a;
}

}  // namespace

ScanConfig scan_from_config(const Config& c) {
  ScanConfig s;
  s.spec = model_from_config(c);
  s.lattice = lattice_from_config(c);
  s.drive = drive_from_config(c);
  s.axis1 = axis_from_config(c, "axis1");
  s.axis2 = axis_from_config(c, "axis2");
  s.compute_iprs = c.bool_or("scan.compute_iprs", true);
  s.compute_winding = c.bool_or("scan.compute_winding", false);
  s.n_theta = int(c.int_or("scan.n_theta", 256));
  s.winding_base = {c.double_or("scan.base_re", 0.0), c.double_or("scan.base_im", 0.0)};
  if (c.has("scan.offset_im")) s.winding_offset_im = c.get_double("scan.offset_im");
  if (c.has("scan.offset_re")) s.winding_offset_re = c.get_double("scan.offset_re");
  s.ipr_threshold_factor = c.double_or("scan.ipr_threshold_factor", 10.0);
  const std::string prec = c.string_or("scan.precision", "double");
  if (prec == "double")
    s.precision = Precision::Double;
  else if (prec == "extended")
    s.precision = Precision::Extended;
  else
    throw ConfigError("scan.precision must be double or extended");
  return s;
}

std::string config_digest(const Config& c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(c.serialize())));
  return buf;
}

}  // namespace fqc::cli
