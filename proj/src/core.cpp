#include "fqc/core.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "fqc/numerics.hpp"

namespace fqc {

std::string_view to_string(ModelId m) {
  switch (m) {
    case ModelId::M1: return "M1";
    case ModelId::M2: return "M2";
    case ModelId::M3: return "M3";
    case ModelId::M4: return "M4";
    case ModelId::M5: return "M5";
  }
  return "?";
}

std::optional<ModelId> parse_model_id(std::string_view s) {
  if (s == "M1") return ModelId::M1;
  if (s == "M2") return ModelId::M2;
  if (s == "M3") return ModelId::M3;
  if (s == "M4") return ModelId::M4;
  if (s == "M5") return ModelId::M5;
  return std::nullopt;
}

void ModelSpec::validate() const {
  if (!std::isfinite(J) || !std::isfinite(V) || !std::isfinite(gamma) || !std::isfinite(eta))
    throw Error(ErrorCode::InvalidParameter, "model parameters must be finite");
  const bool uses_gamma = model == ModelId::M2 || model == ModelId::M3 || model == ModelId::M4;
  if (!uses_gamma && gamma != 0.0)
    throw Error(ErrorCode::InvalidParameter,
                "gamma is not a parameter of " + std::string(to_string(model)));
  if (model != ModelId::M5 && eta != 0.0)
    throw Error(ErrorCode::InvalidParameter,
                "eta is not a parameter of " + std::string(to_string(model)));
  if (model == ModelId::M5 && (!(eta > 0.0) || eta == 1.0))
    throw Error(ErrorCode::InvalidEta, "M5 needs eta > 0 and eta != 1, got " + std::to_string(eta));
}

std::vector<std::string> ModelSpec::warnings() const {
  std::vector<std::string> w;
  if (J == 0.0) w.push_back("J = 0: Hamiltonian is diagonal");
  return w;
}

void LatticeConfig::validate() const {
  if (L < 1) throw Error(ErrorCode::InvalidParameter, "L must be positive");
  if (alpha_num <= 0 || alpha_den <= 0 || alpha_num >= alpha_den)
    throw Error(ErrorCode::InvalidParameter, "alpha = p/q needs 0 < p < q");
  if (std::gcd(alpha_num, alpha_den) != 1)
    throw Error(ErrorCode::InvalidParameter, "alpha = p/q needs gcd(p, q) = 1");
  if (boundary.closed() && alpha_den != L)
    throw Error(ErrorCode::InvalidParameter,
                "closed boundaries need q = L (q = " + std::to_string(alpha_den) +
                    ", L = " + std::to_string(L) + ")");
  if (!std::isfinite(boundary.theta)) throw Error(ErrorCode::InvalidParameter, "theta must be finite");
}

LatticeConfig LatticeConfig::fibonacci(int L, Boundary b) {
  std::int64_t prev = 1, cur = 2;
  while (cur < L) {
    std::int64_t next = prev + cur;
    prev = cur;
    cur = next;
  }
  if (cur != L) throw Error(ErrorCode::InvalidParameter, std::to_string(L) + " is not a Fibonacci number > 2");
  return LatticeConfig{L, prev, cur, b};
}

void DriveConfig::validate() const {
  if (!std::isfinite(K_over_omega) || K_over_omega < 0.0)
    throw Error(ErrorCode::InvalidParameter, "K_over_omega must be finite and >= 0");
  if (omega && !(*omega > 0.0 && std::isfinite(*omega)))
    throw Error(ErrorCode::InvalidParameter, "omega must be > 0");
}

double dressing_factor(double k_over_w) {
  const double j0 = bessel_j0(k_over_w);
  return std::fabs(j0) < kZeroDressing ? 0.0 : j0;
}

double effective_hopping(double J, double k_over_w) { return J * dressing_factor(k_over_w); }

double quasi_phase(const LatticeConfig& lattice, std::int64_t n) {
  const std::int64_t q = lattice.alpha_den;
  std::int64_t k = ((lattice.alpha_num % q) * (n % q)) % q;
  if (k < 0) k += q;
  if (2 * k > q) k -= q;
  return 2.0 * std::numbers::pi * double(k) / double(q);
}

Complex onsite_potential(const ModelSpec& spec, const LatticeConfig& lattice, std::int64_t n,
                         double shift) {
  const double V = spec.V;
  const double g = spec.gamma;
  switch (spec.model) {
    case ModelId::M1: {
      const double x = quasi_phase(lattice, n) + shift;
      return {V * std::cos(x), -V * std::sin(x)};
    }
    case ModelId::M2: {
      const double x = quasi_phase(lattice, n) + shift;
      return {V * std::cos(x) * std::cosh(g), -V * std::sin(x) * std::sinh(g)};
    }
    case ModelId::M3: {
      const double x = quasi_phase(lattice, n) + shift;
      return {V * std::cos(x), 0.0};
    }
    case ModelId::M4: {
      // tan(x + ig) = (sin 2x + i sinh 2g) / (cos 2x + cosh 2g)
      const double x = 0.5 * quasi_phase(lattice, n) + shift;
      const double den = std::cos(2 * x) + std::cosh(2 * g);  // 2|cos(x + ig)|^2
      if (0.5 * den < 1e-24)
        throw Error(ErrorCode::SingularPotential,
                    "tangent pole at site " + std::to_string(n) + " (gamma = " + std::to_string(g) + ")");
      return {V * std::sin(2 * x) / den, V * std::sinh(2 * g) / den};
    }
    case ModelId::M5: {
      if (!(spec.eta > 0.0) || spec.eta == 1.0)
        throw Error(ErrorCode::InvalidEta, "M5 needs eta > 0 and eta != 1");
      const double x = quasi_phase(lattice, n) + shift;
      const double a = 1.0 - spec.eta * std::cos(x);
      const double b = -spec.eta * std::sin(x);
      const double m2 = a * a + b * b;
      if (m2 < 1e-24)
        throw Error(ErrorCode::SingularPotential, "1 - eta e^{i phi} vanishes at site " + std::to_string(n));
      return {V * a / m2, -V * b / m2};
    }
  }
  throw Error(ErrorCode::UnsupportedModel, "unknown model");
}

}  // namespace fqc
