#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fqc/error.hpp"

namespace fqc {

using Complex = std::complex<double>;

enum class ModelId { M1, M2, M3, M4, M5 };

std::string_view to_string(ModelId m);
std::optional<ModelId> parse_model_id(std::string_view s);

struct ModelSpec {
  ModelId model = ModelId::M1;
  double J = 1.0;
  double V = 0.0;
  double gamma = 0.0;
  double eta = 0.0;

  /// Throws InvalidEta / InvalidParameter. Unused fields must be zero.
  void validate() const;
  /// Non-fatal remarks, e.g. J = 0 gives a diagonal matrix.
  std::vector<std::string> warnings() const;
};

// Twisted follows the per-model twist convention used for windings.
// Flux threads a phase theta through the ring on the hopping bond L -> 1
// for every model; generic theta lifts the k <-> -k degeneracy of the
// commensurate periodic ring.
enum class BoundaryKind { Open, Periodic, Twisted, Flux };

struct Boundary {
  BoundaryKind kind = BoundaryKind::Periodic;
  double theta = 0.0;

  static Boundary open() { return {BoundaryKind::Open, 0.0}; }
  static Boundary periodic() { return {BoundaryKind::Periodic, 0.0}; }
  static Boundary twisted(double t) { return {BoundaryKind::Twisted, t}; }
  static Boundary flux(double t) { return {BoundaryKind::Flux, t}; }
  bool closed() const { return kind != BoundaryKind::Open; }
};

struct LatticeConfig {
  int L = 89;
  std::int64_t alpha_num = 55;
  std::int64_t alpha_den = 89;
  Boundary boundary = Boundary::periodic();

  double alpha() const { return double(alpha_num) / double(alpha_den); }
  void validate() const;

  /// Fibonacci approximant F(m-1)/F(m) with L = F(m); m counted from F(1) = F(2) = 1.
  static LatticeConfig fibonacci(int L, Boundary b = Boundary::periodic());
};

struct DriveConfig {
  double K_over_omega = 0.0;
  std::optional<double> omega;

  void validate() const;
};

/// J0 values this small are below the accuracy of the Bessel routine and sit
/// within a few ulps of a zero; the dressing is then exactly zero.
constexpr double kZeroDressing = 1e-15;
double dressing_factor(double k_over_w);

double effective_hopping(double J, double k_over_w);

/// Phase 2*pi*alpha*n reduced exactly: (p*n mod q) is mapped into (-q/2, q/2]
/// so that sites n and -n give angles of exactly opposite sign.
double quasi_phase(const LatticeConfig& lattice, std::int64_t n);

/// Onsite potential V_n, n = 1..L. `shift` is added to the model's phase
/// argument (2*pi*alpha*n, or pi*alpha*n for M4).
Complex onsite_potential(const ModelSpec& spec, const LatticeConfig& lattice, std::int64_t n,
                         double shift = 0.0);

}  // namespace fqc
