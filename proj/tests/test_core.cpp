#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fqc/core.hpp"
#include "fqc/numerics.hpp"

using namespace fqc;
using doctest::Approx;

namespace {

// Plain double power series, independent of the library implementation.
double j0_oracle(double x) {
  double term = 1, sum = 1;
  for (int k = 1; k <= 30; ++k) {
    term *= -(x * x / 4) / (double(k) * k);
    sum += term;
  }
  return sum;
}

ModelSpec model(ModelId id, double J, double V, double g = 0, double eta = 0) { return {id, J, V, g, eta}; }

}  // namespace

TEST_CASE("effective hopping values") {
  CHECK(effective_hopping(1, 0) == Approx(1.0).epsilon(1e-15));
  CHECK(std::fabs(effective_hopping(1, 2.404825557695773)) < 1e-12);
  // within ulps of the zero the dressing is exactly zero
  CHECK(effective_hopping(1, 2.404825557695773) == 0.0);
  CHECK(dressing_factor(2.404825557695773 + 1e-12) != 0.0);
  CHECK(dressing_factor(1.0) == bessel_j0(1.0));
  CHECK(effective_hopping(2, 1) == Approx(1.5303953731159331).epsilon(1e-14));
  CHECK(effective_hopping(2, 1) == Approx(2 * j0_oracle(1)).epsilon(1e-14));
}

TEST_CASE("effective hopping is even in K/omega and linear in J") {
  for (double x : {0.1, 0.7, 1.9, 3.3, 5.2, 7.9}) {
    CHECK(effective_hopping(1.3, x) == effective_hopping(1.3, -x));
    CHECK(effective_hopping(2.6, x) == Approx(2 * effective_hopping(1.3, x)).epsilon(1e-14));
    CHECK(effective_hopping(-1.3, x) == -effective_hopping(1.3, x));
  }
}

TEST_CASE("onsite potential examples") {
  LatticeConfig lat{89, 55, 89, Boundary::periodic()};
  // n = L gives 2 pi alpha n = 0 mod 2 pi
  auto v5 = onsite_potential(model(ModelId::M5, 1, 1, 0, 0.5), lat, 89);
  CHECK(v5.real() == Approx(2.0).epsilon(1e-15));
  CHECK(std::fabs(v5.imag()) < 1e-15);

  auto v4 = onsite_potential(model(ModelId::M4, 1, 1, 0.5), lat, 89);
  CHECK(std::fabs(v4.real()) < 1e-15);
  CHECK(v4.imag() == Approx(0.46211715726).epsilon(1e-10));
  CHECK(v4.imag() == Approx(std::tanh(0.5)).epsilon(1e-15));

  LatticeConfig third{3, 2, 3, Boundary::open()};
  auto v1 = onsite_potential(model(ModelId::M1, 1, 1), third, 1);
  CHECK(v1.real() == Approx(-0.5).epsilon(1e-12));
  CHECK(v1.imag() == Approx(0.8660254038).epsilon(1e-10));
}

TEST_CASE("onsite potential agrees with direct complex evaluation") {
  LatticeConfig lat{89, 55, 89, Boundary::periodic()};
  const double a = 55.0 / 89.0, pi = std::numbers::pi;
  const Complex I(0, 1);
  for (int n = 1; n <= 89; ++n) {
    const double x = 2 * pi * a * n;
    CHECK(std::abs(onsite_potential(model(ModelId::M1, 1, 0.7), lat, n) - 0.7 * std::exp(-I * x)) < 1e-12);
    CHECK(std::abs(onsite_potential(model(ModelId::M2, 1, 0.7, 0.3), lat, n) - 0.7 * std::cos(x + I * 0.3)) < 1e-12);
    CHECK(std::abs(onsite_potential(model(ModelId::M3, 1, 0.7, 0.3), lat, n) - 0.7 * std::cos(x)) < 1e-12);
    CHECK(std::abs(onsite_potential(model(ModelId::M4, 1, 0.7, 0.3), lat, n) - 0.7 * std::tan(x / 2 + I * 0.3)) < 1e-11);
    CHECK(std::abs(onsite_potential(model(ModelId::M5, 1, 0.7, 0, 0.4), lat, n) -
                   0.7 / (1.0 - 0.4 * std::exp(I * x))) < 1e-12);
  }
}

TEST_CASE("PT symmetry of potentials: V_n = conj(V_-n) on every site") {
  LatticeConfig lat{144, 89, 144, Boundary::periodic()};
  const ModelSpec specs[] = {model(ModelId::M1, 1, 1.3), model(ModelId::M2, 1, 1.3, 0.4),
                             model(ModelId::M5, 1, 1.3, 0, 0.6)};
  for (const auto& s : specs) {
    for (int n = 1; n <= 144; ++n) {
      const int m = (144 - n) % 144 == 0 ? 144 : 144 - n;
      CHECK(std::abs(onsite_potential(s, lat, n) - std::conj(onsite_potential(s, lat, m))) <= 1e-14);
    }
  }
}

TEST_CASE("M4 tangent potential is odd under n -> -n up to conjugation") {
  // tan(-x + ig) = -conj(tan(x + ig))
  LatticeConfig lat{144, 89, 144, Boundary::periodic()};
  const auto s = model(ModelId::M4, 1, 1.3, 0.4);
  for (int n = 1; n <= 144; ++n) {
    const int m = n == 144 ? 144 : 144 - n;
    CHECK(std::abs(onsite_potential(s, lat, n) + std::conj(onsite_potential(s, lat, m))) <= 1e-14);
  }
}

TEST_CASE("potentials are periodic with period L when q = L") {
  LatticeConfig lat{89, 55, 89, Boundary::periodic()};
  for (auto s : {model(ModelId::M1, 1, 1), model(ModelId::M2, 1, 1, 0.2), model(ModelId::M3, 1, 1, 0.2),
                 model(ModelId::M4, 1, 1, 0.2), model(ModelId::M5, 1, 1, 0, 0.3)}) {
    for (int n = 1; n <= 89; ++n) {
      const Complex a = onsite_potential(s, lat, n), b = onsite_potential(s, lat, n + 89);
      CHECK(std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST_CASE("singular potentials are rejected") {
  // alpha = 1/2: pi*alpha*n = pi/2 at n = 1, a tangent pole when gamma = 0
  LatticeConfig lat{4, 1, 2, Boundary::open()};
  CHECK_THROWS_AS(onsite_potential(model(ModelId::M4, 1, 1, 0.0), lat, 1), Error);
  try {
    onsite_potential(model(ModelId::M4, 1, 1, 0.0), lat, 1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularPotential);
  }
  CHECK_NOTHROW(onsite_potential(model(ModelId::M4, 1, 1, 0.1), lat, 1));
}

TEST_CASE("model and lattice validation") {
  CHECK_THROWS_AS(model(ModelId::M5, 1, 1, 0, 1.0).validate(), Error);
  try {
    model(ModelId::M5, 1, 1, 0, 1.0).validate();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidEta);
    CHECK(std::string(e.what()).find("InvalidEta") != std::string::npos);
  }
  CHECK_THROWS_AS(model(ModelId::M5, 1, 1, 0, -0.2).validate(), Error);
  CHECK_THROWS_AS(model(ModelId::M1, 1, 1, 0, 0.3).validate(), Error);
  CHECK_THROWS_AS(model(ModelId::M1, 1, 1, 0.3).validate(), Error);
  CHECK_NOTHROW(model(ModelId::M5, 1, 1, 0, 1.5).validate());
  CHECK(model(ModelId::M2, 0, 1).warnings().size() == 1);

  CHECK_THROWS_AS((LatticeConfig{89, 34, 89 * 2, Boundary::periodic()}.validate()), Error);
  CHECK_THROWS_AS((LatticeConfig{89, 2, 4, Boundary::open()}.validate()), Error);
  CHECK_THROWS_AS((LatticeConfig{89, 5, 3, Boundary::open()}.validate()), Error);
  CHECK_THROWS_AS((LatticeConfig{100, 55, 89, Boundary::periodic()}.validate()), Error);
  CHECK_NOTHROW((LatticeConfig{100, 55, 89, Boundary::open()}.validate()));

  auto f = LatticeConfig::fibonacci(610);
  CHECK(f.alpha_num == 377);
  CHECK(f.alpha_den == 610);
  CHECK(LatticeConfig::fibonacci(3).alpha_num == 2);
  CHECK_THROWS_AS(LatticeConfig::fibonacci(100), Error);

  CHECK_THROWS_AS((DriveConfig{-1.0, std::nullopt}.validate()), Error);
  CHECK_THROWS_AS((DriveConfig{1.0, 0.0}.validate()), Error);
}
