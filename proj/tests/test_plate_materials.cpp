#include <doctest.h>

#include <cmath>
#include <random>

#include "fpw/errors.hpp"
#include "fpw/plate_materials.hpp"
#include "reference_stack.hpp"

using namespace fpw;
using fpw::testing::reference_layers;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::vector<MaterialLayer> random_stack(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 6);
  std::uniform_real_distribution<double> h(0.05e-6, 5e-6), e(1e9, 5e11), nu(0.0, 0.49),
      rho(500.0, 20000.0);
  std::vector<MaterialLayer> out;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) out.push_back({"l" + std::to_string(i), h(rng), e(rng), nu(rng), rho(rng)});
  return out;
}

}  // namespace

TEST_CASE("effective Young's modulus") {
  CHECK(rel(effective_young_modulus(reference_layers()), 2.42e11) < 0.005);

  const MaterialLayer single{"a", 1e-6, 1.7e11, 0.3, 2000.0};
  CHECK(effective_young_modulus(std::vector{single}) == doctest::Approx(1.7e11).epsilon(1e-15));

  const std::vector<MaterialLayer> equal{{"a", 1e-6, 1e11, 0.2, 1000.0}, {"b", 1e-6, 3e11, 0.3, 1000.0}};
  CHECK(effective_young_modulus(equal) == doctest::Approx(2e11).epsilon(1e-15));

  CHECK_THROWS_AS(effective_young_modulus(std::vector<MaterialLayer>{}), InvalidInput);
}

TEST_CASE("effective Poisson ratio") {
  CHECK(rel(effective_poisson(reference_layers()), 0.26) < 0.005);
  const MaterialLayer single{"a", 2e-6, 1e11, 0.31, 2000.0};
  CHECK(effective_poisson(std::vector{single}) == doctest::Approx(0.31).epsilon(1e-15));
  const std::vector<MaterialLayer> equal{{"a", 1e-6, 1e11, 0.2, 1000.0}, {"b", 1e-6, 3e11, 0.3, 1000.0}};
  CHECK(effective_poisson(equal) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(effective_poisson(std::vector<MaterialLayer>{}), InvalidInput);
}

TEST_CASE("mass per area") {
  using fpw::testing::pzt_lsmo;
  using fpw::testing::silicon_nitride;
  CHECK(mass_per_area(std::vector{silicon_nitride()}) == doctest::Approx(0.00372).epsilon(1e-12));
  CHECK(mass_per_area(std::vector{pzt_lsmo()}) == doctest::Approx(0.00836).epsilon(1e-12));
  // Sum of the two published rows, not the 0.1176 quoted for the plate.
  CHECK(mass_per_area(reference_layers()) == doctest::Approx(0.01208).epsilon(1e-12));
  CHECK_THROWS_AS(mass_per_area(std::vector<MaterialLayer>{}), InvalidInput);
}

TEST_CASE("plate modulus") {
  CHECK(rel(plate_modulus(2.42e11, 0.26), 2.6e11) < 0.005);
  CHECK(plate_modulus(2.42e11, 0.26) == doctest::Approx(2.42e11 / (1.0 - 0.0676)).epsilon(1e-14));
  CHECK(plate_modulus(3.1e11, 0.0) == 3.1e11);
  CHECK(plate_modulus(1.0, 0.5) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(plate_modulus(1.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(plate_modulus(1.0, 1.5), InvalidInput);
}

TEST_CASE("bending term") {
  CHECK(rel(bending_term(2.596e11, 2.3e-6, 40e-6), 6497.93) < 0.003);
  const double base = bending_term(2.596e11, 2.3e-6, 40e-6);
  CHECK(bending_term(2.596e11, 2.3e-6, 80e-6) == doctest::Approx(base / 4.0).epsilon(1e-14));
  CHECK(bending_term(2.596e11, 4.6e-6, 40e-6) == doctest::Approx(base * 8.0).epsilon(1e-14));
  CHECK(flexural_rigidity(12.0, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(bending_term(2.596e11, 0.0, 40e-6), InvalidInput);
  CHECK_THROWS_AS(bending_term(2.596e11, 2.3e-6, 0.0), InvalidInput);
  CHECK_THROWS_AS(bending_term(2.596e11, -1e-6, 40e-6), InvalidInput);
}

TEST_CASE("layer invariants") {
  MaterialLayer ok{"x", 1e-6, 1e11, 0.3, 1000.0};
  CHECK_NOTHROW(ok.validate());
  auto bad = ok;
  bad.thickness = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  bad = ok;
  bad.young_modulus = -1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  bad = ok;
  bad.density = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  bad = ok;
  bad.poisson_ratio = 0.5;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  bad.poisson_ratio = -0.1;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  CHECK_THROWS_AS(CompositePlate({}), InvalidInput);
}

TEST_CASE("composite plate keeps computed and overridden values apart") {
  const CompositePlate computed(reference_layers());
  CHECK(computed.total_thickness() == doctest::Approx(2.3e-6).epsilon(1e-14));
  CHECK(computed.mass_per_area() == doctest::Approx(0.01208).epsilon(1e-12));
  CHECK_FALSE(computed.overrides().any());

  const CompositePlate pinned = fpw::testing::reference_plate();
  CHECK(pinned.mass_per_area() == 0.1176);
  CHECK(pinned.computed_mass_per_area() == doctest::Approx(0.01208).epsilon(1e-12));
  CHECK(pinned.bending_term(40e-6) == computed.bending_term(40e-6));

  // Overrides chain: a pinned E' feeds B, a pinned B wins outright.
  PlateOverrides o;
  o.plate_modulus = 2.6e11;
  const CompositePlate by_modulus(reference_layers(), o);
  CHECK(by_modulus.bending_term(40e-6) ==
        doctest::Approx(bending_term(2.6e11, 2.3e-6, 40e-6)).epsilon(1e-14));
  o.bending_term = 6497.93;
  CHECK(CompositePlate(reference_layers(), o).bending_term(40e-6) == 6497.93);
  CHECK(CompositePlate(reference_layers(), o).computed_bending_term(40e-6) ==
        doctest::Approx(computed.bending_term(40e-6)).epsilon(1e-15));

  PlateOverrides bad;
  bad.mass_per_area = -1.0;
  CHECK_THROWS_AS(CompositePlate(reference_layers(), bad), InvalidInput);
}

TEST_CASE("property: effective E and nu are bracketed by layer extremes") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 500; ++trial) {
    const auto stack = random_stack(rng);
    double e_lo = 1e300, e_hi = 0.0, n_lo = 1.0, n_hi = 0.0;
    for (const auto& l : stack) {
      e_lo = std::min(e_lo, l.young_modulus);
      e_hi = std::max(e_hi, l.young_modulus);
      n_lo = std::min(n_lo, l.poisson_ratio);
      n_hi = std::max(n_hi, l.poisson_ratio);
    }
    const double e = effective_young_modulus(stack);
    const double nu = effective_poisson(stack);
    CHECK(e >= e_lo * (1 - 1e-14));
    CHECK(e <= e_hi * (1 + 1e-14));
    CHECK(nu >= n_lo - 1e-15);
    CHECK(nu <= n_hi + 1e-15);
    CHECK(CompositePlate(stack).mass_per_area() > 0.0);
  }
}

TEST_CASE("property: mass per area is additive over concatenated stacks") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = random_stack(rng);
    const auto b = random_stack(rng);
    const double ma = mass_per_area(a);
    const double mb = mass_per_area(b);
    a.insert(a.end(), b.begin(), b.end());
    CHECK(mass_per_area(a) == doctest::Approx(ma + mb).epsilon(1e-13));
  }
}

TEST_CASE("property: bending term homogeneity") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ep(1e10, 5e11), h(0.1e-6, 5e-6), lam(5e-6, 200e-6),
      c(0.1, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double e = ep(rng), hh = h(rng), l = lam(rng), s = c(rng);
    const double b = bending_term(e, hh, l);
    CHECK(bending_term(s * e, hh, l) == doctest::Approx(s * b).epsilon(1e-12));
    CHECK(bending_term(e, s * hh, l) == doctest::Approx(s * s * s * b).epsilon(1e-12));
    CHECK(bending_term(e, hh, s * l) == doctest::Approx(b / (s * s)).epsilon(1e-12));
    CHECK(bending_term(e, hh, l) == b);
  }
}
