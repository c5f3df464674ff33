#include "pauli_scft/fields.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace pscft;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double pi = std::numbers::pi;

Eigen::VectorXd slater_density(const RadialGrid& g, double zeta, double electrons) {
  return electrons * std::pow(zeta, 3) / pi * (-2.0 * zeta * g.nodes.array()).exp();
}
}  // namespace

TEST_CASE("Pauli strength from the Thomas-Fermi constant", "[fields]") {
  CHECK_THAT(thomas_fermi_c0(), WithinAbs(0.3 * std::pow(3.0 * pi * pi, 2.0 / 3.0), 1e-15));
  CHECK(std::round(pauli_strength() * 1e6) / 1e6 == 5.742468);
  CHECK(pauli_strength() == 2.0 * thomas_fermi_c0());
}

TEST_CASE("Fermi-Amaldi factor", "[fields]") {
  CHECK(fermi_amaldi_factor(1) == 0.0);
  CHECK(fermi_amaldi_factor(2) == 0.5);
  CHECK_THAT(fermi_amaldi_factor(10), WithinRel(0.9, 1e-15));
  CHECK_THROWS_AS(fermi_amaldi_factor(0), std::invalid_argument);
}

TEST_CASE("external field and its closed-form coefficients", "[fields]") {
  const Discretization d(12.0, 60);
  const Eigen::VectorXd w = external_field(3, d.grid);
  CHECK_THAT(w[0] * d.grid.nodes[0], WithinRel(-3.0, 1e-15));
  const CoeffVector closed = external_field_coeffs(3, d.basis);
  const CoeffVector quad = d.project(w);
  CHECK((closed - quad).cwiseAbs().maxCoeff() < 1e-10 * closed.cwiseAbs().maxCoeff());
  // even modes vanish
  for (int n = 1; n < 60; n += 2) CHECK(closed[n] == 0.0);
  CHECK_THROWS_AS(external_field(-1, d.grid), std::invalid_argument);
}

TEST_CASE("Hartree potential of a uniform ball obeys Gauss's law", "[fields]") {
  // panel edges fall on r = a so the density jump is integrated exactly
  const double radius = 4.0;
  const double a = 2.0;
  const double q = 3.0;
  const RadialGrid g = make_grid(radius, 256);
  const double n0 = q / (4.0 / 3.0 * pi * a * a * a);
  Eigen::VectorXd n = (g.nodes.array() < a).select(n0, Eigen::VectorXd::Zero(g.size()));
  const Eigen::VectorXd v = hartree_potential(g, n);
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    const double r = g.nodes[j];
    const double want = r >= a ? q / r : q * (3.0 * a * a - r * r) / (2.0 * a * a * a);
    CHECK_THAT(v[j], WithinRel(want, 1e-12));
  }
}

TEST_CASE("Hartree potential of the hydrogen 1s density", "[fields]") {
  const RadialGrid g = make_grid(20.0, 8 * 200);
  const Eigen::VectorXd n = slater_density(g, 1.0, 1.0);
  const Eigen::VectorXd v = hartree_potential(g, n);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    const double r = g.nodes[j];
    const double want = (1.0 - std::exp(-2.0 * r) * (1.0 + r)) / r;
    worst = std::max(worst, std::abs(v[j] - want));
  }
  CHECK(worst < 1e-12);
  // positive and decreasing outward
  CHECK(v.minCoeff() > 0.0);
  for (Eigen::Index j = 1; j < g.size(); ++j) CHECK(v[j] < v[j - 1]);
}

TEST_CASE("Hartree field scaling and normalization checks", "[fields]") {
  const RadialGrid g = make_grid(15.0, 8 * 150);
  const Eigen::VectorXd n1 = slater_density(g, 1.0, 1.0);
  CHECK(hartree_field(g, n1, 1).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::VectorXd n2 = slater_density(g, 1.7, 2.0);
  const Eigen::VectorXd f = hartree_field(g, n2, 2);
  CHECK((f - 0.5 * hartree_potential(g, n2)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(hartree_field(g, n2, 3), std::invalid_argument);
}

TEST_CASE("Pauli field sums the other groups", "[fields]") {
  const RadialGrid g = make_grid(10.0, 160);
  std::vector<Eigen::VectorXd> groups{slater_density(g, 3.0, 2.0), slater_density(g, 1.0, 5.0),
                                      slater_density(g, 0.5, 1.0)};
  const double g0 = pauli_strength();
  for (std::size_t i = 0; i < groups.size(); ++i) {
    Eigen::VectorXd want = Eigen::VectorXd::Zero(g.size());
    for (std::size_t j = 0; j < groups.size(); ++j) {
      if (j != i) want += g0 * groups[j];
    }
    CHECK((pauli_field(i, groups) - want).cwiseAbs().maxCoeff() < 1e-13 * want.cwiseAbs().maxCoeff());
  }
  CHECK(pauli_field(0, std::span(groups).first(1)).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(pauli_field(3, groups), std::out_of_range);
}

TEST_CASE("Pauli energy equals the explicit pair sum", "[fields]") {
  const RadialGrid g = make_grid(10.0, 320);
  std::vector<Eigen::VectorXd> groups{slater_density(g, 3.0, 2.0), slater_density(g, 1.2, 8.0),
                                      slater_density(g, 0.6, 3.0)};
  double pairs = 0.0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    for (std::size_t j = i + 1; j < groups.size(); ++j) pairs += integrate(g, groups[i].cwiseProduct(groups[j]));
  }
  CHECK_THAT(pauli_energy(g, groups), WithinRel(pauli_strength() * pairs, 1e-13));
  CHECK(pauli_energy(g, std::span(groups).first(1)) == 0.0);
}

TEST_CASE("potential energies of Slater densities", "[fields]") {
  const RadialGrid g = make_grid(20.0, 8 * 200);
  // hydrogen: U_ext = -1, no self-interaction
  {
    std::vector<Eigen::VectorXd> groups{slater_density(g, 1.0, 1.0)};
    const PotentialEnergies u = potential_energy(g, groups, 1, 1);
    CHECK_THAT(u.external, WithinRel(-1.0, 1e-12));
    CHECK(u.electron_electron == 0.0);
    CHECK(u.pauli == 0.0);
  }
  // helium-like: U_ext = -Z N zeta, U_ee = ((N-1)/N) 5 N^2 zeta / 16
  {
    const double zeta = 1.6875;
    std::vector<Eigen::VectorXd> groups{slater_density(g, zeta, 2.0)};
    const PotentialEnergies u = potential_energy(g, groups, 2, 2);
    CHECK_THAT(u.external, WithinRel(-2.0 * 2.0 * zeta, 1e-12));
    CHECK_THAT(u.electron_electron, WithinRel(0.5 * 5.0 * 4.0 * zeta / 16.0, 1e-12));
    CHECK_THAT(u.total(), WithinRel(u.external + u.electron_electron, 1e-15));
  }
  std::vector<Eigen::VectorXd> bad{slater_density(g, 1.0, 1.5)};
  CHECK_THROWS_AS(potential_energy(g, bad, 1, 1), std::invalid_argument);
}

TEST_CASE("build_fields assembles the per-group components", "[fields]") {
  const RadialGrid g = make_grid(15.0, 8 * 150);
  std::vector<Eigen::VectorXd> groups{slater_density(g, 2.7, 2.0), slater_density(g, 0.9, 1.0)};
  const FieldSet f = build_fields(g, groups, 3, 3);
  REQUIRE(f.groups() == 2);
  const Eigen::VectorXd total = groups[0] + groups[1];
  CHECK((f.hartree - hartree_field(g, total, 3)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((f.external - external_field(3, g)).cwiseAbs().maxCoeff() == 0.0);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK((f.total(i) - (f.external + f.interaction(i))).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((f.pauli[i] - pauli_field(i, groups)).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("uniform limit: pair sum, closed form and large-N ratio", "[fields][property]") {
  for (int n : {4, 8, 20}) {
    const UniformLimit u = uniform_limit_check(n, 1.0);
    INFO("N=" << n);
    CHECK(std::abs(u.pair_sum - u.closed_form) <= 1e-12 * u.closed_form);
    CHECK_THAT(u.closed_form / u.large_n_form, WithinRel(1.0 - 2.0 / n, 1e-14));
  }
  CHECK(std::round(uniform_limit_check(4, 1.0).closed_form * 1e6) / 1e6 == 22.969872);
  CHECK(uniform_limit_check(2, 1.0).pair_sum == 0.0);
  CHECK(uniform_limit_check(2, 1.0).closed_form == 0.0);
  // n0 fixed: energy density does not depend on V beyond n0
  const UniformLimit a = uniform_limit_check(8, 2.0);
  CHECK_THAT(a.large_n_form, WithinRel(0.5 * pauli_strength() * 16.0, 1e-14));
  CHECK_THROWS_AS(uniform_limit_check(3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(uniform_limit_check(4, 0.0), std::invalid_argument);
}

TEST_CASE("mean-field Pauli energy scales as n0^2", "[fields][property]") {
  const std::vector<double> densities{0.01, 0.1, 1.0, 10.0, 100.0};
  CHECK_THAT(meanfield_exponent(densities), WithinAbs(2.0, 1e-6));
  const std::vector<double> one{1.0};
  CHECK_THROWS_AS(meanfield_exponent(one), std::invalid_argument);
  const std::vector<double> same{2.0, 2.0};
  CHECK_THROWS_AS(meanfield_exponent(same), std::invalid_argument);
}
