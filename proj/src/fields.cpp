#include "pauli_scft/fields.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pscft {

namespace {
constexpr double kPi = std::numbers::pi;
}

double thomas_fermi_c0() { return 0.3 * std::pow(3.0 * kPi * kPi, 2.0 / 3.0); }

double pauli_strength() { return 2.0 * thomas_fermi_c0(); }

double fermi_amaldi_factor(int electrons) {
  if (electrons < 1) throw std::invalid_argument("Fermi-Amaldi factor needs N >= 1");
  return static_cast<double>(electrons - 1) / electrons;
}

Eigen::VectorXd external_field(int charge, const RadialGrid& grid) {
  if (charge < 0) throw std::invalid_argument("external_field: negative charge");
  return (-static_cast<double>(charge)) * grid.nodes.cwiseInverse();
}

CoeffVector external_field_coeffs(int charge, const BasisSet& basis) {
  const double r = basis.radius();
  const double pref = -charge * 4.0 * kPi * r / (kPi * std::sqrt(2.0 * kPi * r));
  CoeffVector c(basis.size());
  for (int n = 0; n < basis.size(); ++n) {
    const int mode = n + 1;
    c[n] = (mode % 2 == 1) ? 2.0 * pref / mode : 0.0;
  }
  return c;
}

Eigen::VectorXd hartree_potential(const RadialGrid& grid, const Eigen::VectorXd& density) {
  if (density.size() != grid.size()) throw std::invalid_argument("hartree_potential: length mismatch");
  const Eigen::ArrayXd r = grid.nodes.array();
  const Eigen::VectorXd inner = cumulative_integral(grid, (density.array() * r * r).matrix());
  const Eigen::VectorXd nr = (density.array() * r).matrix();
  const Eigen::VectorXd outer_cum = cumulative_integral(grid, nr);
  const double outer_total = grid.weights.dot(nr);
  return 4.0 * kPi * (inner.array() / r + (outer_total - outer_cum.array()));
}

Eigen::VectorXd hartree_field(const RadialGrid& grid, const Eigen::VectorXd& total_density, int electrons) {
  const double factor = fermi_amaldi_factor(electrons);
  const double count = integrate(grid, total_density);
  if (std::abs(count - electrons) > 1e-6 * std::max(1, electrons)) {
    throw std::invalid_argument("hartree_field: density integrates to " + std::to_string(count) +
                                ", expected " + std::to_string(electrons));
  }
  if (factor == 0.0) return Eigen::VectorXd::Zero(grid.size());
  return factor * hartree_potential(grid, total_density);
}

Eigen::VectorXd pauli_field(std::size_t group, std::span<const Eigen::VectorXd> group_densities) {
  if (group >= group_densities.size()) throw std::out_of_range("pauli_field: group index out of range");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(group_densities[group].size());
  for (std::size_t j = 0; j < group_densities.size(); ++j) {
    if (j != group) sum += group_densities[j];
  }
  return pauli_strength() * sum;
}

FieldSet build_fields(const RadialGrid& grid, std::span<const Eigen::VectorXd> group_densities, int charge,
                      int electrons) {
  FieldSet fields;
  fields.external = external_field(charge, grid);
  Eigen::VectorXd total = Eigen::VectorXd::Zero(grid.size());
  for (const auto& n : group_densities) total += n;
  fields.hartree = hartree_field(grid, total, electrons);
  fields.pauli.reserve(group_densities.size());
  for (std::size_t i = 0; i < group_densities.size(); ++i) {
    fields.pauli.push_back(pauli_field(i, group_densities));
  }
  return fields;
}

double pauli_energy(const RadialGrid& grid, std::span<const Eigen::VectorXd> group_densities) {
  // sum over distinct pairs; n^2 - sum n_i^2 would leave rounding for one group
  Eigen::ArrayXd cross = Eigen::ArrayXd::Zero(grid.size());
  for (std::size_t i = 0; i < group_densities.size(); ++i) {
    for (std::size_t j = i + 1; j < group_densities.size(); ++j) {
      cross += group_densities[i].array() * group_densities[j].array();
    }
  }
  return pauli_strength() * integrate(grid, cross.matrix());
}

PotentialEnergies potential_energy(const RadialGrid& grid, std::span<const Eigen::VectorXd> group_densities,
                                   int charge, int electrons) {
  Eigen::VectorXd total = Eigen::VectorXd::Zero(grid.size());
  for (const auto& n : group_densities) total += n;
  const double count = integrate(grid, total);
  if (std::abs(count - electrons) > 1e-4) {
    throw std::invalid_argument("potential_energy: density integrates to " + std::to_string(count) +
                                ", expected " + std::to_string(electrons));
  }
  PotentialEnergies u;
  u.external = integrate(grid, total.cwiseProduct(external_field(charge, grid)));
  const double factor = fermi_amaldi_factor(electrons);
  if (factor != 0.0) {
    u.electron_electron = factor * 0.5 * integrate(grid, total.cwiseProduct(hartree_potential(grid, total)));
  }
  u.pauli = pauli_energy(grid, group_densities);
  return u;
}

UniformLimit uniform_limit_check(int electrons, double volume) {
  if (electrons < 2 || electrons % 2 != 0) {
    throw std::invalid_argument("uniform_limit_check: N must be even and >= 2");
  }
  if (!(volume > 0.0)) throw std::invalid_argument("uniform_limit_check: volume must be positive");
  const double g0 = pauli_strength();
  const int pairs = electrons / 2;
  const double occupation = 2.0;

  UniformLimit out;
  double sum = 0.0;
  for (int i = 0; i < pairs; ++i) {
    for (int j = 0; j < pairs; ++j) {
      if (i != j) sum += g0 * occupation * occupation;
    }
  }
  out.pair_sum = sum / (2.0 * volume * volume);
  const double n = electrons;
  out.closed_form = 2.0 * g0 / (volume * volume) * (n * n / 4.0 - n / 2.0);
  const double n0 = n / volume;
  out.large_n_form = 0.5 * g0 * n0 * n0;
  return out;
}

double meanfield_exponent(std::span<const double> densities) {
  if (densities.size() < 2) throw std::invalid_argument("meanfield_exponent: need at least two densities");
  constexpr int kElectrons = 8;
  std::vector<double> x;
  std::vector<double> y;
  for (double n0 : densities) {
    if (!(n0 > 0.0)) throw std::invalid_argument("meanfield_exponent: densities must be positive");
    const double volume = kElectrons / n0;
    const double radius = std::cbrt(3.0 * volume / (4.0 * kPi));
    const RadialGrid grid = make_grid(radius, 64);
    std::vector<Eigen::VectorXd> groups(kElectrons / 2, Eigen::VectorXd::Constant(grid.size(), 2.0 / volume));
    const double up = pauli_energy(grid, groups);
    x.push_back(std::log(n0));
    y.push_back(std::log(up / volume));
  }
  const double count = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / count;
    my += y[i] / count;
  }
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 1e-300) throw std::invalid_argument("meanfield_exponent: densities must not all coincide");
  return sxy / sxx;
}

}  // namespace pscft
