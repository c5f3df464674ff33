#pragma once

#include "pauli_scft/radial_basis.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace pscft {

/// Thomas-Fermi kinetic constant c0 = (3/10)(3 pi^2)^(2/3).
double thomas_fermi_c0();

/// Excluded-volume strength g0^-1 = 2 c0 (hartree bohr^3), calibrated so the
/// large-N uniform mean-field Pauli energy matches the Thomas-Fermi prefactor.
double pauli_strength();

/// Fermi-Amaldi prefactor (N-1)/N; throws for N < 1.
double fermi_amaldi_factor(int electrons);

/// Nuclear field -Z/r at the grid nodes.
Eigen::VectorXd external_field(int charge, const RadialGrid& grid);

/// Closed-form projection of -Z/r:  c_n = -Z 4 pi R (1 - (-1)^n) / (n pi sqrt(2 pi R)).
CoeffVector external_field_coeffs(int charge, const BasisSet& basis);

/// Bare radial Hartree potential
///   V_H(r) = (4 pi / r) int_0^r n r'^2 dr' + 4 pi int_r^R n r' dr'.
Eigen::VectorXd hartree_potential(const RadialGrid& grid, const Eigen::VectorXd& density);

/// (N-1)/N V_H. Requires int n 4 pi r^2 dr = N within 1e-6 and N >= 1.
Eigen::VectorXd hartree_field(const RadialGrid& grid, const Eigen::VectorXd& total_density, int electrons);

/// g0^-1 sum_{j != i} n_j; works equally on grid values or coefficient vectors.
Eigen::VectorXd pauli_field(std::size_t group, std::span<const Eigen::VectorXd> group_densities);

/// Field components for every group, kept separate for diagnostics.
struct FieldSet {
  Eigen::VectorXd external;
  Eigen::VectorXd hartree;             // Fermi-Amaldi scaled
  std::vector<Eigen::VectorXd> pauli;  // one per group

  std::size_t groups() const { return pauli.size(); }
  /// Everything except the nuclear term for group i.
  Eigen::VectorXd interaction(std::size_t i) const { return hartree + pauli[i]; }
  Eigen::VectorXd total(std::size_t i) const { return external + hartree + pauli[i]; }
};

FieldSet build_fields(const RadialGrid& grid, std::span<const Eigen::VectorXd> group_densities, int charge,
                      int electrons);

struct PotentialEnergies {
  double external = 0.0;
  double electron_electron = 0.0;
  double pauli = 0.0;

  double total() const { return external + electron_electron + pauli; }
};

/// (g0^-1 / 2) int (n^2 - sum_i n_i^2) 4 pi r^2 dr.
double pauli_energy(const RadialGrid& grid, std::span<const Eigen::VectorXd> group_densities);

/// U_ext, Fermi-Amaldi Hartree and Pauli energies. Throws if the summed
/// density integrates to a count that differs from N by more than 1e-4.
PotentialEnergies potential_energy(const RadialGrid& grid, std::span<const Eigen::VectorXd> group_densities,
                                   int charge, int electrons);

/// Uniform-gas Pauli energy densities U_P/V for N electrons in pairs.
struct UniformLimit {
  double pair_sum = 0.0;     // explicit double sum over distinct pairs
  double closed_form = 0.0;  // (2 g0^-1 / V^2)(N^2/4 - N/2)
  double large_n_form = 0.0; // (g0^-1 / 2) n0^2
};

/// Requires even N >= 2 and V > 0.
UniformLimit uniform_limit_check(int electrons, double volume);

/// Least-squares slope of ln(U_P/V) against ln n0, evaluating the
/// implemented Pauli functional on uniform paired densities in a sphere.
/// Needs at least two distinct densities.
double meanfield_exponent(std::span<const double> densities);

}  // namespace pscft
