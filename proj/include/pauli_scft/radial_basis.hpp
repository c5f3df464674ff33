#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace pscft {

/// Coefficients of a spherically symmetric function in a BasisSet.
using CoeffVector = Eigen::VectorXd;

/// Zeroth-order spherical Bessel modes on the sphere r <= R,
///
///   f_n(r) = sin(k_n r) / (r sqrt(2 pi R)),   k_n = n pi / R,  n = 1..M,
///
/// orthonormal under the measure 4 pi r^2 dr.
class BasisSet {
 public:
  BasisSet(double radius, int modes);

  double radius() const { return radius_; }
  int size() const { return static_cast<int>(k_.size()); }
  double volume() const;
  std::span<const double> wavenumbers() const { return k_; }
  double wavenumber(int n) const { return k_[n]; }
  double max_wavenumber() const { return k_.back(); }

  /// f_n(r) for zero-based mode index n; r = 0 uses the limit k_n / sqrt(2 pi R).
  double value(int n, double r) const;
  /// All M mode values at r.
  Eigen::VectorXd values(double r) const;

 private:
  double radius_;
  double norm_;
  std::vector<double> k_;
};

/// Composite Gauss-Legendre rule on [0, R] for integrals against 4 pi r^2 dr.
/// No node sits at the origin.
struct RadialGrid {
  double radius = 0.0;
  int panels = 0;
  int order = 0;
  Eigen::VectorXd nodes;
  /// Plain dr weights.
  Eigen::VectorXd weights;
  /// weights * 4 pi r^2.
  Eigen::VectorXd volume_weights;
  /// Panel-local spectral integration matrix on the reference panel, already
  /// scaled by the panel width: (S v)_a = int_{panel start}^{x_a} v dr.
  Eigen::MatrixXd panel_integration;

  int size() const { return static_cast<int>(nodes.size()); }
};

/// Builds a grid with at least `min_nodes` nodes split into equal panels of
/// `order` Gauss-Legendre points each.
RadialGrid make_grid(double radius, int min_nodes, int order = 16);

/// Grid sized for a basis: at least 8 nodes per mode.
RadialGrid make_grid(const BasisSet& basis);

BasisSet make_basis(double radius, int modes);

/// M x nodes table of f_n(r_j).
Eigen::MatrixXd basis_matrix(const BasisSet& basis, const RadialGrid& grid);

/// sum_n c_n f_n(r_j) at every node.
Eigen::VectorXd eval_on_grid(const BasisSet& basis, const CoeffVector& c, const RadialGrid& grid);

/// c_n = int f_n v 4 pi r^2 dr by quadrature.
CoeffVector project_to_coeffs(const BasisSet& basis, const Eigen::VectorXd& values,
                              const RadialGrid& grid);

/// int_0^R v(r) 4 pi r^2 dr.
double integrate(const RadialGrid& grid, const Eigen::VectorXd& values);

/// int_0^{r_j} v(r) dr at every node (plain measure, no 4 pi r^2).
Eigen::VectorXd cumulative_integral(const RadialGrid& grid, const Eigen::VectorXd& integrand);

/// Basis, grid and the cached basis table used by the solver.
struct Discretization {
  BasisSet basis;
  RadialGrid grid;
  Eigen::MatrixXd table;  // M x nodes

  Discretization(double radius, int modes);
  Discretization(BasisSet basis, RadialGrid grid);

  int modes() const { return basis.size(); }
  Eigen::VectorXd eval(const CoeffVector& c) const { return table.transpose() * c; }
  CoeffVector project(const Eigen::VectorXd& values) const;
};

}  // namespace pscft
