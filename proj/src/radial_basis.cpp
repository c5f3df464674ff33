#include "pauli_scft/radial_basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace pscft {

namespace {

constexpr double kPi = std::numbers::pi;

// Legendre polynomials P_0..P_{degree} at x.
std::vector<double> legendre_values(int degree, double x) {
  std::vector<double> p(static_cast<std::size_t>(degree) + 1);
  p[0] = 1.0;
  if (degree >= 1) p[1] = x;
  for (int k = 1; k < degree; ++k) {
    p[k + 1] = ((2.0 * k + 1.0) * x * p[k] - k * p[k - 1]) / (k + 1.0);
  }
  return p;
}

struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

GaussRule gauss_legendre(int q) {
  GaussRule rule;
  rule.x.resize(q);
  rule.w.resize(q);
  for (int i = 0; i < q; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      auto p = legendre_values(q, x);
      dp = q * (x * p[q] - p[q - 1]) / (x * x - 1.0);
      const double dx = p[q] / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    auto p = legendre_values(q, x);
    dp = q * (x * p[q] - p[q - 1]) / (x * x - 1.0);
    // ascending order
    rule.x[q - 1 - i] = x;
    rule.w[q - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

void check_finite(const Eigen::VectorXd& v, const char* what) {
  if (!v.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite input");
}

}  // namespace

BasisSet::BasisSet(double radius, int modes) : radius_(radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("BasisSet: radius must be positive");
  }
  if (modes < 1) throw std::invalid_argument("BasisSet: need at least one mode");
  norm_ = 1.0 / std::sqrt(2.0 * kPi * radius);
  k_.resize(static_cast<std::size_t>(modes));
  for (int n = 0; n < modes; ++n) k_[n] = (n + 1) * kPi / radius;
}

double BasisSet::volume() const { return 4.0 / 3.0 * kPi * radius_ * radius_ * radius_; }

double BasisSet::value(int n, double r) const {
  const double k = k_.at(static_cast<std::size_t>(n));
  if (r == 0.0) return k * norm_;
  return std::sin(k * r) / r * norm_;
}

Eigen::VectorXd BasisSet::values(double r) const {
  Eigen::VectorXd out(size());
  for (int n = 0; n < size(); ++n) out[n] = value(n, r);
  return out;
}

BasisSet make_basis(double radius, int modes) { return BasisSet(radius, modes); }

RadialGrid make_grid(double radius, int min_nodes, int order) {
  if (!(radius > 0.0)) throw std::invalid_argument("make_grid: radius must be positive");
  if (order < 2) throw std::invalid_argument("make_grid: order must be >= 2");
  const int panels = std::max(1, (min_nodes + order - 1) / order);
  const auto rule = gauss_legendre(order);
  const double h = radius / panels;

  RadialGrid g;
  g.radius = radius;
  g.panels = panels;
  g.order = order;
  g.nodes.resize(panels * order);
  g.weights.resize(panels * order);
  for (int p = 0; p < panels; ++p) {
    for (int a = 0; a < order; ++a) {
      const int j = p * order + a;
      g.nodes[j] = p * h + 0.5 * h * (rule.x[a] + 1.0);
      g.weights[j] = 0.5 * h * rule.w[a];
    }
  }
  g.volume_weights = g.weights.array() * 4.0 * kPi * g.nodes.array().square();

  // Interpolate on the panel nodes in the Legendre basis (discrete orthogonality
  // gives the inverse Vandermonde directly), then integrate each P_k from -1.
  g.panel_integration.setZero(order, order);
  std::vector<std::vector<double>> pk(order);
  for (int b = 0; b < order; ++b) pk[b] = legendre_values(order, rule.x[b]);
  for (int a = 0; a < order; ++a) {
    const auto pa = legendre_values(order, rule.x[a]);
    std::vector<double> ik(order);
    ik[0] = rule.x[a] + 1.0;
    for (int k = 1; k < order; ++k) ik[k] = (pa[k + 1] - pa[k - 1]) / (2.0 * k + 1.0);
    for (int b = 0; b < order; ++b) {
      double s = 0.0;
      for (int k = 0; k < order; ++k) s += rule.w[b] * pk[b][k] * (2.0 * k + 1.0) / 2.0 * ik[k];
      g.panel_integration(a, b) = 0.5 * h * s;
    }
  }
  return g;
}

RadialGrid make_grid(const BasisSet& basis) { return make_grid(basis.radius(), 8 * basis.size()); }

Eigen::MatrixXd basis_matrix(const BasisSet& basis, const RadialGrid& grid) {
  const int m = basis.size();
  const int nodes = grid.size();
  const double norm = 1.0 / std::sqrt(2.0 * kPi * basis.radius());
  Eigen::MatrixXd table(m, nodes);
  for (int j = 0; j < nodes; ++j) {
    const double r = grid.nodes[j];
    const double scale = norm / r;
    for (int n = 0; n < m; ++n) table(n, j) = std::sin(basis.wavenumber(n) * r) * scale;
  }
  return table;
}

Eigen::VectorXd eval_on_grid(const BasisSet& basis, const CoeffVector& c, const RadialGrid& grid) {
  if (c.size() != basis.size()) throw std::invalid_argument("eval_on_grid: coefficient length mismatch");
  return basis_matrix(basis, grid).transpose() * c;
}

CoeffVector project_to_coeffs(const BasisSet& basis, const Eigen::VectorXd& values,
                              const RadialGrid& grid) {
  if (values.size() != grid.size()) throw std::invalid_argument("project_to_coeffs: value length mismatch");
  if (std::abs(grid.radius - basis.radius()) > 1e-12 * basis.radius()) {
    throw std::invalid_argument("project_to_coeffs: grid and basis radii differ");
  }
  check_finite(values, "project_to_coeffs");
  return basis_matrix(basis, grid) * values.cwiseProduct(grid.volume_weights);
}

double integrate(const RadialGrid& grid, const Eigen::VectorXd& values) {
  if (values.size() != grid.size()) throw std::invalid_argument("integrate: value length mismatch");
  check_finite(values, "integrate");
  return grid.volume_weights.dot(values);
}

Eigen::VectorXd cumulative_integral(const RadialGrid& grid, const Eigen::VectorXd& integrand) {
  if (integrand.size() != grid.size()) throw std::invalid_argument("cumulative_integral: length mismatch");
  const int q = grid.order;
  Eigen::VectorXd out(grid.size());
  double offset = 0.0;
  for (int p = 0; p < grid.panels; ++p) {
    const auto v = integrand.segment(p * q, q);
    out.segment(p * q, q) = grid.panel_integration * v;
    out.segment(p * q, q).array() += offset;
    offset += grid.weights.segment(p * q, q).dot(v);
  }
  return out;
}

Discretization::Discretization(double radius, int modes)
    : basis(radius, modes), grid(make_grid(basis)), table(basis_matrix(basis, grid)) {}

Discretization::Discretization(BasisSet b, RadialGrid g)
    : basis(std::move(b)), grid(std::move(g)), table(basis_matrix(basis, grid)) {}

CoeffVector Discretization::project(const Eigen::VectorXd& values) const {
  return table * values.cwiseProduct(grid.volume_weights);
}

}  // namespace pscft
