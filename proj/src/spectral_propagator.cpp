#include "pauli_scft/spectral_propagator.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pscft {

namespace {

// Householder tridiagonalization in Eigen, MRRR (dstemr) on the tridiagonal
// matrix, back-transformation in Eigen. The OpenBLAS level-2/3 kernels behind
// dsytrd/dormtr return wrong vectors on some AVX-512 builds, so they are kept
// out of this path.
class TridiagonalForm {
 public:
  explicit TridiagonalForm(const ModeMatrix& matrix) : n_(matrix.size()) {
    if (n_ == 0) throw std::invalid_argument("diagonalize: empty matrix");
    const Eigen::MatrixXd& h = matrix.h;
    if (!h.allFinite()) throw std::invalid_argument("diagonalize: non-finite matrix entries");
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    const double asym = (h - h.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale) {
      throw std::invalid_argument("diagonalize: matrix not symmetric (max asymmetry " + std::to_string(asym) + ")");
    }
    tri_.compute(h);
  }

  int size() const { return n_; }

  EigenSystem lowest(int count) const {
    count = std::clamp(count, 1, n_);
    Eigen::VectorXd d = tri_.diagonal();
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n_);
    if (n_ > 1) e.head(n_ - 1) = tri_.subDiagonal();

    Eigen::VectorXd w(n_);
    Eigen::MatrixXd y(n_, count);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(count));
    lapack_int found = 0;
    lapack_logical tryrac = 1;
    const char range = count == n_ ? 'A' : 'I';
    const lapack_int info = LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', range, n_, d.data(), e.data(), 0.0, 0.0, 1,
                                           count, &found, w.data(), y.data(), n_, count, support.data(), &tryrac);
    if (info != 0) throw std::runtime_error("diagonalize: LAPACK dstemr failed, info = " + std::to_string(info));

    EigenSystem out;
    out.values = w.head(found);
    out.vectors = tri_.matrixQ() * y.leftCols(found);
    return out;
  }

 private:
  int n_;
  Eigen::Tridiagonalization<Eigen::MatrixXd> tri_;
};

}  // namespace

ModeAssembler::ModeAssembler(const BasisSet& basis, const RadialGrid& grid)
    : modes_(basis.size()), radius_(basis.radius()), nodes_(grid.nodes), weights_(grid.weights) {
  if (std::abs(grid.radius - basis.radius()) > 1e-12 * basis.radius()) {
    throw std::invalid_argument("ModeAssembler: grid and basis radii differ");
  }
  kinetic_.resize(modes_);
  for (int n = 0; n < modes_; ++n) kinetic_[n] = 0.5 * basis.wavenumber(n) * basis.wavenumber(n);
}

Eigen::VectorXd ModeAssembler::cosine_moments(const Eigen::VectorXd& field) const {
  const int count = 2 * modes_ + 1;
  const double dk = std::numbers::pi / radius_;
  const Eigen::ArrayXd wf = weights_.array() * field.array();
  const Eigen::ArrayXd theta = dk * nodes_.array();
  const Eigen::ArrayXd c1 = theta.cos();
  const Eigen::ArrayXd s1 = theta.sin();
  // all nodes advance together: (c, s) <- (c, s) rotated by theta, reseeded
  // every 128 steps to bound the accumulated rounding
  Eigen::ArrayXd c = Eigen::ArrayXd::Ones(nodes_.size());
  Eigen::ArrayXd s = Eigen::ArrayXd::Zero(nodes_.size());
  Eigen::ArrayXd tmp(nodes_.size());
  Eigen::VectorXd moments(count);
  for (int m = 0; m < count; ++m) {
    if (m % 128 == 0 && m > 0) {
      c = (m * theta).cos();
      s = (m * theta).sin();
    }
    moments[m] = (wf * c).sum();
    tmp = c * c1 - s * s1;
    s = s * c1 + c * s1;
    c.swap(tmp);
  }
  return moments;
}

Eigen::MatrixXd ModeAssembler::potential_matrix(const Eigen::VectorXd& field) const {
  if (field.size() != nodes_.size()) throw std::invalid_argument("assemble: field length does not match grid");
  if (!field.allFinite()) throw std::invalid_argument("assemble: non-finite field values");
  const Eigen::VectorXd c = cosine_moments(field);
  Eigen::MatrixXd w(modes_, modes_);
  for (int n = 0; n < modes_; ++n) {
    for (int m = n; m < modes_; ++m) {
      const double v = (c[m - n] - c[m + n + 2]) / radius_;
      w(m, n) = v;
      w(n, m) = v;
    }
  }
  return w;
}

ModeMatrix ModeAssembler::with_kinetic(const Eigen::MatrixXd& potential) const {
  ModeMatrix out{potential};
  out.h.diagonal() += kinetic_;
  return out;
}

ModeMatrix ModeAssembler::assemble(const Eigen::VectorXd& field) const {
  return with_kinetic(potential_matrix(field));
}

ModeMatrix assemble(const BasisSet& basis, const RadialGrid& grid, const Eigen::VectorXd& field) {
  return ModeAssembler(basis, grid).assemble(field);
}

EigenSystem diagonalize(const ModeMatrix& matrix) { return TridiagonalForm(matrix).lowest(matrix.size()); }

EigenSystem lowest_eigenpairs(const ModeMatrix& matrix, int count) { return TridiagonalForm(matrix).lowest(count); }

EigenSystem thermal_eigenpairs(const ModeMatrix& matrix, double beta, int& hint, double cutoff) {
  if (!(beta > 0.0)) throw std::invalid_argument("thermal_eigenpairs: beta must be positive");
  const TridiagonalForm tri(matrix);
  const int n = tri.size();
  int count = std::clamp(hint, 1, n);
  for (;;) {
    EigenSystem eig = tri.lowest(count);
    if (count == n || beta * (eig.values[count - 1] - eig.values[0]) > cutoff) {
      // shrink the hint when far more states than needed were computed
      int needed = 1;
      while (needed < count && beta * (eig.values[needed] - eig.values[0]) <= cutoff) ++needed;
      hint = std::min(n, needed + 4);
      return eig;
    }
    count = std::min(n, 2 * count);
  }
}

double GroupSolution::partition_function() const { return std::exp(log_partition); }

Eigen::VectorXd GroupSolution::density_at(const BasisSet& basis, const Eigen::VectorXd& radii) const {
  if (vectors.rows() != basis.size()) throw std::invalid_argument("density_at: basis size mismatch");
  Eigen::VectorXd out(radii.size());
  for (Eigen::Index j = 0; j < radii.size(); ++j) {
    const Eigen::VectorXd psi = vectors.transpose() * basis.values(radii[j]);
    out[j] = occupation * psi.array().square().matrix().dot(weights);
  }
  return out;
}

GroupSolution group_solution(const EigenSystem& eig, double beta, int occupation, const Discretization& disc) {
  if (!(beta > 0.0)) throw std::invalid_argument("group_solution: beta must be positive");
  if (eig.size() == 0) throw std::invalid_argument("group_solution: empty spectrum");
  if (occupation < 1) throw std::invalid_argument("group_solution: occupation must be >= 1");
  if (eig.vectors.rows() != disc.modes()) throw std::invalid_argument("group_solution: basis size mismatch");

  const double lmin = eig.values.minCoeff();
  Eigen::VectorXd weights = (-beta * (eig.values.array() - lmin)).exp().matrix();
  const double sum = weights.sum();

  // keep only states that carry weight
  int used = 0;
  for (int p = 0; p < eig.size(); ++p) {
    if (weights[p] > std::numeric_limits<double>::min()) used = p + 1;
  }
  const Eigen::MatrixXd psi = disc.table.transpose() * eig.vectors.leftCols(used);

  GroupSolution sol;
  sol.occupation = occupation;
  sol.beta = beta;
  sol.lambda_min = lmin;
  sol.log_partition = -beta * lmin + std::log(sum);
  sol.excited_weight = weights.size() > 1 ? weights.tail(weights.size() - 1).sum() : 0.0;
  sol.states = used;
  sol.density = (occupation / sum) * (psi.array().square().matrix() * weights.head(used));
  sol.density_coeffs = disc.project(sol.density);
  sol.vectors = eig.vectors.leftCols(used);
  sol.weights = weights.head(used) / sum;
  return sol;
}

GroupSolution group_solution(const EigenSystem& eig, double beta, int occupation, const BasisSet& basis,
                             const RadialGrid& grid) {
  return group_solution(eig, beta, occupation, Discretization(basis, grid));
}

EntropicTerms entropic_terms(const GroupSolution& solution, const Eigen::VectorXd& field, const RadialGrid& grid) {
  EntropicTerms t;
  t.log_partition_term = -static_cast<double>(solution.occupation) / solution.beta * solution.log_partition;
  t.field_integral = integrate(grid, field.cwiseProduct(solution.density));
  return t;
}

}  // namespace pscft
