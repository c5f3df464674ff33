#pragma once

#include "pauli_scft/radial_basis.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace pscft {

/// Symmetric mode-space operator H_mn = k_n^2/2 delta_mn + int f_m w f_n 4 pi r^2 dr
/// generating the contour propagator exp(-s H).
struct ModeMatrix {
  Eigen::MatrixXd h;

  int size() const { return static_cast<int>(h.rows()); }
};

/// Assembles mode matrices for fields sampled on a fixed grid.
///
/// Uses sin(a r) sin(b r) = [cos((a-b) r) - cos((a+b) r)] / 2, so that only
/// the 2M+1 cosine moments C_j = int w(r) cos(j pi r / R) dr are needed; each
/// is a plain grid quadrature. The combination C_|m-n| - C_(m+n) is regular for
/// w ~ 1/r even though the individual moments are not.
class ModeAssembler {
 public:
  ModeAssembler(const BasisSet& basis, const RadialGrid& grid);

  /// int f_m w f_n 4 pi r^2 dr without the kinetic diagonal.
  Eigen::MatrixXd potential_matrix(const Eigen::VectorXd& field) const;
  ModeMatrix assemble(const Eigen::VectorXd& field) const;
  /// Kinetic diagonal plus a precomputed potential matrix.
  ModeMatrix with_kinetic(const Eigen::MatrixXd& potential) const;

 private:
  Eigen::VectorXd cosine_moments(const Eigen::VectorXd& field) const;

  int modes_;
  double radius_;
  Eigen::VectorXd kinetic_;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
};

/// Throws std::invalid_argument for non-finite field values or size mismatch.
ModeMatrix assemble(const BasisSet& basis, const RadialGrid& grid, const Eigen::VectorXd& field);

struct EigenSystem {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, orthonormal
  int size() const { return static_cast<int>(values.size()); }
};

/// Full spectrum. Rejects matrices whose asymmetry exceeds 1e-12 of their scale.
EigenSystem diagonalize(const ModeMatrix& matrix);

/// The `count` lowest eigenpairs.
EigenSystem lowest_eigenpairs(const ModeMatrix& matrix, int count);

/// Lowest eigenpairs covering every state with exp(-beta (lambda - lambda_min))
/// above exp(-cutoff). `hint` carries the count between calls.
EigenSystem thermal_eigenpairs(const ModeMatrix& matrix, double beta, int& hint, double cutoff = 50.0);

/// Single-contour solution for one shell group.
struct GroupSolution {
  int occupation = 0;
  double beta = 0.0;
  double log_partition = 0.0;  // ln Q
  double lambda_min = 0.0;
  double excited_weight = 0.0;  // sum_{p>0} exp(-beta (lambda_p - lambda_0))
  int states = 0;
  Eigen::VectorXd density;      // grid values
  CoeffVector density_coeffs;
  Eigen::MatrixXd vectors;      // mode coefficients of the weighted states
  Eigen::VectorXd weights;      // Boltzmann weights of those states, summing to 1

  /// Q itself; overflows to inf for deep wells at large beta.
  double partition_function() const;
  /// n(r) at arbitrary radii from the stored states.
  Eigen::VectorXd density_at(const BasisSet& basis, const Eigen::VectorXd& radii) const;
};

/// Q = sum_p exp(-beta lambda_p) and n(r) = (N/Q) sum_p exp(-beta lambda_p) psi_p(r)^2,
/// accumulated relative to lambda_min.
GroupSolution group_solution(const EigenSystem& eig, double beta, int occupation, const Discretization& disc);
GroupSolution group_solution(const EigenSystem& eig, double beta, int occupation, const BasisSet& basis,
                             const RadialGrid& grid);

struct EntropicTerms {
  double log_partition_term = 0.0;  // -(N/beta) ln Q
  double field_integral = 0.0;      // int w n 4 pi r^2 dr

  double sum() const { return log_partition_term - field_integral; }
};

EntropicTerms entropic_terms(const GroupSolution& solution, const Eigen::VectorXd& field, const RadialGrid& grid);

}  // namespace pscft
