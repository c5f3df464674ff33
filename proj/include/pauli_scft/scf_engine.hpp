#pragma once

#include "pauli_scft/atom_model.hpp"
#include "pauli_scft/fields.hpp"
#include "pauli_scft/radial_basis.hpp"
#include "pauli_scft/spectral_propagator.hpp"

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace pscft {

enum class Mixer { linear, anderson };
enum class InitialGuess { shells, coulomb };

struct ScfConfig {
  std::vector<double> beta_schedule{5.0, 10.0, 20.0, 40.0, 80.0};
  double radius = 15.0;
  int modes = 0;  // 0 selects default_modes(Z, radius)
  double mixing = 0.1;
  double tol = 1e-9;
  int max_iters = 5000;  // per beta stage
  Mixer mixer = Mixer::anderson;
  int anderson_window = 5;
  InitialGuess init = InitialGuess::shells;
  /// Called after every iteration with (beta, iteration within the stage, eps).
  std::function<void(double, int, double)> observer;

  double beta_final() const { return beta_schedule.empty() ? 0.0 : beta_schedule.back(); }
  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

/// ceil(30 Z R / pi), capped at 1200: the sine basis resolves a 1s cusp of
/// exponent Z to about 1e-4 relative at k_max = 30 Z.
int default_modes(int charge, double radius);

/// Applies `key=value` overrides (beta, beta_schedule, radius, modes, mixing,
/// tol, max_iters, mixer, anderson_window, init). Unknown keys throw.
void apply_setting(ScfConfig& cfg, const std::string& key, const std::string& value);

/// Reads a key=value file (# comments) or, when the text starts with '{', a
/// JSON object with the same keys.
ScfConfig load_config(const std::string& text, ScfConfig base = {});

struct GroupState {
  ShellGroup group;
  Eigen::VectorXd interaction;  // w_i + Z/r on the grid (Hartree + Pauli part)
  GroupSolution solution;
  int eigen_hint = 16;
};

/// Discretization plus the field-independent pieces of every mode matrix.
struct ScfWorkspace {
  Discretization disc;
  ModeAssembler assembler;
  Eigen::MatrixXd external_matrix;  // int f_m (-Z/r) f_n 4 pi r^2 dr

  ScfWorkspace(int charge, double radius, int modes);
};

struct ScfState {
  std::shared_ptr<const ScfWorkspace> workspace;
  const Discretization& disc() const { return workspace->disc; }
  Eigen::VectorXd external;  // -Z/r on the grid
  std::vector<GroupState> groups;
  Eigen::VectorXd total_density;
  double beta = 0.0;
  double mixing = 0.1;
  int iterations = 0;
  double residual = std::numeric_limits<double>::infinity();
  std::vector<double> residual_history;

  Eigen::VectorXd field(std::size_t i) const { return external + groups[i].interaction; }
  CoeffVector field_coeffs(std::size_t i) const { return disc().project(field(i)); }
  std::vector<Eigen::VectorXd> group_densities() const;
  double electron_count() const;
};

struct GroupEnergy {
  int occupation = 0;
  double log_partition_term = 0.0;  // -(N_i/beta) ln Q_i
  double field_integral = 0.0;      // int w_i n_i
  double lambda_min = 0.0;
  double excited_weight = 0.0;
};

struct EnergyBreakdown {
  double free_energy = 0.0;
  double binding = 0.0;
  double external = 0.0;
  double electron_electron = 0.0;
  double pauli = 0.0;
  double ground_state_sum = 0.0;  // sum_i N_i lambda_min,i
  std::vector<GroupEnergy> groups;

  /// Free energy rebuilt from the stored parts.
  double reassembled() const;
};

struct StageReport {
  double beta = 0.0;
  int iterations = 0;
  double residual = 0.0;
  double free_energy = 0.0;
};

struct ScfResult {
  ScfState state;
  EnergyBreakdown energy;
  std::vector<StageReport> stages;
};

class ScfError : public std::runtime_error {
 public:
  ScfError(const std::string& what, double last_residual)
      : std::runtime_error(what), residual_(last_residual) {}
  double last_residual() const { return residual_; }

 private:
  double residual_;
};

/// eps = sum_{i,k} (new_i^k - old_i^k)^2; shapes must match.
double convergence_residual(const std::vector<CoeffVector>& old_fields, const std::vector<CoeffVector>& new_fields);

/// Fields and densities before any iteration: nuclear field plus either the
/// interaction fields of screened hydrogenic shell densities or nothing.
ScfState initial_state(const AtomSpec& atom, const ScfConfig& cfg, double beta);
ScfState initial_state(const AtomSpec& atom, const ScfConfig& cfg, double beta,
                       std::shared_ptr<const ScfWorkspace> workspace);

/// Output interaction fields (Hartree + Pauli) built from the current densities.
std::vector<Eigen::VectorXd> output_fields(const ScfState& state, const AtomSpec& atom);

/// Recomputes every group's density from its current field at `beta`.
void solve_groups(ScfState& state, double beta);

/// One fixed-point step: output fields from current densities, residual of the
/// unmixed update, mixing, new densities.
class FieldMixer;
void iterate_once(ScfState& state, const AtomSpec& atom, const ScfConfig& cfg, double beta,
                  FieldMixer* mixer = nullptr);

/// F = sum_i [-(N_i/beta) ln Q_i - int w_i n_i] + U_ext + U_ee + U_P for the
/// current fields and densities.
EnergyBreakdown assemble_energy(const ScfState& state, const AtomSpec& atom);

/// Converges at each beta of the schedule, warm-starting from the previous one.
ScfResult beta_continuation(const AtomSpec& atom, const ScfConfig& cfg);

/// Full solve: validation, continuation and final energies.
ScfResult run_scf(const AtomSpec& atom, const ScfConfig& cfg);

/// Linear or Anderson mixing on concatenated interaction fields, with the
/// volume-weighted inner product of the grid.
class FieldMixer {
 public:
  FieldMixer(Mixer kind, double mixing, int window, Eigen::VectorXd metric);

  Eigen::VectorXd next(const Eigen::VectorXd& input, const Eigen::VectorXd& output);
  /// Clears the history. A warm reset lets Anderson extrapolate at once; a
  /// cold one first damps the residual by plain mixing.
  void reset(bool warm = false);
  void set_mixing(double mixing) { mixing_ = mixing; }
  double mixing() const { return mixing_; }

 private:
  Mixer kind_;
  double mixing_;
  int window_;
  Eigen::VectorXd metric_;
  std::vector<Eigen::VectorXd> inputs_;
  std::vector<Eigen::VectorXd> residuals_;
  std::vector<double> residual_norms_;
  double first_norm_ = -1.0;
  bool engaged_ = false;
};

}  // namespace pscft
