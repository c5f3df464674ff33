#include "pauli_scft/scf_engine.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace pscft {

namespace {

constexpr int kMaxModes = 1200;
constexpr int kDivergenceWindow = 20;
constexpr int kMaxHalvings = 3;
constexpr double kAndersonRestart = 2.0;
constexpr double kAndersonEngage = 1e-2;
constexpr double kAndersonRegularization = 1e-10;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || trim(value.substr(pos)).size() != 0) {
    throw std::invalid_argument("config: '" + key + "' expects a number, got '" + value + "'");
  }
  return v;
}

int to_int(const std::string& key, const std::string& value) {
  const double v = to_double(key, value);
  if (v != std::floor(v)) throw std::invalid_argument("config: '" + key + "' expects an integer");
  return static_cast<int>(v);
}

std::vector<double> to_list(const std::string& key, std::string value) {
  std::replace(value.begin(), value.end(), '[', ' ');
  std::replace(value.begin(), value.end(), ']', ' ');
  std::replace(value.begin(), value.end(), '(', ' ');
  std::replace(value.begin(), value.end(), ')', ' ');
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  return out;
}

// Screened hydrogenic shell: r^{2(s-1)} exp(-2 Z_eff r / s), normalized to the
// group occupation on the grid.
Eigen::VectorXd trial_shell_density(const RadialGrid& grid, int charge, const ShellGroup& group) {
  static constexpr int kInnerElectrons[] = {0, 0, 2, 10};
  const int s = std::clamp(group.shell, 1, 3);
  const double zeff = std::max(1.0, static_cast<double>(charge - kInnerElectrons[s]));
  const Eigen::ArrayXd r = grid.nodes.array();
  Eigen::VectorXd n = (r.pow(2.0 * (s - 1)) * (-2.0 * zeff / s * r).exp()).matrix();
  n *= group.occupation / integrate(grid, n);
  return n;
}

}  // namespace

void ScfConfig::validate() const {
  if (beta_schedule.empty()) throw std::invalid_argument("config: beta schedule is empty");
  for (std::size_t i = 0; i < beta_schedule.size(); ++i) {
    if (!(beta_schedule[i] > 0.0)) throw std::invalid_argument("config: beta values must be positive");
    if (i > 0 && !(beta_schedule[i] > beta_schedule[i - 1])) {
      throw std::invalid_argument("config: beta schedule must be strictly ascending");
    }
  }
  if (!(radius > 0.0)) throw std::invalid_argument("config: radius must be positive");
  if (modes < 0) throw std::invalid_argument("config: modes must be >= 1 (or 0 for the default)");
  if (!(mixing > 0.0 && mixing <= 1.0)) throw std::invalid_argument("config: mixing must lie in (0, 1]");
  if (!(tol > 0.0)) throw std::invalid_argument("config: tol must be positive");
  if (max_iters < 1) throw std::invalid_argument("config: max_iters must be >= 1");
  if (anderson_window < 1) throw std::invalid_argument("config: anderson_window must be >= 1");
}

int default_modes(int charge, double radius) {
  const double modes = std::ceil(30.0 * charge * radius / std::numbers::pi);
  return static_cast<int>(std::clamp(modes, 1.0, static_cast<double>(kMaxModes)));
}

void apply_setting(ScfConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  std::string key = trim(raw_key);
  std::replace(key.begin(), key.end(), '-', '_');
  const std::string value = trim(raw_value);
  if (key == "beta") {
    const double beta = to_double(key, value);
    std::vector<double> schedule;
    for (double b : cfg.beta_schedule) {
      if (b < beta) schedule.push_back(b);
    }
    schedule.push_back(beta);
    cfg.beta_schedule = schedule;
  } else if (key == "beta_schedule") {
    cfg.beta_schedule = to_list(key, value);
  } else if (key == "radius") {
    cfg.radius = to_double(key, value);
  } else if (key == "modes") {
    cfg.modes = to_int(key, value);
  } else if (key == "mixing") {
    cfg.mixing = to_double(key, value);
  } else if (key == "tol") {
    cfg.tol = to_double(key, value);
  } else if (key == "max_iters") {
    cfg.max_iters = to_int(key, value);
  } else if (key == "anderson_window") {
    cfg.anderson_window = to_int(key, value);
  } else if (key == "mixer") {
    if (value == "linear") {
      cfg.mixer = Mixer::linear;
    } else if (value == "anderson") {
      cfg.mixer = Mixer::anderson;
    } else {
      throw std::invalid_argument("config: mixer must be 'linear' or 'anderson'");
    }
  } else if (key == "init") {
    if (value == "shells") {
      cfg.init = InitialGuess::shells;
    } else if (value == "coulomb") {
      cfg.init = InitialGuess::coulomb;
    } else {
      throw std::invalid_argument("config: init must be 'shells' or 'coulomb'");
    }
  } else {
    throw std::invalid_argument("config: unknown key '" + raw_key + "'");
  }
}

ScfConfig load_config(const std::string& text, ScfConfig base) {
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    const auto doc = nlohmann::json::parse(body);
    for (const auto& [key, value] : doc.items()) {
      std::string v;
      if (value.is_string()) {
        v = value.get<std::string>();
      } else if (value.is_array()) {
        for (const auto& item : value) v += (v.empty() ? "" : ",") + item.dump();
      } else {
        v = value.dump();
      }
      apply_setting(base, key, v);
    }
    return base;
  }
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config: expected key=value, got '" + line + "'");
    apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
  }
  return base;
}

ScfWorkspace::ScfWorkspace(int charge, double radius, int modes)
    : disc(radius, modes),
      assembler(disc.basis, disc.grid),
      external_matrix(assembler.potential_matrix(external_field(charge, disc.grid))) {}

std::vector<Eigen::VectorXd> ScfState::group_densities() const {
  std::vector<Eigen::VectorXd> out;
  out.reserve(groups.size());
  for (const auto& g : groups) out.push_back(g.solution.density);
  return out;
}

double ScfState::electron_count() const { return integrate(disc().grid, total_density); }

double EnergyBreakdown::reassembled() const {
  double f = external + electron_electron + pauli;
  for (const auto& g : groups) f += g.log_partition_term - g.field_integral;
  return f;
}

double convergence_residual(const std::vector<CoeffVector>& old_fields, const std::vector<CoeffVector>& new_fields) {
  if (old_fields.size() != new_fields.size()) throw std::invalid_argument("convergence_residual: group count mismatch");
  double eps = 0.0;
  for (std::size_t i = 0; i < old_fields.size(); ++i) {
    if (old_fields[i].size() != new_fields[i].size()) {
      throw std::invalid_argument("convergence_residual: coefficient length mismatch");
    }
    eps += (new_fields[i] - old_fields[i]).squaredNorm();
  }
  return eps;
}

FieldMixer::FieldMixer(Mixer kind, double mixing, int window, Eigen::VectorXd metric)
    : kind_(kind), mixing_(mixing), window_(window), metric_(std::move(metric)) {}

void FieldMixer::reset(bool warm) {
  inputs_.clear();
  residuals_.clear();
  residual_norms_.clear();
  first_norm_ = -1.0;
  engaged_ = warm;
}

Eigen::VectorXd FieldMixer::next(const Eigen::VectorXd& input, const Eigen::VectorXd& output) {
  const Eigen::VectorXd residual = output - input;
  if (kind_ == Mixer::linear || window_ < 2) return input + mixing_ * residual;

  // Plain damped steps until the residual has fallen well below its size at
  // the last reset: extrapolating from far-off iterates can carry the fields
  // into the basin where a large group takes over the core.
  const double norm = std::sqrt(residual.cwiseAbs2().dot(metric_));
  if (first_norm_ < 0.0) first_norm_ = norm;
  if (!engaged_ && norm > kAndersonEngage * first_norm_) return input + mixing_ * residual;
  engaged_ = true;

  // restart when the residual jumps well above the best one in the history
  if (!residual_norms_.empty() &&
      norm > kAndersonRestart * *std::min_element(residual_norms_.begin(), residual_norms_.end())) {
    inputs_.clear();
    residuals_.clear();
    residual_norms_.clear();
  }
  inputs_.push_back(input);
  residuals_.push_back(residual);
  residual_norms_.push_back(norm);
  if (static_cast<int>(inputs_.size()) > window_) {
    inputs_.erase(inputs_.begin());
    residuals_.erase(residuals_.begin());
    residual_norms_.erase(residual_norms_.begin());
  }
  const int m = static_cast<int>(inputs_.size()) - 1;
  if (m == 0) return input + mixing_ * residual;

  // minimize |f - dF gamma| in the weighted norm, lightly regularized
  Eigen::MatrixXd df(input.size(), m);
  Eigen::MatrixXd dx(input.size(), m);
  for (int k = 0; k < m; ++k) {
    df.col(k) = residuals_[k + 1] - residuals_[k];
    dx.col(k) = inputs_[k + 1] - inputs_[k];
  }
  const Eigen::MatrixXd wdf = metric_.asDiagonal() * df;
  Eigen::MatrixXd gram = df.transpose() * wdf;
  gram.diagonal().array() += kAndersonRegularization * gram.diagonal().maxCoeff();
  const Eigen::VectorXd gamma = gram.ldlt().solve(wdf.transpose() * residual);
  const Eigen::VectorXd x_bar = input - dx * gamma;
  const Eigen::VectorXd f_bar = residual - df * gamma;
  return x_bar + mixing_ * f_bar;
}

ScfState initial_state(const AtomSpec& atom, const ScfConfig& cfg, double beta) {
  const int modes = cfg.modes > 0 ? cfg.modes : default_modes(atom.charge, cfg.radius);
  return initial_state(atom, cfg, beta, std::make_shared<const ScfWorkspace>(atom.charge, cfg.radius, modes));
}

ScfState initial_state(const AtomSpec& atom, const ScfConfig& cfg, double beta,
                       std::shared_ptr<const ScfWorkspace> workspace) {
  if (atom.groups.empty()) throw std::invalid_argument("initial_state: atom has no shell groups");
  int count = 0;
  for (const auto& g : atom.groups) count += g.occupation;
  if (count != atom.electrons || atom.electrons != atom.charge) {
    throw std::invalid_argument("initial_state: only neutral atoms with consistent occupations are supported");
  }

  ScfState state;
  state.workspace = std::move(workspace);
  const RadialGrid& grid = state.disc().grid;
  state.external = external_field(atom.charge, grid);
  state.mixing = cfg.mixing;
  state.groups.resize(atom.groups.size());
  for (std::size_t i = 0; i < atom.groups.size(); ++i) {
    state.groups[i].group = atom.groups[i];
    state.groups[i].interaction = Eigen::VectorXd::Zero(grid.size());
  }
  if (cfg.init == InitialGuess::shells) {
    std::vector<Eigen::VectorXd> trial;
    for (const auto& g : atom.groups) trial.push_back(trial_shell_density(grid, atom.charge, g));
    const FieldSet fields = build_fields(grid, trial, atom.charge, atom.electrons);
    for (std::size_t i = 0; i < trial.size(); ++i) state.groups[i].interaction = fields.interaction(i);
  }
  solve_groups(state, beta);
  return state;
}

void solve_groups(ScfState& state, double beta) {
  const ScfWorkspace& ws = *state.workspace;
  state.total_density = Eigen::VectorXd::Zero(ws.disc.grid.size());
  for (auto& g : state.groups) {
    const ModeMatrix h = ws.assembler.with_kinetic(ws.external_matrix + ws.assembler.potential_matrix(g.interaction));
    const EigenSystem eig = thermal_eigenpairs(h, beta, g.eigen_hint);
    g.solution = group_solution(eig, beta, g.group.occupation, ws.disc);
    state.total_density += g.solution.density;
  }
  state.beta = beta;
}

std::vector<Eigen::VectorXd> output_fields(const ScfState& state, const AtomSpec& atom) {
  const FieldSet fields = build_fields(state.disc().grid, state.group_densities(), atom.charge, atom.electrons);
  std::vector<Eigen::VectorXd> out;
  out.reserve(fields.groups());
  for (std::size_t i = 0; i < fields.groups(); ++i) out.push_back(fields.interaction(i));
  return out;
}

void iterate_once(ScfState& state, const AtomSpec& atom, const ScfConfig& cfg, double beta, FieldMixer* mixer) {
  const std::size_t groups = state.groups.size();
  const std::vector<Eigen::VectorXd> out = output_fields(state, atom);

  std::vector<CoeffVector> before;
  std::vector<CoeffVector> after;
  for (std::size_t i = 0; i < groups; ++i) {
    before.push_back(state.disc().project(state.groups[i].interaction));
    after.push_back(state.disc().project(out[i]));
  }
  const double eps = convergence_residual(before, after);
  if (!std::isfinite(eps)) throw ScfError("SCF diverged: non-finite field residual", eps);

  const Eigen::Index nodes = state.disc().grid.size();
  if (mixer != nullptr) {
    Eigen::VectorXd x(nodes * static_cast<Eigen::Index>(groups));
    Eigen::VectorXd y(x.size());
    for (std::size_t i = 0; i < groups; ++i) {
      x.segment(static_cast<Eigen::Index>(i) * nodes, nodes) = state.groups[i].interaction;
      y.segment(static_cast<Eigen::Index>(i) * nodes, nodes) = out[i];
    }
    const Eigen::VectorXd mixed = mixer->next(x, y);
    for (std::size_t i = 0; i < groups; ++i) {
      state.groups[i].interaction = mixed.segment(static_cast<Eigen::Index>(i) * nodes, nodes);
    }
  } else {
    const double lambda = cfg.mixing;
    for (std::size_t i = 0; i < groups; ++i) {
      if (lambda != 0.0) state.groups[i].interaction = (1.0 - lambda) * state.groups[i].interaction + lambda * out[i];
    }
  }
  for (const auto& g : state.groups) {
    if (!g.interaction.allFinite()) throw ScfError("SCF diverged: non-finite field after mixing", eps);
  }

  solve_groups(state, beta);
  state.residual = eps;
  state.residual_history.push_back(eps);
  ++state.iterations;
}

EnergyBreakdown assemble_energy(const ScfState& state, const AtomSpec& atom) {
  const RadialGrid& grid = state.disc().grid;
  EnergyBreakdown e;
  for (std::size_t i = 0; i < state.groups.size(); ++i) {
    const auto& sol = state.groups[i].solution;
    const EntropicTerms t = entropic_terms(sol, state.field(i), grid);
    e.groups.push_back({sol.occupation, t.log_partition_term, t.field_integral, sol.lambda_min, sol.excited_weight});
    e.ground_state_sum += sol.occupation * sol.lambda_min;
  }
  const PotentialEnergies u = potential_energy(grid, state.group_densities(), atom.charge, atom.electrons);
  e.external = u.external;
  e.electron_electron = u.electron_electron;
  e.pauli = u.pauli;
  e.free_energy = e.reassembled();
  e.binding = -e.free_energy;
  return e;
}

ScfResult beta_continuation(const AtomSpec& atom, const ScfConfig& cfg) {
  cfg.validate();
  ScfResult result;
  result.state = initial_state(atom, cfg, cfg.beta_schedule.front());
  ScfState& state = result.state;

  Eigen::VectorXd metric(state.disc().grid.size() * static_cast<Eigen::Index>(state.groups.size()));
  for (std::size_t i = 0; i < state.groups.size(); ++i) {
    metric.segment(static_cast<Eigen::Index>(i) * state.disc().grid.size(), state.disc().grid.size()) =
        state.disc().grid.volume_weights;
  }
  FieldMixer mixer(cfg.mixer, cfg.mixing, cfg.anderson_window, metric);

  for (std::size_t stage = 0; stage < cfg.beta_schedule.size(); ++stage) {
    const double beta = cfg.beta_schedule[stage];
    if (stage > 0) solve_groups(state, beta);
    // later stages start inside the converged basin of the previous beta
    mixer.reset(stage > 0);
    int growth = 0;
    int halvings = 0;
    int iters = 0;
    double previous = std::numeric_limits<double>::infinity();
    for (;;) {
      if (iters >= cfg.max_iters) {
        std::ostringstream msg;
        msg << atom.symbol << ": no convergence at beta=" << beta << " after " << iters
            << " iterations (last residual " << state.residual << ")";
        throw ScfError(msg.str(), state.residual);
      }
      iterate_once(state, atom, cfg, beta, &mixer);
      ++iters;
      if (cfg.observer) cfg.observer(beta, iters, state.residual);
      if (state.residual < cfg.tol) break;
      growth = state.residual > previous ? growth + 1 : 0;
      previous = state.residual;
      if (growth >= kDivergenceWindow) {
        if (halvings == kMaxHalvings) {
          std::ostringstream msg;
          msg << atom.symbol << ": residual kept growing at beta=" << beta << " after " << kMaxHalvings
              << " mixing reductions (last residual " << state.residual << ")";
          throw ScfError(msg.str(), state.residual);
        }
        ++halvings;
        mixer.set_mixing(0.5 * mixer.mixing());
        mixer.reset();
        state.mixing = mixer.mixing();
        growth = 0;
      }
    }
    result.stages.push_back({beta, iters, state.residual, assemble_energy(state, atom).free_energy});
  }
  return result;
}

ScfResult run_scf(const AtomSpec& atom, const ScfConfig& cfg) {
  ScfResult result = beta_continuation(atom, cfg);
  result.energy = assemble_energy(result.state, atom);
  return result;
}

}  // namespace pscft
