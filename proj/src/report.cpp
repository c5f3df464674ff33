#include "pauli_scft/report.hpp"

#include "pauli_scft/atom_model.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace pscft {

namespace {

using nlohmann::json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double read_number(const json& j, const char* key) {
  const auto& v = j.at(key);
  return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}

json config_json(const ScfConfig& c) {
  return json{{"beta_schedule", c.beta_schedule},
              {"radius", c.radius},
              {"modes", c.modes},
              {"mixing", c.mixing},
              {"tol", c.tol},
              {"max_iters", c.max_iters},
              {"mixer", c.mixer == Mixer::anderson ? "anderson" : "linear"},
              {"anderson_window", c.anderson_window},
              {"init", c.init == InitialGuess::coulomb ? "coulomb" : "shells"}};
}

ScfConfig config_from_json(const json& j) {
  ScfConfig c;
  c.beta_schedule = j.at("beta_schedule").get<std::vector<double>>();
  c.radius = j.at("radius").get<double>();
  c.modes = j.at("modes").get<int>();
  c.mixing = j.at("mixing").get<double>();
  c.tol = j.at("tol").get<double>();
  c.max_iters = j.at("max_iters").get<int>();
  c.mixer = j.at("mixer").get<std::string>() == "anderson" ? Mixer::anderson : Mixer::linear;
  c.anderson_window = j.at("anderson_window").get<int>();
  c.init = j.at("init").get<std::string>() == "coulomb" ? InitialGuess::coulomb : InitialGuess::shells;
  return c;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

void sort_by_charge(std::vector<RunReport>& reports) {
  std::stable_sort(reports.begin(), reports.end(),
                   [](const RunReport& a, const RunReport& b) { return a.charge < b.charge; });
}

}  // namespace

DensityProfile density_profile(const ScfState& state, int count, double r_max) {
  if (count < 1) throw std::invalid_argument("density_profile: count must be positive");
  const BasisSet& basis = state.disc().basis;
  if (r_max <= 0.0) r_max = basis.radius();
  if (r_max > basis.radius()) throw std::invalid_argument("density_profile: r_max beyond the sphere");

  DensityProfile p;
  p.r = Eigen::VectorXd::LinSpaced(count, r_max / count, r_max);
  p.n_total = Eigen::VectorXd::Zero(count);
  for (const auto& g : state.groups) {
    p.groups.push_back(g.solution.density_at(basis, p.r));
    p.n_total += p.groups.back();
  }
  p.rad_density = 4.0 * std::numbers::pi * p.r.array().square() * p.n_total.array();
  return p;
}

double profile_electron_count(const DensityProfile& profile) {
  const int n = profile.size();
  if (n == 0) return 0.0;
  double sum = 0.5 * profile.r[0] * profile.rad_density[0];
  for (int j = 1; j < n; ++j) {
    sum += 0.5 * (profile.r[j] - profile.r[j - 1]) * (profile.rad_density[j] + profile.rad_density[j - 1]);
  }
  return sum;
}

int shell_peak_count(const Eigen::VectorXd& rad, double relative_floor) {
  const Eigen::Index n = rad.size();
  if (n < 3) throw std::invalid_argument("shell_peak_count: need at least 3 samples");
  if (!rad.allFinite()) throw std::invalid_argument("shell_peak_count: non-finite samples");
  if (rad.maxCoeff() == rad.minCoeff()) throw std::invalid_argument("shell_peak_count: flat profile");

  // end points average over the two available samples
  Eigen::VectorXd s(n);
  s[0] = 0.5 * (rad[0] + rad[1]);
  s[n - 1] = 0.5 * (rad[n - 2] + rad[n - 1]);
  for (Eigen::Index j = 1; j + 1 < n; ++j) s[j] = (rad[j - 1] + rad[j] + rad[j + 1]) / 3.0;

  const double floor = relative_floor * s.maxCoeff();
  int peaks = 0;
  for (Eigen::Index j = 1; j + 1 < n; ++j) {
    if (s[j] > s[j - 1] && s[j] > s[j + 1] && s[j] >= floor) ++peaks;
  }
  return peaks;
}

int shell_peak_count(const DensityProfile& profile, double relative_floor) {
  return shell_peak_count(profile.rad_density, relative_floor);
}

std::string density_csv(const DensityProfile& p) {
  std::string out = "r,n_total,rad_density";
  for (std::size_t g = 0; g < p.groups.size(); ++g) out += fmt::format(",n_g{}", g + 1);
  out += '\n';
  for (int j = 0; j < p.size(); ++j) {
    out += fmt::format("{},{},{}", p.r[j], p.n_total[j], p.rad_density[j]);
    for (const auto& g : p.groups) out += fmt::format(",{}", g[j]);
    out += '\n';
  }
  return out;
}

DensityProfile parse_density_csv(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line)) throw std::invalid_argument("density csv: empty input");
  const auto header = split(line, ',');
  if (header.size() < 3 || header[0] != "r" || header[1] != "n_total" || header[2] != "rad_density") {
    throw std::invalid_argument("density csv: unexpected header '" + line + "'");
  }
  const std::size_t groups = header.size() - 3;
  std::vector<std::vector<double>> cols(header.size());
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) throw std::invalid_argument("density csv: ragged row '" + line + "'");
    for (std::size_t c = 0; c < cells.size(); ++c) cols[c].push_back(std::stod(cells[c]));
  }
  auto vec = [](const std::vector<double>& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()); };
  DensityProfile p;
  p.r = vec(cols[0]);
  p.n_total = vec(cols[1]);
  p.rad_density = vec(cols[2]);
  for (std::size_t g = 0; g < groups; ++g) p.groups.push_back(vec(cols[3 + g]));
  return p;
}

double pct_diff(double binding, double nist) {
  if (nist == 0.0) throw std::invalid_argument("pct_diff: zero reference");
  return 100.0 * std::abs(binding - nist) / std::abs(nist);
}

RunReport run_element(const std::string& symbol, const ScfConfig& cfg, DensityProfile* profile,
                      int profile_samples) {
  const AtomSpec atom = make_atom(symbol);
  const ReferenceEnergy ref = reference_energy(atom.symbol);

  RunReport r;
  r.symbol = atom.symbol;
  r.charge = atom.charge;
  r.config = cfg;
  r.modes = cfg.modes > 0 ? cfg.modes : default_modes(atom.charge, cfg.radius);
  r.nist = ref.nist;
  r.paper_scft = ref.paper_scft;
  r.final_residual = std::numeric_limits<double>::quiet_NaN();

  const auto start = std::chrono::steady_clock::now();
  try {
    const ScfResult res = run_scf(atom, cfg);
    r.converged = true;
    r.energy = res.energy;
    r.binding = res.energy.binding;
    r.pct_diff = pct_diff(r.binding, r.nist);
    r.stages = res.stages;
    r.final_residual = res.state.residual;
    if (profile) *profile = density_profile(res.state, profile_samples);
  } catch (const ScfError& e) {
    r.error = e.what();
    r.final_residual = e.last_residual();
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string report_to_json(const RunReport& r, int indent) {
  json groups = json::array();
  for (const auto& g : r.energy.groups) {
    groups.push_back({{"occupation", g.occupation},
                      {"log_partition_term", number(g.log_partition_term)},
                      {"field_integral", number(g.field_integral)},
                      {"lambda_min", number(g.lambda_min)},
                      {"excited_weight", number(g.excited_weight)}});
  }
  json stages = json::array();
  for (const auto& s : r.stages) {
    stages.push_back({{"beta", s.beta},
                      {"iterations", s.iterations},
                      {"residual", number(s.residual)},
                      {"free_energy", number(s.free_energy)}});
  }
  const json j{{"symbol", r.symbol},
               {"Z", r.charge},
               {"config", config_json(r.config)},
               {"modes", r.modes},
               {"converged", r.converged},
               {"error", r.error},
               {"energy",
                {{"free_energy", number(r.energy.free_energy)},
                 {"binding", number(r.energy.binding)},
                 {"external", number(r.energy.external)},
                 {"electron_electron", number(r.energy.electron_electron)},
                 {"pauli", number(r.energy.pauli)},
                 {"ground_state_sum", number(r.energy.ground_state_sum)},
                 {"groups", groups}}},
               {"binding", number(r.binding)},
               {"nist", r.nist},
               {"paper_scft", r.paper_scft},
               {"pct_diff", number(r.pct_diff)},
               {"stages", stages},
               {"final_residual", number(r.final_residual)},
               {"wall_seconds", number(r.wall_seconds)}};
  return j.dump(indent);
}

RunReport report_from_json(const std::string& text) {
  const json j = json::parse(text);
  RunReport r;
  r.symbol = j.at("symbol").get<std::string>();
  r.charge = j.at("Z").get<int>();
  r.config = config_from_json(j.at("config"));
  r.modes = j.at("modes").get<int>();
  r.converged = j.at("converged").get<bool>();
  r.error = j.at("error").get<std::string>();
  const json& e = j.at("energy");
  r.energy.free_energy = read_number(e, "free_energy");
  r.energy.binding = read_number(e, "binding");
  r.energy.external = read_number(e, "external");
  r.energy.electron_electron = read_number(e, "electron_electron");
  r.energy.pauli = read_number(e, "pauli");
  r.energy.ground_state_sum = read_number(e, "ground_state_sum");
  for (const auto& g : e.at("groups")) {
    GroupEnergy ge;
    ge.occupation = g.at("occupation").get<int>();
    ge.log_partition_term = read_number(g, "log_partition_term");
    ge.field_integral = read_number(g, "field_integral");
    ge.lambda_min = read_number(g, "lambda_min");
    ge.excited_weight = read_number(g, "excited_weight");
    r.energy.groups.push_back(ge);
  }
  r.binding = read_number(j, "binding");
  r.nist = j.at("nist").get<double>();
  r.paper_scft = j.at("paper_scft").get<double>();
  r.pct_diff = read_number(j, "pct_diff");
  for (const auto& s : j.at("stages")) {
    r.stages.push_back({s.at("beta").get<double>(), s.at("iterations").get<int>(), read_number(s, "residual"),
                        read_number(s, "free_energy")});
  }
  r.final_residual = read_number(j, "final_residual");
  r.wall_seconds = read_number(j, "wall_seconds");
  return r;
}

std::string format_energy(double value) {
  if (!std::isfinite(value)) return "";
  return fmt::format("{:.7g}", value);
}

std::string compare_table(std::vector<RunReport> reports) {
  sort_by_charge(reports);
  std::string out = "symbol,Z,binding_here,paper_scft,nist,pct_diff_here,pct_diff_paper\n";
  for (const auto& r : reports) {
    const ReferenceEnergy ref = reference_energy(r.symbol);
    out += fmt::format("{},{},{},{},{},{},{}\n", r.symbol, r.charge,
                       r.converged ? format_energy(r.binding) : std::string(), format_energy(ref.paper_scft),
                       format_energy(ref.nist), r.converged ? fmt::format("{:.2f}", r.pct_diff) : std::string(),
                       fmt::format("{:.2f}", pct_diff(ref.paper_scft, ref.nist)));
  }
  return out;
}

std::string summary_table(std::vector<RunReport> reports) {
  sort_by_charge(reports);
  std::string out = fmt::format("{:<4}{:>14}{:>14}{:>9}{:>10}\n", "sym", "binding", "NIST", "%diff", "time[s]");
  for (const auto& r : reports) {
    if (r.converged) {
      out += fmt::format("{:<4}{:>14}{:>14}{:>9.2f}{:>10.1f}\n", r.symbol, format_energy(r.binding),
                         format_energy(r.nist), r.pct_diff, r.wall_seconds);
    } else {
      out += fmt::format("{:<4}{:>14}{:>14}{:>9}{:>10.1f}  {}\n", r.symbol, "failed", format_energy(r.nist), "-",
                         r.wall_seconds, r.error);
    }
  }
  return out;
}

}  // namespace pscft
