#pragma once

#include "pauli_scft/scf_engine.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace pscft {

/// Radial density samples. rad_density = 4 pi r^2 n_total.
struct DensityProfile {
  Eigen::VectorXd r;
  Eigen::VectorXd n_total;
  Eigen::VectorXd rad_density;
  std::vector<Eigen::VectorXd> groups;

  int size() const { return static_cast<int>(r.size()); }
};

/// Samples `count` uniform radii on (0, r_max] (r_max <= 0 means the sphere
/// radius) by evaluating each group's states in the basis.
DensityProfile density_profile(const ScfState& state, int count = 512, double r_max = 0.0);

/// Trapezoid integral of rad_density over r, closing the first interval at the
/// origin where rad_density vanishes.
double profile_electron_count(const DensityProfile& profile);

/// Strict local maxima of rad_density after a 3-point moving average. Maxima
/// below `relative_floor` times the largest smoothed value are ignored; the
/// truncated basis leaves ripples of order 1e-7 in the far tail.
/// Throws std::invalid_argument for fewer than 3 samples, non-finite values or
/// a flat profile.
int shell_peak_count(const DensityProfile& profile, double relative_floor = 1e-4);
int shell_peak_count(const Eigen::VectorXd& rad_density, double relative_floor = 1e-4);

/// Header `r,n_total,rad_density,n_g1,...` with one group column per shell group.
std::string density_csv(const DensityProfile& profile);
DensityProfile parse_density_csv(const std::string& text);

struct RunReport {
  std::string symbol;
  int charge = 0;
  ScfConfig config;
  int modes = 0;
  bool converged = false;
  std::string error;
  EnergyBreakdown energy;
  double binding = 0.0;
  double nist = 0.0;
  double paper_scft = 0.0;
  double pct_diff = 0.0;
  std::vector<StageReport> stages;
  double final_residual = 0.0;
  double wall_seconds = 0.0;
};

/// 100 |binding - nist| / nist.
double pct_diff(double binding, double nist);

/// Runs one element and fills the report; SCF failures are recorded in
/// `error` rather than thrown. `profile` is filled on success when non-null.
RunReport run_element(const std::string& symbol, const ScfConfig& cfg, DensityProfile* profile = nullptr,
                      int profile_samples = 512);

std::string report_to_json(const RunReport& report, int indent = 2);
RunReport report_from_json(const std::string& text);

/// symbol,Z,binding_here,paper_scft,nist,pct_diff_here,pct_diff_paper sorted
/// by Z; failed runs leave binding_here and pct_diff_here empty.
std::string compare_table(std::vector<RunReport> reports);

/// Plain-text summary (symbol, binding, NIST, %diff), one line per report.
std::string summary_table(std::vector<RunReport> reports);

/// Seven significant figures.
std::string format_energy(double value);

}  // namespace pscft
