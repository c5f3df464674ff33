// pauli-scft: run the atomic ring-polymer SCFT for H through Ar and write
// per-element reports, density profiles and the reference comparison.

#include "pauli_scft/atom_model.hpp"
#include "pauli_scft/report.hpp"
#include "pauli_scft/scf_engine.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace pscft;

namespace {

std::vector<std::string> expand_symbols(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    std::string sym;
    while (std::getline(ss, sym, ',')) {
      if (sym.empty()) continue;
      std::string lower = sym;
      std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
      if (lower == "all") {
        for (int z = 1; z <= kMaxSupportedCharge; ++z) out.emplace_back(element_symbol(z));
      } else {
        out.emplace_back(element_symbol(atomic_number(sym)));  // validates and normalizes case
      }
    }
  }
  std::vector<std::string> unique;
  for (const auto& s : out) {
    if (std::find(unique.begin(), unique.end(), s) == unique.end()) unique.push_back(s);
  }
  return unique;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string summary_csv(std::vector<RunReport> reports) {
  std::sort(reports.begin(), reports.end(), [](const auto& a, const auto& b) { return a.charge < b.charge; });
  std::string out = "symbol,Z,converged,binding,nist,pct_diff,wall_seconds\n";
  for (const auto& r : reports) {
    out += fmt::format("{},{},{},{},{},{},{:.2f}\n", r.symbol, r.charge, r.converged ? 1 : 0,
                       r.converged ? format_energy(r.binding) : "", format_energy(r.nist),
                       r.converged ? fmt::format("{:.2f}", r.pct_diff) : "", r.wall_seconds);
  }
  return out;
}

std::string summary_json(const std::vector<RunReport>& reports) {
  std::string out = "[\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    out += report_to_json(reports[i], 2);
    out += i + 1 < reports.size() ? ",\n" : "\n";
  }
  return out + "]\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orbital-free ring-polymer SCFT for isolated atoms H-Ar"};
  app.require_subcommand(1);

  std::vector<std::string> positional;
  std::vector<std::string> element_opt;
  std::string config_path;
  std::string out_dir = "pscft_out";
  std::string format = "json";
  std::string mixer;
  std::string init;
  std::string beta_schedule;
  double beta = 0.0;
  double radius = 0.0;
  int modes = -1;
  double mixing = 0.0;
  double tol = 0.0;
  int max_iters = 0;
  int jobs = 1;
  bool quiet = false;

  CLI::App* run = app.add_subcommand("run", "Solve one element, a list, or all 18");
  run->add_option("elements", positional, "Element symbols (H..Ar), comma lists, or 'all'");
  run->add_option("--element,-e", element_opt, "Element symbol or 'all' (repeatable)");
  run->add_option("--config,-c", config_path, "key=value or JSON config file");
  run->add_option("--beta", beta, "Final beta (1/hartree); schedule entries below it are kept");
  run->add_option("--beta-schedule", beta_schedule, "Comma-separated ascending beta values");
  run->add_option("--radius", radius, "Sphere radius (bohr)");
  run->add_option("--modes", modes, "Basis modes (0 = automatic)");
  run->add_option("--mixing", mixing, "Mixing fraction in (0, 1]");
  run->add_option("--tol", tol, "Convergence tolerance on the squared field change");
  run->add_option("--max-iters", max_iters, "Iteration limit per beta stage");
  run->add_option("--mixer", mixer, "linear or anderson")->check(CLI::IsMember({"linear", "anderson"}));
  run->add_option("--init", init, "shells or coulomb")->check(CLI::IsMember({"shells", "coulomb"}));
  run->add_option("--jobs,-j", jobs, "Elements solved concurrently")->check(CLI::PositiveNumber);
  run->add_option("--out,-o", out_dir, "Output directory");
  run->add_option("--format", format, "Summary format")->check(CLI::IsMember({"json", "csv"}));
  run->add_flag("--quiet,-q", quiet, "Suppress the summary table");

  std::string table_out;
  CLI::App* table = app.add_subcommand("table", "Write the embedded reference energies as CSV");
  table->add_option("--out,-o", table_out, "Output file (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*table) {
      if (table_out.empty()) {
        fmt::print("{}", reference_table_csv());
      } else {
        write_file(table_out, reference_table_csv());
      }
      return 0;
    }

    ScfConfig cfg;
    if (!config_path.empty()) cfg = load_config(read_file(config_path), cfg);
    if (!beta_schedule.empty()) apply_setting(cfg, "beta_schedule", beta_schedule);
    if (run->count("--beta")) apply_setting(cfg, "beta", fmt::format("{}", beta));
    if (run->count("--radius")) cfg.radius = radius;
    if (run->count("--modes")) cfg.modes = modes;
    if (run->count("--mixing")) cfg.mixing = mixing;
    if (run->count("--tol")) cfg.tol = tol;
    if (run->count("--max-iters")) cfg.max_iters = max_iters;
    if (!mixer.empty()) apply_setting(cfg, "mixer", mixer);
    if (!init.empty()) apply_setting(cfg, "init", init);
    cfg.validate();

    std::vector<std::string> requested = positional;
    requested.insert(requested.end(), element_opt.begin(), element_opt.end());
    const std::vector<std::string> symbols = expand_symbols(requested);

    const fs::path out(out_dir);
    fs::create_directories(out);

    std::vector<RunReport> reports(symbols.size());
    std::atomic<std::size_t> next{0};
    std::mutex io;
    std::exception_ptr io_error;
    auto worker = [&] {
      for (std::size_t i = next++; i < symbols.size(); i = next++) {
        DensityProfile profile;
        RunReport rep = run_element(symbols[i], cfg, &profile);
        const std::lock_guard lock(io);
        try {
          write_file(out / (rep.symbol + "_report.json"), report_to_json(rep) + "\n");
          if (rep.converged) write_file(out / (rep.symbol + "_density.csv"), density_csv(profile));
        } catch (...) {
          if (!io_error) io_error = std::current_exception();
        }
        if (!quiet) {
          fmt::print(stderr, "{:<3} {} ({:.1f} s)\n", rep.symbol,
                     rep.converged ? format_energy(rep.binding) : "failed: " + rep.error, rep.wall_seconds);
        }
        reports[i] = std::move(rep);
      }
    };
    const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(symbols.size())));
    {
      std::vector<std::jthread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (io_error) std::rethrow_exception(io_error);

    write_file(out / "comparison.csv", compare_table(reports));
    if (format == "csv") {
      write_file(out / "summary.csv", summary_csv(reports));
    } else {
      write_file(out / "summary.json", summary_json(reports));
    }
    if (!quiet) fmt::print("{}", summary_table(reports));

    const bool all_ok = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.converged; });
    return all_ok ? 0 : 1;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
}
