#include "pauli_scft/atom_model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace pscft {

namespace {

constexpr std::array<std::string_view, kMaxSupportedCharge> kSymbols = {
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne", "Na", "Mg", "Al", "Si", "P", "S", "Cl", "Ar"};

constexpr std::array<ReferenceEnergy, kMaxSupportedCharge> kReference = {{
    {"H", 1, 0.4997332, 0.5000000, 0.05},
    {"He", 2, 2.9033858, 2.7616721, 4.9},
    {"Li", 3, 7.4779785, 6.85169, 8.4},
    {"Be", 4, 14.668442, 13.4755, 8.1},
    {"B", 5, 24.658095, 23.010, 6.7},
    {"C", 6, 37.855785, 35.812, 5.4},
    {"N", 7, 54.611615, 52.225, 4.4},
    {"O", 8, 75.10984, 72.60, 3.3},
    {"F", 9, 99.8071, 97.26, 2.6},
    {"Ne", 10, 129.05245, 126.57, 1.9},
    {"Na", 11, 162.432, 159.1, 2.1},
    {"Mg", 12, 200.323, 195.8, 2.3},
    {"Al", 13, 242.7275, 237.0, 2.4},
    {"Si", 14, 289.898, 282.6, 2.5},
    {"P", 15, 341.98, 332.9, 2.7},
    {"S", 16, 399.085, 387.8, 2.8},
    {"Cl", 17, 461.44, 447.9, 2.9},
    {"Ar", 18, 529.22, 512.8, 3.1},
}};

std::string shortest(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("reference csv: bad number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::vector<int> AtomSpec::occupations() const {
  std::vector<int> out;
  out.reserve(groups.size());
  for (const auto& g : groups) out.push_back(g.occupation);
  return out;
}

std::vector<int> shell_groups(int charge) {
  if (charge < 1 || charge > kMaxSupportedCharge) {
    throw std::out_of_range("shell_groups: supported charges are 1..18, got " + std::to_string(charge));
  }
  std::vector<int> occ{std::min(charge, 2), std::clamp(charge - 2, 0, 8), std::clamp(charge - 10, 0, 8)};
  occ.erase(std::remove(occ.begin(), occ.end(), 0), occ.end());
  return occ;
}

AtomSpec make_atom(int charge) {
  const auto occ = shell_groups(charge);
  AtomSpec atom;
  atom.symbol = std::string(element_symbol(charge));
  atom.charge = charge;
  atom.electrons = charge;
  for (std::size_t i = 0; i < occ.size(); ++i) {
    atom.groups.push_back({static_cast<int>(i) + 1, occ[i]});
  }
  return atom;
}

AtomSpec make_atom(std::string_view symbol) { return make_atom(atomic_number(symbol)); }

int atomic_number(std::string_view symbol) {
  for (std::size_t i = 0; i < kSymbols.size(); ++i) {
    const auto s = kSymbols[i];
    if (s.size() == symbol.size() &&
        std::equal(s.begin(), s.end(), symbol.begin(), [](char a, char b) {
          return std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b));
        })) {
      return static_cast<int>(i) + 1;
    }
  }
  throw std::out_of_range("unknown element symbol '" + std::string(symbol) + "' (supported: H..Ar)");
}

std::string_view element_symbol(int charge) {
  if (charge < 1 || charge > kMaxSupportedCharge) {
    throw std::out_of_range("element_symbol: supported charges are 1..18");
  }
  return kSymbols[static_cast<std::size_t>(charge - 1)];
}

std::span<const ReferenceEnergy> reference_table() { return kReference; }

const ReferenceEnergy& reference_energy(std::string_view symbol) {
  return kReference[static_cast<std::size_t>(atomic_number(symbol) - 1)];
}

std::string reference_table_csv() {
  std::ostringstream out;
  out << "symbol,Z,nist_hartree,paper_scft_hartree,paper_pct_diff\n";
  for (const auto& row : kReference) {
    out << row.symbol << ',' << row.charge << ',' << shortest(row.nist) << ',' << shortest(row.paper_scft) << ','
        << shortest(row.paper_pct_diff) << '\n';
  }
  return out.str();
}

std::vector<ReferenceEnergy> parse_reference_csv(std::string_view csv) {
  std::vector<ReferenceEnergy> rows;
  std::istringstream in{std::string(csv)};
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5) throw std::invalid_argument("reference csv: expected 5 columns in '" + line + "'");
    const int z = atomic_number(cells[0]);
    if (std::to_string(z) != cells[1]) throw std::invalid_argument("reference csv: Z mismatch in '" + line + "'");
    rows.push_back({element_symbol(z), z, parse_double(cells[2]), parse_double(cells[3]), parse_double(cells[4])});
  }
  return rows;
}

}  // namespace pscft
