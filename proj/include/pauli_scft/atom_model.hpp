#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pscft {

/// One electron species sharing a field: a K, L or M shell lumped together.
struct ShellGroup {
  int shell = 1;  // principal shell, 1 = K, 2 = L, 3 = M
  int occupation = 0;
};

/// A neutral atom with its shell grouping (Z = N).
struct AtomSpec {
  std::string symbol;
  int charge = 0;
  int electrons = 0;
  std::vector<ShellGroup> groups;

  std::vector<int> occupations() const;
};

inline constexpr int kMaxSupportedCharge = 18;

/// K/L/M occupations (min(Z,2), clamp(Z-2,0,8), clamp(Z-10,0,8)) with empty
/// groups dropped. Throws std::out_of_range outside 1..18.
std::vector<int> shell_groups(int charge);

AtomSpec make_atom(int charge);
AtomSpec make_atom(std::string_view symbol);

/// Nuclear charge for a symbol (case-insensitive); throws std::out_of_range.
int atomic_number(std::string_view symbol);
std::string_view element_symbol(int charge);

/// Binding energies (hartree) for H..Ar: NIST values and the reference
/// thermal-contour SCFT values with their quoted percent difference.
struct ReferenceEnergy {
  std::string_view symbol;
  int charge;
  double nist;
  double paper_scft;
  double paper_pct_diff;
};

std::span<const ReferenceEnergy> reference_table();
const ReferenceEnergy& reference_energy(std::string_view symbol);

/// CSV with header symbol,Z,nist_hartree,paper_scft_hartree,paper_pct_diff.
/// Values use shortest round-trip formatting.
std::string reference_table_csv();
std::vector<ReferenceEnergy> parse_reference_csv(std::string_view csv);

}  // namespace pscft
