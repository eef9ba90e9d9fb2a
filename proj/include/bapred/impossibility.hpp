#pragma once

#include "bapred/scenario.hpp"

namespace bapred {

/// Indistinguishability constructions, one family of configurations each.
enum class Family : std::uint8_t { T41, T42p1, T42p2, T42p3, TC3, TC4p1, TC4p2, T52 };

std::string_view to_string(Family f);
Family parse_family(std::string_view text);
std::vector<Family> all_families();

struct FamilyMember {
  Scenario scenario;
  std::int64_t eta = 0;
  int f = 0;
};

/// Builds the configurations of `family` with node ids laid out A, B, C, D, x.
/// `size` is the free set size of the construction: |D| for T42p1 and T42p3,
/// eta for T42p2, |C| for TC4p1 and TC4p2; ignored elsewhere. Part sizes
/// must be integral; otherwise DomainError names the nearest feasible n.
std::vector<FamilyMember> build_impossibility_scenarios(Family family, const Rational& alpha, int n,
                                                        std::optional<int> size = {});

}  // namespace bapred
