#pragma once

// Reference ground-state energy sequences E_0..E_5, four decimals.

#include <array>
#include <span>
#include <string_view>

#include "dwell/hierarchy.hpp"

namespace dwell {

struct ReferenceRow {
  std::string_view table;   ///< "table1", "table2", "table3"
  std::string_view label;   ///< row label as printed
  double g;
  double a;
  BoundaryCondition bc;
  std::array<double, 6> energies;
};

inline constexpr std::array<ReferenceRow, 2> kTable1{{
    {"table1", "I", 1.0, 2.0, BoundaryCondition::unit_at_infinity, {1.7321, 1.0163, 1.0031, 1.0005, 1.0001, 1.0000}},
    {"table1", "II", 1.0, 2.0, BoundaryCondition::unit_at_origin, {1.7321, 1.0163, 0.9981, 1.0002, 1.0000, 1.0000}},
}};

inline constexpr std::array<ReferenceRow, 3> kTable2{{
    {"table2", "1.8", 1.0, 1.8, BoundaryCondition::unit_at_origin, {1.6733, 0.9558, 0.9418, 0.9432, 0.9431, 0.9431}},
    {"table2", "2", 1.0, 2.0, BoundaryCondition::unit_at_origin, {1.7321, 1.0163, 0.9981, 1.0002, 1.0000, 1.0000}},
    {"table2", "3", 1.0, 3.0, BoundaryCondition::unit_at_origin, {2.0000, 1.2974, 1.2602, 1.2659, 1.2651, 1.2652}},
}};

inline constexpr std::array<ReferenceRow, 4> kTable3{{
    {"table3", "0.88", 0.88, 2.0, BoundaryCondition::unit_at_origin, {1.5242, 0.8633, 0.8517, 0.8528, 0.8527, 0.8527}},
    {"table3", "1", 1.0, 2.0, BoundaryCondition::unit_at_origin, {1.7321, 1.0163, 0.9981, 1.0002, 1.0000, 1.0000}},
    {"table3", "2", 2.0, 2.0, BoundaryCondition::unit_at_origin, {3.4641, 2.6934, 2.6375, 2.6465, 2.6455, 2.6456}},
    {"table3", "3", 3.0, 2.0, BoundaryCondition::unit_at_origin, {5.1962, 4.5786, 4.5562, 4.5591, 4.5589, 4.5589}},
}};

/// Rows of table 1, 2 or 3; throws ParameterError otherwise.
[[nodiscard]] inline std::span<const ReferenceRow> reference_table(int which) {
  switch (which) {
    case 1: return kTable1;
    case 2: return kTable2;
    case 3: return kTable3;
    default: throw ParameterError("table must be 1, 2 or 3, got " + std::to_string(which));
  }
}

/// Header text of the first column for each table.
[[nodiscard]] inline std::string_view reference_row_heading(int which) {
  return which == 1 ? "bc" : (which == 2 ? "a" : "g");
}

}  // namespace dwell
