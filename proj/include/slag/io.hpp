#pragma once

// JSON and CSV interchange for matrices, grids, solutions and check reports.
// Numbers are written with 17 significant digits so that doubles round-trip.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "slag/dsl.hpp"
#include "slag/grid.hpp"
#include "slag/sym_matrix.hpp"

namespace slag::io {

/// {"dim": m, "rows": [[...], ...]}, row-major.
SymMatrixd matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const SymMatrixd& a);

/// Header `x[,y],value`, nodes in lexicographic order.
void write_grid_csv(std::ostream& os, const SpaceGrid& g);
SpaceGrid read_grid_csv(std::istream& is);

/// Header `t,x[,y],u`, t-major then space nodes in lexicographic order.
void write_solution_csv(std::ostream& os, const SampledFamily& u, const SpaceGrid& geometry);

struct SolutionTable {
  SampledFamily u;
  SpaceGrid geometry;
};
SolutionTable read_solution_csv(std::istream& is);

nlohmann::json report_to_json(const CheckReport& r);
/// {name: {pass, worstMargin, nodeCount, ...}, ...}
nlohmann::json reports_to_json(const std::vector<CheckReport>& reports);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace slag::io
