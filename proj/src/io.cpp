#include "slag/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace slag::io {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return out;
}

double parse_number(const std::string& s, std::size_t line) {
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw InputError("csv line " + std::to_string(line) + ": '" + s + "' is not a finite number");
  }
  return v;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Table read_table(std::istream& is) {
  Table t;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(is, line)) {
    ++lineNo;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw InputError("csv line " + std::to_string(lineNo) + ": expected " +
                       std::to_string(t.header.size()) + " columns");
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_number(c, lineNo));
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw InputError("csv: missing header");
  return t;
}

void expect_header(const Table& t, const std::vector<std::vector<std::string>>& choices,
                   const char* what) {
  for (const auto& c : choices) {
    if (t.header == c) return;
  }
  std::string msg = std::string("csv: unexpected header for ") + what + ", expected ";
  for (std::size_t k = 0; k < choices.size(); ++k) {
    if (k) msg += " or ";
    for (std::size_t i = 0; i < choices[k].size(); ++i) msg += (i ? "," : "") + choices[k][i];
  }
  throw InputError(msg);
}

// Rebuild a grid from node coordinates listed in lexicographic order.
SpaceGrid grid_from_nodes(const std::vector<std::vector<double>>& pts, int dim) {
  const auto count = static_cast<Eigen::Index>(pts.size());
  if (count < 3) throw InputError("csv: too few nodes for a grid");
  Eigen::Index ny = 1;
  if (dim == 2) {
    while (ny < count && pts[static_cast<std::size_t>(ny)][0] == pts[0][0]) ++ny;
    if (count % ny != 0) throw InputError("csv: nodes do not form a rectangular grid");
  }
  const Eigen::Index nx = count / ny;
  SpaceGrid g;
  try {
    if (dim == 1) {
      g = SpaceGrid::interval(pts.front()[0], pts.back()[0], nx);
    } else {
      g = SpaceGrid::rectangle(pts.front()[0], pts.back()[0], pts.front()[1], pts.back()[1], nx,
                               ny);
    }
  } catch (const DomainError& e) {
    throw InputError(std::string("csv: nodes do not form a uniform grid: ") + e.what());
  }
  for (Eigen::Index s = 0; s < count; ++s) {
    const Eigen::VectorXd p = g.point(s);
    for (int a = 0; a < dim; ++a) {
      const double q = pts[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)];
      if (std::abs(q - p(a)) > 1e-9 * (1.0 + std::abs(p(a)))) {
        throw InputError("csv: node " + std::to_string(s) +
                         " is not on the uniform grid in lexicographic order");
      }
    }
  }
  return g;
}

}  // namespace

SymMatrixd matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("rows")) throw InputError("matrix json: missing field 'rows'");
  const auto& rows = j.at("rows");
  if (!rows.is_array() || rows.empty()) throw InputError("matrix json: 'rows' must be a non-empty array");
  const auto m = static_cast<Eigen::Index>(rows.size());
  if (j.contains("dim")) {
    if (!j.at("dim").is_number_integer() || j.at("dim").get<Eigen::Index>() != m) {
      throw InputError("matrix json: 'dim' does not match the number of rows");
    }
  }
  Eigen::MatrixXd a(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m) {
      throw InputError("matrix json: row " + std::to_string(i) + " must have " + std::to_string(m) +
                       " entries");
    }
    for (Eigen::Index k = 0; k < m; ++k) {
      const auto& v = row[static_cast<std::size_t>(k)];
      if (!v.is_number()) {
        throw InputError("matrix json: entry (" + std::to_string(i) + "," + std::to_string(k) +
                         ") is not a number");
      }
      a(i, k) = v.get<double>();
    }
  }
  return SymMatrixd(a);
}

nlohmann::json matrix_to_json(const SymMatrixd& a) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < a.dim(); ++k) row.push_back(a(i, k));
    rows.push_back(row);
  }
  return {{"dim", a.dim()}, {"rows", rows}};
}

void write_grid_csv(std::ostream& os, const SpaceGrid& g) {
  os << (g.dim() == 1 ? "x,value\n" : "x,y,value\n");
  os << std::setprecision(17);
  for (Eigen::Index s = 0; s < g.size(); ++s) {
    const Eigen::VectorXd p = g.point(s);
    for (Eigen::Index a = 0; a < p.size(); ++a) os << p(a) << ',';
    os << g.values(s) << '\n';
  }
}

SpaceGrid read_grid_csv(std::istream& is) {
  const Table t = read_table(is);
  expect_header(t, {{"x", "value"}, {"x", "y", "value"}}, "grid");
  const int dim = static_cast<int>(t.header.size()) - 1;
  SpaceGrid g = grid_from_nodes(t.rows, dim);
  for (Eigen::Index s = 0; s < g.size(); ++s) {
    g.values(s) = t.rows[static_cast<std::size_t>(s)][static_cast<std::size_t>(dim)];
  }
  return g;
}

void write_solution_csv(std::ostream& os, const SampledFamily& u, const SpaceGrid& geometry) {
  if (u.spaceSize() != geometry.size()) {
    throw DomainError("write_solution_csv: family and geometry sizes differ");
  }
  os << (geometry.dim() == 1 ? "t,x,u\n" : "t,x,y,u\n");
  os << std::setprecision(17);
  for (Eigen::Index k = 0; k < u.samples(); ++k) {
    for (Eigen::Index s = 0; s < geometry.size(); ++s) {
      const Eigen::VectorXd p = geometry.point(s);
      os << u.grid(k) << ',';
      for (Eigen::Index a = 0; a < p.size(); ++a) os << p(a) << ',';
      os << u.values(k, s) << '\n';
    }
  }
}

SolutionTable read_solution_csv(std::istream& is) {
  const Table t = read_table(is);
  expect_header(t, {{"t", "x", "u"}, {"t", "x", "y", "u"}}, "solution");
  const int dim = static_cast<int>(t.header.size()) - 2;
  if (t.rows.empty()) throw InputError("csv: solution has no rows");
  std::size_t perSlice = 0;
  while (perSlice < t.rows.size() && t.rows[perSlice][0] == t.rows[0][0]) ++perSlice;
  if (t.rows.size() % perSlice != 0) throw InputError("csv: time slices have unequal sizes");
  const std::size_t slices = t.rows.size() / perSlice;

  std::vector<std::vector<double>> nodes;
  for (std::size_t s = 0; s < perSlice; ++s) {
    nodes.emplace_back(t.rows[s].begin() + 1, t.rows[s].begin() + 1 + dim);
  }
  SolutionTable out{SampledFamily{}, grid_from_nodes(nodes, dim)};
  out.u.grid.resize(static_cast<Eigen::Index>(slices));
  out.u.spaceShape = out.geometry.counts();
  out.u.values.resize(static_cast<Eigen::Index>(slices), static_cast<Eigen::Index>(perSlice));
  for (std::size_t k = 0; k < slices; ++k) {
    const double tk = t.rows[k * perSlice][0];
    out.u.grid(static_cast<Eigen::Index>(k)) = tk;
    for (std::size_t s = 0; s < perSlice; ++s) {
      const auto& row = t.rows[k * perSlice + s];
      if (row[0] != tk) throw InputError("csv: time slice " + std::to_string(k) + " is not contiguous");
      for (int a = 0; a < dim; ++a) {
        if (row[static_cast<std::size_t>(a + 1)] != nodes[s][static_cast<std::size_t>(a)]) {
          throw InputError("csv: time slice " + std::to_string(k) + " lists different space nodes");
        }
      }
      out.u.values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(s)) =
          row[static_cast<std::size_t>(dim + 1)];
    }
  }
  try {
    out.u.validate();
  } catch (const DomainError& e) {
    throw InputError(std::string("csv: ") + e.what());
  }
  return out;
}

nlohmann::json report_to_json(const CheckReport& r) {
  nlohmann::json j = {{"pass", r.pass},
                      {"worstMargin", r.worstMargin},
                      {"nodeCount", r.nodeCount},
                      {"passFraction", r.passFraction},
                      {"tolerance", r.tolerance}};
  if (!r.detail.empty()) j["where"] = r.detail;
  return j;
}

nlohmann::json reports_to_json(const std::vector<CheckReport>& reports) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& r : reports) j[r.name] = report_to_json(r);
  return j;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw InputError("failed writing '" + path + "'");
}

}  // namespace slag::io
