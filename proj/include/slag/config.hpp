#pragma once

// JSON run configuration shared by the config-driven subcommands.
//
//   {
//     "n": 1,
//     "domain": {"min": [-1], "max": [1]},
//     "grid": {"nx": 201, "nt": 101, "ntau": 401},
//     "phase": "3*pi/4",
//     "boundary": {"g": "x^2/2 + t"},
//     "output": {"solution": "u.csv", "diagnostics": "diag.json"}
//   }
//
// Numbers may be given as JSON numbers or as constant expressions in n and pi.
// Boundary data are expressions in t, x, y (and n) or sampled arrays.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "slag/dsl.hpp"
#include "slag/grid.hpp"
#include "slag/solvers.hpp"

namespace slag {

struct Tolerances {
  double band = 1e-9;     ///< membership band
  double locus = 1e-9;    ///< degenerate-locus detection
  double sweep = 1e-12;   ///< envelope sweep stop
  double newton = 1e-6;   ///< Dirichlet residual target
  double cap = 1e-9;      ///< cap membership slack
};

struct RunConfig {
  int n = 1;
  std::vector<double> lower;
  std::vector<double> upper;
  Eigen::Index nx = 0;
  Eigen::Index ny = 0;
  Eigen::Index nt = 101;
  Eigen::Index ntau = 401;
  Eigen::Index nr = 0;  ///< lateral time samples; defaults to nt
  nlohmann::json phaseSpec;  ///< as written (number or expression)
  double phase = 0.0;        ///< evaluated
  nlohmann::json boundary = nlohmann::json::object();
  std::optional<SlopeRange> tauRange;
  int threads = 1;
  std::uint64_t seed = 0;
  CapCheck capCheck = CapCheck::Error;
  Tolerances tol;
  long maxSweeps = 100000;
  int maxNewton = 100;
  std::string outGrid;
  std::string outSolution;
  std::string outDiagnostics;
  std::string outConfig;

  /// Re-evaluates `phase` from `phaseSpec`.
  void setPhase(const nlohmann::json& spec);
  SpaceGrid spaceGrid() const;
  /// Fully resolved configuration; parsing it yields an identical RunConfig.
  nlohmann::json echo() const;
};

/// Throws InputError naming the offending field.
RunConfig parse_config(const nlohmann::json& j);

/// g from boundary.g, or from boundary.cap_bottom / cap_top / lateral.
BoundaryData boundary_data(const RunConfig& cfg);

/// v from boundary.obstacle and f from boundary.trace, phase a = cfg.phase.
EnvelopeProblem envelope_problem(const RunConfig& cfg);

/// Dirichlet trace from boundary.trace, ordered as boundaryIndices().
Eigen::VectorXd dirichlet_trace(const RunConfig& cfg);

}  // namespace slag
