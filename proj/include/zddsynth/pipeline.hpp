/// @file pipeline.hpp
/// plan -> execute -> emit, shared by the command line tool and the Python
/// module.

#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "zddsynth/formula.hpp"
#include "zddsynth/pjt.hpp"
#include "zddsynth/planner.hpp"
#include "zddsynth/realizability.hpp"
#include "zddsynth/witness_io.hpp"

namespace zsynth {

enum class Mode : std::uint8_t { Dp, Monolithic };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

class InvalidTree : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunOptions {
  PlanConfig plan;
  std::chrono::milliseconds exec_timeout{7'200'000};
  Mode mode = Mode::Dp;
  bool synthesize = false;
  /// Use this tree instead of planning (dp mode only).
  std::optional<GradedProjectJoinTree> tree;
  /// Largest realizability set materialised as clauses.
  std::size_t rset_cap = std::size_t{1} << 16;
};

struct RunStats {
  std::string instance;
  std::string mode;
  /// FULLY_REALIZABLE, PARTIALLY_REALIZABLE, NULLARY_REALIZABLE,
  /// PLANNING_EXHAUSTED or TIMEOUT.
  std::string outcome;
  double parse_ms = 0;
  double plan_ms = 0;
  double exec_ms = 0;
  double total_ms = 0;
  std::size_t pjt_width = 0;
  std::size_t peak_nodes = 0;
  std::size_t trees_examined = 0;
  bool met_target = false;
  std::uint64_t seed = 0;
  /// Unquantified variables that were treated as outputs.
  std::vector<Prop> free_vars;
};

struct RunResult {
  RunStats stats;
  std::optional<Outcome> outcome;
  std::vector<LiteralSet> rset;
  bool rset_truncated = false;
  std::optional<GradedProjectJoinTree> tree;
  std::optional<WitnessDocument> witnesses;
};

/// `spec` must be preprocessed. Never throws for planning exhaustion or
/// timeouts; those become the outcome string.
RunResult run_pipeline(const CnfSpec& spec, const RunOptions& options);

/// Keys in CSV column order, then trees_examined, met_target, seed,
/// free_vars.
std::string stats_json(const RunStats& s);
std::string stats_csv_header();
std::string stats_csv_row(const RunStats& s);

}  // namespace zsynth
