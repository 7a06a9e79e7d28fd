/// @file planner.hpp
/// Tree decompositions of the primal graph, graded project-join tree
/// construction, and the anytime planning policy with its two budgets.

#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <stop_token>
#include <string>
#include <vector>

#include "zddsynth/formula.hpp"
#include "zddsynth/pjt.hpp"

namespace zsynth {

class InvalidDecomposition : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PlanningExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TreeDecomposition {
  std::vector<std::vector<Prop>> bags;  ///< sorted
  std::vector<std::size_t> parent;      ///< kNoNode for the root
  std::size_t root = 0;

  /// Largest bag size minus one, clamped at 0.
  std::size_t width() const;
  std::vector<std::vector<std::size_t>> children() const;
  /// Children before parents.
  std::vector<std::size_t> postorder() const;
};

enum class Heuristic : std::uint8_t { MinFill, Mcs, RandomRestarts };

std::string to_string(Heuristic h);
Heuristic heuristic_from_string(const std::string& s);

struct PlanConfig {
  std::chrono::milliseconds plan_timeout{200'000};
  std::size_t width_target = 200;
  std::uint64_t seed = 0;
  Heuristic heuristic = Heuristic::MinFill;
  /// Fresh tie-break seeds tried before the decomposer gives up.
  std::size_t max_restarts = 32;
};

struct PlanReport {
  std::size_t trees_examined = 0;
  std::size_t best_width = 0;
  std::chrono::milliseconds elapsed{0};
  bool met_target = false;
};

struct PlanResult {
  GradedProjectJoinTree tree;
  PlanReport report;
};

/// Co-occurrence graph over clauses and pure-X clauses.
PrimalGraph primal_graph(const CnfSpec& spec);

/// Simulates elimination in the given order; bag(v) is v with its later
/// neighbours at elimination time, attached below the earliest of them.
TreeDecomposition decomposition_from_order(const PrimalGraph& graph,
                                           const std::vector<Prop>& elimination_order);

/// Human-readable problems; empty when `td` covers `graph` and every clause.
std::vector<std::string> check_decomposition(const TreeDecomposition& td,
                                             const PrimalGraph& graph,
                                             const std::vector<const LiteralSet*>& clauses);

/// Anytime source of decompositions with non-increasing width.
class Decomposer {
 public:
  Decomposer(PrimalGraph graph, PlanConfig config, std::size_t lower_bound = 0);
  std::optional<TreeDecomposition> next(const Deadline& deadline);

 private:
  PrimalGraph graph_;
  PlanConfig config_;
  std::size_t lower_bound_;
  std::size_t attempt_ = 0;
  std::optional<std::size_t> best_;
};

/// Drains a Decomposer until exhaustion or the deadline.
std::vector<TreeDecomposition> decompose(const PrimalGraph& graph, const PlanConfig& config,
                                         const Deadline& deadline);

/// Y-forest from `td_lower`, then an X-tree over the forest roots and the
/// pure-X clauses.
GradedProjectJoinTree build_graded_pjt(const CnfSpec& spec, const TreeDecomposition& td_lower,
                                       const PlanConfig& config);

/// Stream of candidate trees consumed by the planning policy.
class PlanSource {
 public:
  virtual ~PlanSource() = default;
  /// nullopt once exhausted. Implementations should return promptly when
  /// the deadline passes or a stop is requested.
  virtual std::optional<GradedProjectJoinTree> next(const Deadline& deadline,
                                                    std::stop_token stop) = 0;
};

/// Decomposer followed by build_graded_pjt.
class DecompositionSource : public PlanSource {
 public:
  DecompositionSource(const CnfSpec& spec, PlanConfig config);
  std::optional<GradedProjectJoinTree> next(const Deadline& deadline,
                                            std::stop_token stop) override;

 private:
  const CnfSpec& spec_;
  PlanConfig config_;
  Decomposer decomposer_;
};

/// First tree of width at most the target, otherwise the narrowest tree
/// seen before the timeout. Throws PlanningExhausted when none arrived.
PlanResult plan(const CnfSpec& spec, const PlanConfig& config);
PlanResult plan(const CnfSpec& spec, const PlanConfig& config, PlanSource& source);

}  // namespace zsynth
