/// @file oracle.hpp
/// Exhaustive ground truth for small instances, plus instance generators.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zddsynth/formula.hpp"
#include "zddsynth/realizability.hpp"

namespace zsynth {

class TooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Witness CNFs as explicit clause lists over inputs.
using WitnessCnfs = std::map<Prop, std::vector<LiteralSet>>;

/// Assignment over a list of propositions: bit i is the value of props[i].
using Assignment = std::uint64_t;

struct OracleVerdict {
  Outcome kind = Outcome::FullyRealizable;
  std::vector<Prop> inputs;              ///< bit order of the assignments
  std::vector<Assignment> rset_assignments;  ///< ascending
};

/// Enumerates all of 2^(X+Y); refuses more than 20 propositions.
OracleVerdict classify_bruteforce(const CnfSpec& spec);

struct WitnessCheck {
  bool pass = true;
  /// Offending input assignment, bit order as CnfSpec::inputs().
  std::optional<Assignment> counterexample;
};

/// For every input assignment in the realizability set, evaluates the
/// witnesses and then the formula. Refuses more than 20 inputs.
WitnessCheck verify_witnesses(const CnfSpec& spec, const WitnessCnfs& witnesses);

/// Satisfying assignments of `cnf` over `vars` (at most 20), ascending.
std::vector<Assignment> models_over(const std::vector<LiteralSet>& cnf,
                                    const std::vector<Prop>& vars);

/// True when every clause has a literal made true by `value`.
bool evaluate_cnf(const std::vector<LiteralSet>& cnf, const std::vector<bool>& value);

struct RandomSpecParams {
  std::size_t num_x = 2;
  std::size_t num_y = 2;
  std::size_t num_clauses = 4;
  std::size_t max_width = 3;
  std::uint64_t seed = 0;
  /// When set and num_x > 0, the first clause is drawn over inputs only.
  bool allow_pure_x = false;
};

/// Inputs are DIMACS 1..num_x, outputs follow. Returned preprocessed.
CnfSpec gen_random(const RandomSpecParams& params);

/// chain, mutex-like or qshifter-like; deterministic in n.
CnfSpec gen_family(const std::string& name, std::size_t n);

}  // namespace zsynth
