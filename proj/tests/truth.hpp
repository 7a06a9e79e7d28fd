// Independent brute-force semantics for whole instances, written against
// plain clause lists only.

#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "zddsynth/formula.hpp"

namespace testkit {

/// Value of prop p under a full assignment packed into `row`.
inline bool holds(const std::vector<zsynth::LiteralSet>& cnf, std::uint64_t row) {
  for (const auto& c : cnf) {
    bool sat = false;
    for (const auto& l : c)
      if ((((row >> l.prop) & 1u) != 0) != l.negative) sat = true;
    if (!sat) return false;
  }
  return true;
}

/// Spreads bits of `a` over the given props.
inline std::uint64_t spread(std::uint64_t a, const std::vector<zsynth::Prop>& props) {
  std::uint64_t row = 0;
  for (std::size_t i = 0; i < props.size(); ++i)
    if ((a >> i) & 1u) row |= std::uint64_t{1} << props[i];
  return row;
}

/// Input assignments (bit i = inputs()[i]) for which some output assignment
/// satisfies every clause.
inline std::vector<std::uint64_t> truth_rset(const zsynth::CnfSpec& spec) {
  const auto xs = spec.inputs();
  const auto ys = spec.outputs();
  const auto cnf = spec.all_clauses();
  std::vector<std::uint64_t> out;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << xs.size()); ++a) {
    const std::uint64_t xrow = spread(a, xs);
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << ys.size()); ++b)
      if (holds(cnf, xrow | spread(b, ys))) {
        out.push_back(a);
        break;
      }
  }
  return out;
}

/// Input assignments satisfying a clause list over inputs.
inline std::vector<std::uint64_t> truth_models(const zsynth::CnfSpec& spec,
                                               const std::vector<zsynth::LiteralSet>& cnf) {
  const auto xs = spec.inputs();
  std::vector<std::uint64_t> out;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << xs.size()); ++a)
    if (holds(cnf, spread(a, xs))) out.push_back(a);
  return out;
}

/// Evaluates witness CNFs on an input assignment and then the formula.
inline bool witnesses_hold(const zsynth::CnfSpec& spec,
                           const std::map<zsynth::Prop, std::vector<zsynth::LiteralSet>>& ws,
                           std::uint64_t a) {
  std::uint64_t row = spread(a, spec.inputs());
  const std::uint64_t xrow = row;
  for (const auto& [y, cnf] : ws)
    if (holds(cnf, xrow)) row |= std::uint64_t{1} << y;
  return holds(spec.all_clauses(), row);
}

}  // namespace testkit
