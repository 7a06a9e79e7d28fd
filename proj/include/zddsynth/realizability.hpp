/// @file realizability.hpp
/// Bottom-up valuations over Y-subtrees, realizability-set assembly and
/// full / partial / nullary classification.

#pragma once

#include <string>
#include <unordered_map>

#include "zddsynth/formula.hpp"
#include "zddsynth/pjt.hpp"
#include "zddsynth/zdd.hpp"

namespace zsynth {

enum class Outcome : std::uint8_t { FullyRealizable, PartiallyRealizable, NullaryRealizable };

/// FULLY_REALIZABLE, PARTIALLY_REALIZABLE or NULLARY_REALIZABLE.
std::string to_string(Outcome o);

struct Valuations {
  std::unordered_map<NodeIndex, zdd::Family> pre;
  std::unordered_map<NodeIndex, zdd::Family> post;
};

enum class ValuationStatus : std::uint8_t { Ok, NullaryDetected };

/// Family of one leaf: its summary, or its clause.
zdd::Family leaf_family(zdd::Manager& m, const PjtNode& leaf, const CnfSpec& spec);

/// Fills pre/post for n and its descendants, children first; labels are
/// projected in variable order. Stops as soon as a valuation is falsity.
ValuationStatus compute_valuations(zdd::Manager& m, const GradedProjectJoinTree& t,
                                   const CnfSpec& spec, NodeIndex n, Valuations& vals);

struct RSet {
  bool nullary = false;
  zdd::Family rset;
  /// Y-trees collapsed into leaves carrying their post-valuations.
  GradedProjectJoinTree t_new;
};

/// Conjunction of the Y-tree roots' post-valuations and the pure-X clauses.
RSet get_rset(zdd::Manager& m, const GradedProjectJoinTree& t, const CnfSpec& spec,
              Valuations& vals);

struct RealizabilityOutcome {
  Outcome kind = Outcome::FullyRealizable;
  /// empty() when fully realizable, unit() when nullary.
  zdd::Family rset;
};

RealizabilityOutcome check_partial(zdd::Manager& m, const GradedProjectJoinTree& t,
                                   const CnfSpec& spec, Valuations& vals);

/// Reference path: project every output out of the whole formula.
RealizabilityOutcome classify_monolithic(zdd::Manager& m, const CnfSpec& spec);

}  // namespace zsynth
