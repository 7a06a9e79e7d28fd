/// @file synthesis.hpp
/// Witness construction: single-output witnesses, the monolithic
/// project-then-substitute pipeline, and the tree-guided dynamic program.

#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "zddsynth/formula.hpp"
#include "zddsynth/pjt.hpp"
#include "zddsynth/realizability.hpp"
#include "zddsynth/zdd.hpp"

namespace zsynth {

class MissingValuations : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// g as a CNF and its equivalent DNF. Truth is (empty, empty); falsity is
/// (unit, empty) and its DNF is never consulted.
struct Witness {
  zdd::Family cnf;
  zdd::Family dnf;
};

struct WitnessSet {
  std::map<Prop, Witness> witnesses;
  std::vector<Prop> synth_order;
};

/// Pairs a CNF with its DNF, using the degenerate encodings for constants.
Witness make_witness(zdd::Manager& m, zdd::Family cnf);

/// The negative selection of z on y, i.e. y := the clauses that contain !y.
Witness witness_single(zdd::Manager& m, zdd::Family z, Prop y);

/// Projects `y_order` out one by one, then fixes witnesses in reverse,
/// substituting those already fixed. Propositions outside `y_order` act as
/// inputs.
WitnessSet synth_monolithic(zdd::Manager& m, zdd::Family z, const std::vector<Prop>& y_order);

/// Solves each Y-graded node on its pre-valuation, Y-tree roots first, and
/// rewrites new witnesses with the ancestors' final ones.
WitnessSet dp_synth(zdd::Manager& m, const GradedProjectJoinTree& t, const Valuations& vals,
                    const CnfSpec& spec);

/// Replaces every witnessed output in z by its witness.
zdd::Family apply_witnesses(zdd::Manager& m, zdd::Family z, const WitnessSet& ws);

}  // namespace zsynth
