/// @file formula.hpp
/// Problem representation, QDIMACS/DIMACS input, preprocessing and the
/// proposition order used to lay out decision-diagram levels.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "zddsynth/zdd.hpp"

namespace zsynth {

enum class Role : std::uint8_t { Input, Output };

/// A synthesis instance: CNF over inputs X and outputs Y.
struct CnfSpec {
  std::size_t num_props = 0;
  std::vector<Role> roles;          ///< indexed by Prop
  std::vector<LiteralSet> clauses;  ///< each mentions some output after preprocess
  std::vector<LiteralSet> pure_x_clauses;
  std::string name;
  /// Variables with no quantifier line; assigned to Y.
  std::vector<Prop> free_vars;
  /// Set by preprocess when the empty clause is present.
  bool trivially_nullary = false;

  bool is_input(Prop p) const { return roles.at(p) == Role::Input; }
  bool is_output(Prop p) const { return roles.at(p) == Role::Output; }
  std::vector<Prop> inputs() const;
  std::vector<Prop> outputs() const;
  /// Leaf clause i of a project-join tree: clauses first, then pure-X ones.
  const LiteralSet& leaf_clause(std::size_t i) const;
  std::size_t leaf_count() const { return clauses.size() + pure_x_clauses.size(); }
  /// clauses followed by pure_x_clauses.
  std::vector<LiteralSet> all_clauses() const;

  friend bool operator==(const CnfSpec&, const CnfSpec&) = default;
};

/// Co-occurrence graph: one vertex per proposition, an edge between two
/// propositions sharing a clause.
struct PrimalGraph {
  std::vector<std::vector<Prop>> adjacency;  ///< sorted neighbour lists

  std::size_t size() const { return adjacency.size(); }
  std::size_t edge_count() const;
  bool has_edge(Prop a, Prop b) const;
};

/// Builds the graph over `num_props` vertices from the given clauses.
PrimalGraph primal_graph_of(std::size_t num_props,
                            const std::vector<const LiteralSet*>& clauses);

/// A permutation of all propositions; position 0 is the top of the diagram.
struct PropOrder {
  std::vector<Prop> order;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class SyntaxError : public ParseError {
 public:
  using ParseError::ParseError;
};
class QuantifierError : public ParseError {
 public:
  using ParseError::ParseError;
};
class CountMismatch : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Reads a forall-exists QDIMACS problem: universals become X, existentials
/// Y, and unquantified variables Y (recorded in free_vars).
CnfSpec parse_qdimacs(std::string_view text, std::string name = {});

/// Plain DIMACS (quantifier lines still honoured) with an optional JSON
/// sidecar {"inputs":[...],"outputs":[...]} that overrides them.
CnfSpec parse_dimacs(std::string_view text, std::optional<std::string_view> sidecar_json,
                     std::string name = {});

/// QDIMACS text with an `a` line for X and an `e` line for Y.
std::string render_qdimacs(const CnfSpec& spec);

/// Canonicalises literal sets, drops tautologies, duplicates and subsumed
/// clauses, and moves clauses without outputs to pure_x_clauses.
CnfSpec preprocess(const CnfSpec& spec);

/// Maximum-cardinality search over the primal graph; lowest id starts and
/// breaks ties.
PropOrder mcs_order(const CnfSpec& spec);

/// Conjunction of every clause, pure-X clauses included.
zdd::Family build_family(const CnfSpec& spec, zdd::Manager& manager);

/// Sorted, deduplicated copy; nullopt if tautological.
std::optional<LiteralSet> normalize_clause(LiteralSet clause);

}  // namespace zsynth
