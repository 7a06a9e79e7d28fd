/// @file witness_io.hpp
/// Witness documents (JSON and per-output DIMACS) and realizability-set
/// export. Variables are written as x<v> for inputs and y<v> for outputs,
/// v being the DIMACS number; a leading '-' negates.

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "zddsynth/formula.hpp"
#include "zddsynth/oracle.hpp"
#include "zddsynth/synthesis.hpp"

namespace zsynth {

struct WitnessDocument {
  std::string instance;
  std::string mode;
  std::vector<Prop> synth_order;
  std::map<Prop, std::vector<LiteralSet>> cnf;
  std::map<Prop, std::vector<LiteralSet>> dnf;

  WitnessCnfs cnfs() const { return cnf; }
};

std::string literal_name(Literal l, const CnfSpec& spec);
/// Inverse of literal_name; throws SyntaxError on malformed names or when
/// the prefix disagrees with the variable's role.
Literal parse_literal_name(std::string_view name, const CnfSpec& spec);

WitnessDocument materialize(const zdd::Manager& m, const WitnessSet& ws, std::string instance,
                            std::string mode);

std::string emit_witnesses(const WitnessDocument& doc, const CnfSpec& spec);
WitnessDocument parse_witnesses(std::string_view json, const CnfSpec& spec);

/// One output's CNF witness as a DIMACS file over the instance's numbering.
std::string witness_dimacs(const WitnessDocument& doc, Prop y, const CnfSpec& spec);

/// Realizability set as DIMACS over the instance's numbering.
std::string rset_dimacs(const std::vector<LiteralSet>& rset, const CnfSpec& spec);

}  // namespace zsynth
