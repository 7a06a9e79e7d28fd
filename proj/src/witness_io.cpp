#include "zddsynth/witness_io.hpp"

#include <charconv>
#include <sstream>

#include "json.hpp"

namespace zsynth {

namespace {

using Json = nlohmann::ordered_json;

Json clauses_to_json(const std::vector<LiteralSet>& clauses, const CnfSpec& spec) {
  Json out = Json::array();
  for (const auto& c : clauses) {
    Json row = Json::array();
    for (const Literal& l : c) row.push_back(literal_name(l, spec));
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<LiteralSet> clauses_from_json(const nlohmann::json& j, const CnfSpec& spec) {
  std::vector<LiteralSet> out;
  for (const auto& row : j) {
    LiteralSet c;
    for (const auto& name : row) c.push_back(parse_literal_name(name.get<std::string>(), spec));
    std::sort(c.begin(), c.end());
    out.push_back(std::move(c));
  }
  return out;
}

std::string prop_name(Prop p, const CnfSpec& spec) {
  return literal_name(Literal::pos(p), spec);
}

std::string dimacs_body(const std::vector<LiteralSet>& clauses, std::size_t num_props) {
  std::ostringstream out;
  out << "p cnf " << num_props << ' ' << clauses.size() << '\n';
  for (const auto& c : clauses) {
    for (const Literal& l : c) out << l.to_dimacs() << ' ';
    out << "0\n";
  }
  return out.str();
}

}  // namespace

std::string literal_name(Literal l, const CnfSpec& spec) {
  std::string s = l.negative ? "-" : "";
  s += spec.is_input(l.prop) ? 'x' : 'y';
  s += std::to_string(l.prop + 1);
  return s;
}

Literal parse_literal_name(std::string_view name, const CnfSpec& spec) {
  const std::string original(name);
  bool negative = false;
  if (!name.empty() && name.front() == '-') {
    negative = true;
    name.remove_prefix(1);
  }
  if (name.size() < 2 || (name.front() != 'x' && name.front() != 'y'))
    throw SyntaxError("bad literal name '" + original + "'");
  const bool input = name.front() == 'x';
  name.remove_prefix(1);
  unsigned long v = 0;
  const auto [ptr, ec] = std::from_chars(name.data(), name.data() + name.size(), v);
  if (ec != std::errc() || ptr != name.data() + name.size() || v == 0 || v > spec.num_props)
    throw SyntaxError("bad literal name '" + original + "'");
  const Prop p = static_cast<Prop>(v - 1);
  if (spec.is_input(p) != input)
    throw SyntaxError("literal '" + original + "' has the wrong role prefix");
  return {p, negative};
}

WitnessDocument materialize(const zdd::Manager& m, const WitnessSet& ws, std::string instance,
                            std::string mode) {
  WitnessDocument doc;
  doc.instance = std::move(instance);
  doc.mode = std::move(mode);
  doc.synth_order = ws.synth_order;
  for (const auto& [y, w] : ws.witnesses) {
    doc.cnf[y] = m.enumerate(w.cnf);
    doc.dnf[y] = m.enumerate(w.dnf);
  }
  return doc;
}

std::string emit_witnesses(const WitnessDocument& doc, const CnfSpec& spec) {
  Json j;
  j["instance"] = doc.instance;
  j["mode"] = doc.mode;
  Json order = Json::array();
  for (Prop y : doc.synth_order) order.push_back(prop_name(y, spec));
  j["synth_order"] = std::move(order);
  Json ws = Json::object();
  for (const auto& [y, cnf] : doc.cnf) {
    Json w;
    w["cnf"] = clauses_to_json(cnf, spec);
    const auto d = doc.dnf.find(y);
    w["dnf"] = clauses_to_json(d == doc.dnf.end() ? std::vector<LiteralSet>{} : d->second, spec);
    ws[prop_name(y, spec)] = std::move(w);
  }
  j["witnesses"] = std::move(ws);
  return j.dump(1) + "\n";
}

WitnessDocument parse_witnesses(std::string_view json, const CnfSpec& spec) {
  WitnessDocument doc;
  try {
    const auto j = nlohmann::json::parse(json);
    doc.instance = j.value("instance", "");
    doc.mode = j.value("mode", "");
    if (j.contains("synth_order"))
      for (const auto& name : j.at("synth_order")) {
        const Literal l = parse_literal_name(name.get<std::string>(), spec);
        doc.synth_order.push_back(l.prop);
      }
    for (const auto& [name, w] : j.at("witnesses").items()) {
      const Literal l = parse_literal_name(name, spec);
      if (l.negative || spec.is_input(l.prop))
        throw SyntaxError("witness key '" + name + "' is not an output");
      doc.cnf[l.prop] = clauses_from_json(w.at("cnf"), spec);
      if (w.contains("dnf")) doc.dnf[l.prop] = clauses_from_json(w.at("dnf"), spec);
    }
  } catch (const nlohmann::json::exception& e) {
    throw SyntaxError(std::string("witness document: ") + e.what());
  }
  return doc;
}

std::string witness_dimacs(const WitnessDocument& doc, Prop y, const CnfSpec& spec) {
  std::ostringstream out;
  out << "c witness for " << prop_name(y, spec);
  if (!doc.instance.empty()) out << " of " << doc.instance;
  out << '\n';
  out << dimacs_body(doc.cnf.at(y), spec.num_props);
  return out.str();
}

std::string rset_dimacs(const std::vector<LiteralSet>& rset, const CnfSpec& spec) {
  std::ostringstream out;
  out << "c realizability set of " << (spec.name.empty() ? "<stdin>" : spec.name) << '\n';
  out << "c inputs:";
  for (Prop x : spec.inputs()) out << ' ' << x + 1;
  out << '\n';
  out << dimacs_body(rset, spec.num_props);
  return out.str();
}

}  // namespace zsynth
