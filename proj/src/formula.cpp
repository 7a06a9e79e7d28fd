#include "zddsynth/formula.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <set>
#include <sstream>

#include "json.hpp"

namespace zsynth {

std::vector<Prop> CnfSpec::inputs() const {
  std::vector<Prop> out;
  for (Prop p = 0; p < roles.size(); ++p)
    if (roles[p] == Role::Input) out.push_back(p);
  return out;
}

std::vector<Prop> CnfSpec::outputs() const {
  std::vector<Prop> out;
  for (Prop p = 0; p < roles.size(); ++p)
    if (roles[p] == Role::Output) out.push_back(p);
  return out;
}

const LiteralSet& CnfSpec::leaf_clause(std::size_t i) const {
  if (i < clauses.size()) return clauses[i];
  return pure_x_clauses.at(i - clauses.size());
}

std::vector<LiteralSet> CnfSpec::all_clauses() const {
  std::vector<LiteralSet> out = clauses;
  out.insert(out.end(), pure_x_clauses.begin(), pure_x_clauses.end());
  return out;
}

std::size_t PrimalGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& a : adjacency) n += a.size();
  return n / 2;
}

bool PrimalGraph::has_edge(Prop a, Prop b) const {
  const auto& adj = adjacency.at(a);
  return std::binary_search(adj.begin(), adj.end(), b);
}

PrimalGraph primal_graph_of(std::size_t num_props,
                            const std::vector<const LiteralSet*>& clauses) {
  PrimalGraph g;
  g.adjacency.resize(num_props);
  for (const LiteralSet* c : clauses) {
    for (std::size_t i = 0; i < c->size(); ++i)
      for (std::size_t j = i + 1; j < c->size(); ++j) {
        const Prop a = (*c)[i].prop;
        const Prop b = (*c)[j].prop;
        if (a == b) continue;
        g.adjacency[a].push_back(b);
        g.adjacency[b].push_back(a);
      }
  }
  for (auto& adj : g.adjacency) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  return g;
}

std::optional<LiteralSet> normalize_clause(LiteralSet clause) {
  std::sort(clause.begin(), clause.end());
  clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
  for (std::size_t i = 1; i < clause.size(); ++i)
    if (clause[i].prop == clause[i - 1].prop) return std::nullopt;
  return clause;
}

namespace {

struct Tokenizer {
  std::string_view line;
  std::size_t pos = 0;
  std::size_t line_no = 0;

  std::optional<long> next_int() {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos >= line.size()) return std::nullopt;
    long value = 0;
    const char* begin = line.data() + pos;
    const char* end = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || (ptr != end && !std::isspace(static_cast<unsigned char>(*ptr))))
      throw SyntaxError("line " + std::to_string(line_no) + ": expected an integer");
    pos += static_cast<std::size_t>(ptr - begin);
    return value;
  }
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

CnfSpec parse_impl(std::string_view text, std::string name) {
  CnfSpec spec;
  spec.name = std::move(name);
  std::optional<std::size_t> declared_clauses;
  std::vector<int> quantified;  // 0 none, 1 universal, 2 existential
  int blocks = 0;
  char last_block = 0;
  bool in_clauses = false;
  LiteralSet current;
  bool open_clause = false;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view raw = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == 'c' || line.front() == '%') {
      if (end == text.size()) break;
      continue;
    }
    if (line.front() == 'p') {
      if (declared_clauses) throw SyntaxError("line " + std::to_string(line_no) + ": duplicate header");
      std::istringstream in{std::string(line)};
      std::string p, fmt;
      long vars = -1, count = -1;
      if (!(in >> p >> fmt >> vars >> count) || p != "p" || fmt != "cnf" || vars < 0 ||
          count < 0)
        throw SyntaxError("line " + std::to_string(line_no) + ": malformed header");
      std::string extra;
      if (in >> extra) throw SyntaxError("line " + std::to_string(line_no) + ": malformed header");
      spec.num_props = static_cast<std::size_t>(vars);
      declared_clauses = static_cast<std::size_t>(count);
      quantified.assign(spec.num_props, 0);
      if (end == text.size()) break;
      continue;
    }
    if (!declared_clauses)
      throw SyntaxError("line " + std::to_string(line_no) + ": content before header");

    Tokenizer tok{line, 0, line_no};
    if (line.front() == 'a' || line.front() == 'e') {
      if (in_clauses)
        throw SyntaxError("line " + std::to_string(line_no) + ": quantifier after clauses");
      const char kind = line.front();
      if (kind == last_block) {
        // Repeated prefix letters merge into one block.
      } else {
        ++blocks;
        if (kind == 'a' && last_block == 'e')
          throw QuantifierError("line " + std::to_string(line_no) +
                                ": universal block after existential block");
        if (blocks > 2)
          throw QuantifierError("line " + std::to_string(line_no) + ": more than two blocks");
        last_block = kind;
      }
      tok.pos = 1;
      bool terminated = false;
      while (auto v = tok.next_int()) {
        if (terminated) throw SyntaxError("line " + std::to_string(line_no) + ": data after 0");
        if (*v == 0) {
          terminated = true;
          continue;
        }
        if (*v < 0 || static_cast<std::size_t>(*v) > spec.num_props)
          throw SyntaxError("line " + std::to_string(line_no) + ": variable out of range");
        int& q = quantified[static_cast<std::size_t>(*v - 1)];
        if (q != 0)
          throw QuantifierError("line " + std::to_string(line_no) + ": variable " +
                                std::to_string(*v) + " quantified twice");
        q = kind == 'a' ? 1 : 2;
      }
      if (!terminated)
        throw SyntaxError("line " + std::to_string(line_no) + ": quantifier line lacks 0");
    } else {
      in_clauses = true;
      while (auto v = tok.next_int()) {
        if (*v == 0) {
          spec.clauses.push_back(current);
          std::sort(spec.clauses.back().begin(), spec.clauses.back().end());
          spec.clauses.back().erase(
              std::unique(spec.clauses.back().begin(), spec.clauses.back().end()),
              spec.clauses.back().end());
          current.clear();
          open_clause = false;
          continue;
        }
        if (static_cast<std::size_t>(std::labs(*v)) > spec.num_props)
          throw SyntaxError("line " + std::to_string(line_no) + ": variable out of range");
        current.push_back(Literal::from_dimacs(static_cast<int>(*v)));
        open_clause = true;
      }
    }
    if (end == text.size()) break;
  }
  if (!declared_clauses) throw SyntaxError("missing 'p cnf' header");
  if (open_clause) throw SyntaxError("last clause is not terminated by 0");
  if (spec.clauses.size() != *declared_clauses)
    throw CountMismatch("header declares " + std::to_string(*declared_clauses) +
                        " clauses, found " + std::to_string(spec.clauses.size()));

  spec.roles.assign(spec.num_props, Role::Output);
  for (Prop p = 0; p < spec.num_props; ++p) {
    if (quantified[p] == 1) spec.roles[p] = Role::Input;
    if (quantified[p] == 0) spec.free_vars.push_back(p);
  }
  return spec;
}

}  // namespace

CnfSpec parse_qdimacs(std::string_view text, std::string name) {
  return parse_impl(text, std::move(name));
}

CnfSpec parse_dimacs(std::string_view text, std::optional<std::string_view> sidecar_json,
                     std::string name) {
  CnfSpec spec = parse_impl(text, std::move(name));
  if (!sidecar_json) return spec;
  nlohmann::json side;
  try {
    side = nlohmann::json::parse(*sidecar_json);
  } catch (const nlohmann::json::exception& e) {
    throw SyntaxError(std::string("sidecar: ") + e.what());
  }
  std::vector<int> assigned(spec.num_props, 0);
  auto apply = [&](const char* key, int tag) {
    if (!side.contains(key)) return;
    if (!side[key].is_array()) throw SyntaxError(std::string("sidecar: '") + key + "' must be a list");
    for (const auto& v : side[key]) {
      if (!v.is_number_integer()) throw SyntaxError("sidecar: variables must be integers");
      const long var = v.get<long>();
      if (var < 1 || static_cast<std::size_t>(var) > spec.num_props)
        throw SyntaxError("sidecar: variable out of range");
      auto& slot = assigned[static_cast<std::size_t>(var - 1)];
      if (slot != 0 && slot != tag)
        throw QuantifierError("sidecar: variable " + std::to_string(var) +
                              " is both input and output");
      slot = tag;
    }
  };
  apply("inputs", 1);
  apply("outputs", 2);
  spec.free_vars.clear();
  for (Prop p = 0; p < spec.num_props; ++p) {
    spec.roles[p] = assigned[p] == 1 ? Role::Input : Role::Output;
    if (assigned[p] == 0) spec.free_vars.push_back(p);
  }
  return spec;
}

std::string render_qdimacs(const CnfSpec& spec) {
  std::ostringstream out;
  if (!spec.name.empty()) out << "c " << spec.name << '\n';
  out << "p cnf " << spec.num_props << ' ' << spec.leaf_count() << '\n';
  std::vector<bool> free(spec.num_props, false);
  for (Prop p : spec.free_vars) free[p] = true;
  std::string a, e;
  for (Prop p = 0; p < spec.num_props; ++p) {
    if (free[p]) continue;
    (spec.is_input(p) ? a : e) += ' ' + std::to_string(p + 1);
  }
  if (!a.empty()) out << 'a' << a << " 0\n";
  if (!e.empty()) out << 'e' << e << " 0\n";
  auto write = [&](const std::vector<LiteralSet>& list) {
    for (const auto& c : list) {
      for (const Literal& l : c) out << l.to_dimacs() << ' ';
      out << "0\n";
    }
  };
  write(spec.clauses);
  write(spec.pure_x_clauses);
  return out.str();
}

CnfSpec preprocess(const CnfSpec& spec) {
  CnfSpec out = spec;
  out.clauses.clear();
  out.pure_x_clauses.clear();
  out.trivially_nullary = false;

  std::vector<LiteralSet> kept;
  for (const auto& c : spec.all_clauses())
    if (auto n = normalize_clause(c)) kept.push_back(std::move(*n));

  // Visit shortest clauses first so every subsumer is indexed before the
  // clauses it subsumes; ties by content make duplicates adjacent.
  std::vector<std::size_t> by_size(kept.size());
  for (std::size_t i = 0; i < by_size.size(); ++i) by_size[i] = i;
  std::stable_sort(by_size.begin(), by_size.end(), [&](std::size_t a, std::size_t b) {
    if (kept[a].size() != kept[b].size()) return kept[a].size() < kept[b].size();
    return kept[a] < kept[b];
  });

  auto key = [&](Literal l) { return 2 * static_cast<std::size_t>(l.prop) + (l.negative ? 1 : 0); };
  std::vector<std::vector<std::size_t>> watch(2 * spec.num_props);
  std::vector<bool> alive(kept.size(), false);
  bool have_empty = false;
  for (std::size_t idx : by_size) {
    const LiteralSet& c = kept[idx];
    if (have_empty) break;
    bool subsumed = false;
    for (const Literal& l : c) {
      for (std::size_t d : watch[key(l)]) {
        if (std::includes(c.begin(), c.end(), kept[d].begin(), kept[d].end())) {
          subsumed = true;
          break;
        }
      }
      if (subsumed) break;
    }
    if (subsumed) continue;
    alive[idx] = true;
    if (c.empty()) {
      have_empty = true;
      continue;
    }
    watch[key(c.front())].push_back(idx);
  }

  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (!alive[i]) continue;
    const bool has_output = std::any_of(kept[i].begin(), kept[i].end(),
                                        [&](Literal l) { return spec.is_output(l.prop); });
    if (has_output)
      out.clauses.push_back(std::move(kept[i]));
    else
      out.pure_x_clauses.push_back(std::move(kept[i]));
  }
  if (have_empty) {
    out.trivially_nullary = true;
    out.clauses.clear();
    out.pure_x_clauses.assign(1, LiteralSet{});
  }
  return out;
}

PropOrder mcs_order(const CnfSpec& spec) {
  std::vector<const LiteralSet*> refs;
  for (const auto& c : spec.clauses) refs.push_back(&c);
  for (const auto& c : spec.pure_x_clauses) refs.push_back(&c);
  const PrimalGraph g = primal_graph_of(spec.num_props, refs);

  // Ordered by (-numbered neighbours, id): begin() is the next pick.
  std::set<std::pair<long, Prop>> queue;
  std::vector<long> weight(spec.num_props, 0);
  std::vector<bool> numbered(spec.num_props, false);
  for (Prop p = 0; p < spec.num_props; ++p) queue.insert({0, p});

  PropOrder result;
  result.order.reserve(spec.num_props);
  while (!queue.empty()) {
    const Prop v = queue.begin()->second;
    queue.erase(queue.begin());
    numbered[v] = true;
    result.order.push_back(v);
    for (Prop u : g.adjacency[v]) {
      if (numbered[u]) continue;
      queue.erase({-weight[u], u});
      ++weight[u];
      queue.insert({-weight[u], u});
    }
  }
  return result;
}

zdd::Family build_family(const CnfSpec& spec, zdd::Manager& manager) {
  return manager.clauses(spec.all_clauses(), /*strict=*/true);
}

}  // namespace zsynth
