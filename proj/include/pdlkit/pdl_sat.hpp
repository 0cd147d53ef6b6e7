#pragma once

// Complete satisfiability for test-free PDL.
//
// Formulas are put in negation normal form and expanded on demand into
// Hintikka sets, which form an and-or graph: a set needs, for each of its
// atomic diamonds, one surviving successor set. Sets are then eliminated
// until every remaining one has its demands met and every <g*>f it contains
// reaches a set holding f along g*-paths of the surviving graph. Iteration
// bodies are first rewritten to be free of empty paths, so expansion never
// chases its own tail inside one set.
//
// The surviving graph restricted to what the root reaches is returned as
// the witness and re-checked against the input formula.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "pdlkit/decision.hpp"
#include "pdlkit/error.hpp"
#include "pdlkit/model.hpp"
#include "pdlkit/semantics.hpp"
#include "pdlkit/syntax.hpp"

namespace pdlkit {

// Fischer-Ladner closure of a test-free PDL formula. Members are the formula
// itself, its subformulas, falsum, and the box unfoldings
//   [a;b]f -> [a][b]f,   [a u b]f -> [a]f, [b]f,   [a*]f -> f, [a][a*]f.
struct ClosureSet {
  std::vector<Formula> members;
  bool contains(const Formula& f) const {
    return std::find(members.begin(), members.end(), f) != members.end();
  }
  std::size_t size() const noexcept { return members.size(); }
};

inline ClosureSet fl_closure(const Formula& phi) {
  ClosureSet out;
  std::unordered_map<Formula, bool, FormulaHash> seen;
  std::vector<Formula> todo{phi, Formula::falsum()};
  while (!todo.empty()) {
    Formula f = todo.back();
    todo.pop_back();
    if (!seen.emplace(f, true).second) continue;
    out.members.push_back(f);
    switch (f.kind()) {
      case Formula::Kind::Var:
      case Formula::Kind::Falsum: break;
      case Formula::Kind::Implies:
        todo.push_back(f.lhs());
        todo.push_back(f.rhs());
        break;
      case Formula::Kind::Box: {
        const Program& a = f.program();
        const Formula& g = f.body();
        switch (a.kind()) {
          case Program::Kind::Atomic: todo.push_back(g); break;
          case Program::Kind::Seq: todo.push_back(Formula::box(a.lhs(), Formula::box(a.rhs(), g))); break;
          case Program::Kind::Choice:
            todo.push_back(Formula::box(a.lhs(), g));
            todo.push_back(Formula::box(a.rhs(), g));
            break;
          case Program::Kind::Star:
            todo.push_back(g);
            todo.push_back(Formula::box(a.inner(), f));
            break;
          default:
            throw DialectError("closure is defined for test-free PDL only; found " +
                               std::string(constructor_name(a.kind())));
        }
        break;
      }
    }
  }
  return out;
}

struct PdlSatOptions {
  std::size_t max_nodes = 200000;
};

namespace detail {

constexpr std::uint32_t kNone = 0xffffffffu;

class NnfTable {
 public:
  enum class K : std::uint8_t { True, False, Pos, Neg, And, Or, Box, Dia };
  enum class P : std::uint8_t { Atom, Seq, Choice, Star };
  struct F {
    K kind;
    std::uint32_t a, b, prog;
  };
  struct Prog {
    P kind;
    std::uint32_t a, b;
    bool nullable;
  };

  NnfTable() {
    intern({K::True, 0, 0, kNone});
    intern({K::False, 0, 0, kNone});
  }

  static constexpr std::uint32_t top = 0, bottom = 1;

  const F& at(std::uint32_t f) const { return formulas_[f]; }
  const Prog& prog(std::uint32_t p) const { return programs_[p]; }
  std::size_t size() const noexcept { return formulas_.size(); }

  std::uint32_t literal(std::uint32_t v, bool positive) { return intern({positive ? K::Pos : K::Neg, v, 0, kNone}); }
  std::uint32_t complement_literal(std::uint32_t f) {
    const F& x = formulas_[f];
    return literal(x.a, x.kind == K::Neg);
  }
  std::uint32_t conj(std::uint32_t x, std::uint32_t y) {
    if (x == bottom || y == bottom) return bottom;
    if (x == top) return y;
    if (y == top || x == y) return x;
    return intern({K::And, x, y, kNone});
  }
  std::uint32_t disj(std::uint32_t x, std::uint32_t y) {
    if (x == top || y == top) return top;
    if (x == bottom) return y;
    if (y == bottom || x == y) return x;
    return intern({K::Or, x, y, kNone});
  }
  std::uint32_t box(std::uint32_t p, std::uint32_t f) { return f == top ? top : intern({K::Box, f, 0, p}); }
  std::uint32_t dia(std::uint32_t p, std::uint32_t f) { return f == bottom ? bottom : intern({K::Dia, f, 0, p}); }

  std::uint32_t atom(std::uint32_t i) { return intern_prog({P::Atom, i, 0, false}); }
  std::uint32_t seq(std::uint32_t x, std::uint32_t y) {
    return intern_prog({P::Seq, x, y, programs_[x].nullable && programs_[y].nullable});
  }
  std::uint32_t choice(std::uint32_t x, std::uint32_t y) {
    if (x == y) return x;
    return intern_prog({P::Choice, x, y, programs_[x].nullable || programs_[y].nullable});
  }
  // x* with x stripped of the empty path; the relation is unchanged.
  std::uint32_t star(std::uint32_t x) { return intern_prog({P::Star, nonempty(x), 0, true}); }

  // A program whose paths are exactly the non-empty paths of p.
  std::uint32_t nonempty(std::uint32_t p) {
    const Prog q = programs_[p];
    if (!q.nullable) return p;
    switch (q.kind) {
      case P::Atom: return p;
      case P::Seq: return choice(seq(nonempty(q.a), q.b), nonempty(q.b));
      case P::Choice: return choice(nonempty(q.a), nonempty(q.b));
      case P::Star: return seq(q.a, p);
    }
    return p;
  }

  std::uint32_t from_program(const Program& p) {
    if (auto it = program_memo_.find(p.id()); it != program_memo_.end()) return it->second;
    std::uint32_t r = 0;
    switch (p.kind()) {
      case Program::Kind::Atomic: r = atom(p.index()); break;
      case Program::Kind::Seq: r = seq(from_program(p.lhs()), from_program(p.rhs())); break;
      case Program::Kind::Choice: r = choice(from_program(p.lhs()), from_program(p.rhs())); break;
      case Program::Kind::Star: r = star(from_program(p.inner())); break;
      default:
        throw DialectError("the complete procedure handles test-free PDL only; found " +
                           std::string(constructor_name(p.kind())));
    }
    keep_programs_.push_back(p);
    program_memo_.emplace(p.id(), r);
    return r;
  }

  // NNF of f (positive) or of its negation.
  std::uint32_t from_formula(const Formula& f, bool positive) {
    auto key = std::make_pair(f.id(), positive);
    if (auto it = formula_memo_.find(key); it != formula_memo_.end()) return it->second;
    std::uint32_t r = 0;
    switch (f.kind()) {
      case Formula::Kind::Var: r = literal(f.index(), positive); break;
      case Formula::Kind::Falsum: r = positive ? bottom : top; break;
      case Formula::Kind::Implies:
        r = positive ? disj(from_formula(f.lhs(), false), from_formula(f.rhs(), true))
                     : conj(from_formula(f.lhs(), true), from_formula(f.rhs(), false));
        break;
      case Formula::Kind::Box: {
        std::uint32_t p = from_program(f.program());
        r = positive ? box(p, from_formula(f.body(), true)) : dia(p, from_formula(f.body(), false));
        break;
      }
    }
    keep_formulas_.push_back(f);
    formula_memo_.emplace(key, r);
    return r;
  }

 private:
  std::uint32_t intern(F f) {
    auto key = std::make_tuple(static_cast<int>(f.kind), f.a, f.b, f.prog);
    auto [it, fresh] = formula_ids_.try_emplace(key, static_cast<std::uint32_t>(formulas_.size()));
    if (fresh) formulas_.push_back(f);
    return it->second;
  }
  std::uint32_t intern_prog(Prog p) {
    auto key = std::make_tuple(static_cast<int>(p.kind), p.a, p.b);
    auto [it, fresh] = program_ids_.try_emplace(key, static_cast<std::uint32_t>(programs_.size()));
    if (fresh) programs_.push_back(p);
    return it->second;
  }

  std::vector<F> formulas_;
  std::vector<Prog> programs_;
  std::map<std::tuple<int, std::uint32_t, std::uint32_t, std::uint32_t>, std::uint32_t> formula_ids_;
  std::map<std::tuple<int, std::uint32_t, std::uint32_t>, std::uint32_t> program_ids_;
  std::map<std::pair<const void*, bool>, std::uint32_t> formula_memo_;
  std::unordered_map<const void*, std::uint32_t> program_memo_;
  std::vector<Formula> keep_formulas_;
  std::vector<Program> keep_programs_;
};

class Tableau {
 public:
  using Set = std::vector<std::uint32_t>;  // sorted formula ids

  struct Demand {
    std::uint32_t atom;
    std::vector<std::uint32_t> children;
  };
  struct Node {
    Set members;
    std::vector<Demand> demands;
    bool explored = false;
  };

  Tableau(NnfTable& t, std::size_t max_nodes) : t_(t), max_nodes_(max_nodes) {}

  std::vector<std::uint32_t> build(std::uint32_t root) {
    std::vector<std::uint32_t> roots = children_of({root});
    while (!queue_.empty()) {
      std::uint32_t id = queue_.front();
      queue_.pop_front();
      explore(id);
    }
    return roots;
  }

  // Runs elimination to a fixpoint; returns the alive flags.
  const std::vector<bool>& eliminate() {
    alive_.assign(nodes_.size(), true);
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!alive_[i]) continue;
        for (const auto& d : nodes_[i].demands) {
          bool ok = std::any_of(d.children.begin(), d.children.end(), [&](std::uint32_t c) { return alive_[c]; });
          if (!ok) {
            alive_[i] = false;
            changed = true;
            break;
          }
        }
      }
      if (changed) continue;
      changed = eliminate_unfulfilled();
    }
    return alive_;
  }

  const Node& node(std::uint32_t i) const { return nodes_[i]; }
  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  using Bits = boost::dynamic_bitset<std::uint64_t>;

  bool contains(const Set& s, std::uint32_t f) const { return std::binary_search(s.begin(), s.end(), f); }

  // Adds f; false on an immediate clash.
  bool add(Set& s, std::vector<std::uint32_t>& todo, std::uint32_t f) {
    if (f == NnfTable::top) return true;
    if (f == NnfTable::bottom) return false;
    auto it = std::lower_bound(s.begin(), s.end(), f);
    if (it != s.end() && *it == f) return true;
    const auto k = t_.at(f).kind;
    if ((k == NnfTable::K::Pos || k == NnfTable::K::Neg) && contains(s, t_.complement_literal(f))) return false;
    s.insert(it, f);
    todo.push_back(f);
    return true;
  }

  void expand(Set s, std::vector<std::uint32_t> todo, std::vector<Set>& out) {
    using K = NnfTable::K;
    using P = NnfTable::P;
    while (!todo.empty()) {
      const std::uint32_t f = todo.back();
      todo.pop_back();
      const NnfTable::F x = t_.at(f);
      std::uint32_t first = kNone, second = kNone;  // alpha components
      std::uint32_t left = kNone, right = kNone;    // beta alternatives
      bool eager = true;  // a plain disjunction already satisfied needs no split
      if (x.kind == K::And) {
        first = x.a;
        second = x.b;
      } else if (x.kind == K::Or) {
        left = x.a;
        right = x.b;
      } else if (x.kind == K::Box || x.kind == K::Dia) {
        const NnfTable::Prog p = t_.prog(x.prog);
        const bool box = x.kind == K::Box;
        auto wrap = [&](std::uint32_t prog, std::uint32_t body) { return box ? t_.box(prog, body) : t_.dia(prog, body); };
        switch (p.kind) {
          case P::Atom: break;
          case P::Seq: first = wrap(p.a, wrap(p.b, x.a)); break;
          case P::Choice:
            if (box) {
              first = wrap(p.a, x.a);
              second = wrap(p.b, x.a);
            } else {
              left = wrap(p.a, x.a);
              right = wrap(p.b, x.a);
              eager = false;
            }
            break;
          case P::Star:
            if (box) {
              first = x.a;
              second = wrap(p.a, f);
            } else {
              left = x.a;
              right = wrap(p.a, f);
              eager = false;
            }
            break;
        }
      }
      if (first != kNone && !add(s, todo, first)) return;
      if (second != kNone && !add(s, todo, second)) return;
      if (left != kNone) {
        if (eager && (contains(s, left) || contains(s, right))) continue;
        Set s2 = s;
        auto todo2 = todo;
        if (add(s2, todo2, right)) expand(std::move(s2), std::move(todo2), out);
        if (!add(s, todo, left)) return;
      }
    }
    out.push_back(std::move(s));
  }

  std::uint32_t intern_node(Set s) {
    auto [it, fresh] = node_ids_.try_emplace(s, static_cast<std::uint32_t>(nodes_.size()));
    if (fresh) {
      if (nodes_.size() >= max_nodes_)
        throw ResourceLimitError("tableau exceeded " + std::to_string(max_nodes_) + " nodes");
      nodes_.push_back(Node{std::move(s), {}, false});
      queue_.push_back(it->second);
    }
    return it->second;
  }

  std::vector<std::uint32_t> children_of(Set seed) {
    std::sort(seed.begin(), seed.end());
    seed.erase(std::unique(seed.begin(), seed.end()), seed.end());
    if (auto it = seed_cache_.find(seed); it != seed_cache_.end()) return it->second;
    Set s;
    std::vector<std::uint32_t> todo;
    std::vector<Set> sets;
    bool ok = true;
    for (auto f : seed) ok = ok && add(s, todo, f);
    if (ok) expand(std::move(s), std::move(todo), sets);
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    std::vector<std::uint32_t> ids;
    for (auto& x : sets) ids.push_back(intern_node(std::move(x)));
    seed_cache_.emplace(std::move(seed), ids);
    return ids;
  }

  void explore(std::uint32_t id) {
    using K = NnfTable::K;
    if (nodes_[id].explored) return;
    nodes_[id].explored = true;
    const Set members = nodes_[id].members;
    std::map<std::uint32_t, std::vector<std::uint32_t>> boxes;  // atom -> bodies
    for (auto f : members) {
      const auto& x = t_.at(f);
      if (x.kind == K::Box && t_.prog(x.prog).kind == NnfTable::P::Atom) boxes[t_.prog(x.prog).a].push_back(x.a);
    }
    std::vector<Demand> demands;
    for (auto f : members) {
      const auto& x = t_.at(f);
      if (x.kind != K::Dia || t_.prog(x.prog).kind != NnfTable::P::Atom) continue;
      const std::uint32_t a = t_.prog(x.prog).a;
      Set seed{x.a};
      if (auto it = boxes.find(a); it != boxes.end()) seed.insert(seed.end(), it->second.begin(), it->second.end());
      demands.push_back(Demand{a, children_of(std::move(seed))});
    }
    nodes_[id].demands = std::move(demands);
  }

  // States (nodes) with a p-path inside the alive graph into `target`.
  Bits pre(std::uint32_t p, const Bits& target) {
    const auto& q = t_.prog(p);
    switch (q.kind) {
      case NnfTable::P::Atom: {
        Bits out(nodes_.size());
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
          if (!alive_[i]) continue;
          for (const auto& d : nodes_[i].demands) {
            if (d.atom != q.a) continue;
            if (std::any_of(d.children.begin(), d.children.end(),
                            [&](std::uint32_t c) { return alive_[c] && target.test(c); })) {
              out.set(i);
              break;
            }
          }
        }
        return out;
      }
      case NnfTable::P::Seq: return pre(q.a, pre(q.b, target));
      case NnfTable::P::Choice: return pre(q.a, target) | pre(q.b, target);
      case NnfTable::P::Star: {
        Bits reached = target;
        Bits frontier = target;
        while (frontier.any()) {
          Bits step = pre(q.a, frontier);
          frontier = step - reached;
          reached |= step;
        }
        return reached;
      }
    }
    return target;
  }

  bool eliminate_unfulfilled() {
    using K = NnfTable::K;
    // Every <g*>f held by an alive node, grouped by formula.
    std::map<std::uint32_t, std::vector<std::uint32_t>> holders;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (!alive_[i]) continue;
      for (auto f : nodes_[i].members) {
        const auto& x = t_.at(f);
        if (x.kind == K::Dia && t_.prog(x.prog).kind == NnfTable::P::Star) holders[f].push_back(static_cast<std::uint32_t>(i));
      }
    }
    bool changed = false;
    for (const auto& [f, who] : holders) {
      const auto& x = t_.at(f);
      Bits target(nodes_.size());
      for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (alive_[i] && (x.a == NnfTable::top || contains(nodes_[i].members, x.a))) target.set(i);
      Bits ok = pre(x.prog, target);
      for (auto i : who) {
        if (alive_[i] && !ok.test(i)) {
          alive_[i] = false;
          changed = true;
        }
      }
    }
    return changed;
  }

  NnfTable& t_;
  std::size_t max_nodes_;
  std::vector<Node> nodes_;
  std::map<Set, std::uint32_t> node_ids_;
  std::map<Set, std::vector<std::uint32_t>> seed_cache_;
  std::deque<std::uint32_t> queue_;
  std::vector<bool> alive_;
};

}  // namespace detail

// Decides satisfiability of a test-free PDL formula. The verdict is never
// UnknownAtBound; a blown node budget raises ResourceLimitError instead.
inline SatResult pdl_sat(const Formula& phi, const PdlSatOptions& options = {}) {
  validate(phi, Dialect::PDL);
  detail::NnfTable table;
  const std::uint32_t root = table.from_formula(phi, true);
  detail::Tableau tab(table, options.max_nodes);
  std::vector<std::uint32_t> roots = tab.build(root);
  const std::vector<bool>& alive = tab.eliminate();

  SatResult result;
  result.verdict = Verdict::Unsatisfiable;
  auto start = std::find_if(roots.begin(), roots.end(), [&](std::uint32_t r) { return alive[r]; });
  if (start == roots.end()) return result;

  // Witness: alive nodes reachable from the chosen root, all alive edges.
  std::map<std::uint32_t, std::size_t> index{{*start, 0}};
  std::vector<std::uint32_t> order{*start};
  for (std::size_t k = 0; k < order.size(); ++k)
    for (const auto& d : tab.node(order[k]).demands)
      for (auto c : d.children)
        if (alive[c] && index.emplace(c, order.size()).second) order.push_back(c);

  const FormulaMetrics mt = metrics(phi);
  KripkeModel m(order.size());
  for (auto a : mt.atoms) m.declare_relation(a);
  for (auto v : mt.variables) m.declare_variable(v);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& n = tab.node(order[k]);
    for (auto f : n.members)
      if (table.at(f).kind == detail::NnfTable::K::Pos) m.set_true(table.at(f).a, k);
    for (const auto& d : n.demands)
      for (auto c : d.children)
        if (alive[c]) m.add_edge(d.atom, k, index.at(c));
  }
  if (!check(m, 0, phi, Dialect::PDL)) throw std::logic_error("pdl_sat built a witness that fails the formula");
  result.verdict = Verdict::Satisfiable;
  result.witness = Witness{std::move(m), 0};
  return result;
}

}  // namespace pdlkit
