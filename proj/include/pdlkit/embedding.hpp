#pragma once

// Embedding of each dialect into its variable-free fragment.
//
// Given phi over variables p1..pn, the translation
//   1. guards every box with a fresh marker p_{n+1}: ([a]f)' = [a'](p_{n+1} -> f'),
//   2. conjoins theta, which forces the marker to be closed backwards along
//      the programs of phi, giving hat(phi) = theta & phi',
//   3. replaces each p_i (i <= n+1) by B_i = <b>A_i, where A_i holds exactly
//      at the root of the gadget model M_i.
// The result is equisatisfiable with phi. prune_to_marked and attach_gadgets
// carry out the two model constructions that witness this.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "pdlkit/error.hpp"
#include "pdlkit/model.hpp"
#include "pdlkit/semantics.hpp"
#include "pdlkit/syntax.hpp"

namespace pdlkit {

struct TranslationContext {
  std::uint32_t n = 0;  // variables p1..pn; the marker is p_{n+1}
  std::uint32_t l = 1;  // atoms a1..al (at least one, see make_context)
  std::uint32_t b = 1;  // atom wiring the gadget models
  std::optional<Program> gamma;  // a1 u (a2 u ...); absent for PRSPDL
  Dialect dialect = Dialect::PDL;

  std::uint32_t marker() const noexcept { return n + 1; }
};

// n and l are the largest variable and atom indices (equal to the counts for
// normalized formulas). A formula without atoms gets l = 1 and b = 1.
inline TranslationContext make_context(const Formula& phi, Dialect dialect) {
  validate(phi, dialect);
  FormulaMetrics mt = metrics(phi);
  TranslationContext ctx;
  ctx.dialect = dialect;
  ctx.n = mt.variables.empty() ? 0 : *mt.variables.rbegin();
  ctx.l = mt.atoms.empty() ? 1 : *mt.atoms.rbegin();
  ctx.b = mt.atoms.empty() ? 1 : *mt.atoms.begin();
  if (dialect != Dialect::PRSPDL) {
    Program g = Program::atomic(ctx.l);
    for (std::uint32_t a = ctx.l - 1; a >= 1; --a) g = Program::choice(Program::atomic(a), g);
    ctx.gamma = g;
  }
  return ctx;
}

// ---- prime translation ----

namespace detail {

class PrimeTranslator {
 public:
  explicit PrimeTranslator(const TranslationContext& ctx) : ctx_(ctx), marker_(Formula::var(ctx.marker())) {}

  Formula formula(const Formula& f) {
    if (auto it = formulas_.find(f.id()); it != formulas_.end()) return it->second;
    Formula out = f;
    switch (f.kind()) {
      case Formula::Kind::Var:
        if (f.index() > ctx_.n)
          throw PreconditionError("variable p" + std::to_string(f.index()) + " exceeds n = " + std::to_string(ctx_.n));
        break;
      case Formula::Kind::Falsum: break;
      case Formula::Kind::Implies: out = Formula::implies(formula(f.lhs()), formula(f.rhs())); break;
      case Formula::Kind::Box:
        out = Formula::box(program(f.program()), Formula::implies(marker_, formula(f.body())));
        break;
    }
    formulas_.emplace(f.id(), out);
    return out;
  }

  Program program(const Program& p) {
    if (auto it = programs_.find(p.id()); it != programs_.end()) return it->second;
    Program out = p;
    switch (p.kind()) {
      case Program::Kind::Atomic:
      case Program::Kind::Special: break;
      case Program::Kind::Test: out = Program::test(formula(p.formula())); break;
      case Program::Kind::Star: out = Program::star(program(p.inner())); break;
      default: out = make_binary(p.kind(), program(p.lhs()), program(p.rhs())); break;
    }
    programs_.emplace(p.id(), out);
    return out;
  }

 private:
  const TranslationContext& ctx_;
  Formula marker_;
  std::unordered_map<const void*, Formula> formulas_;
  std::unordered_map<const void*, Program> programs_;
};

// Collects maximal chains a1, ..., ak of nested boxes [a1]...[a2]...[ak].
// Boxes inside a test of a_j are read as if they occurred where [a_j] is
// evaluated, i.e. under the prefix a1..a_{j-1}.
class ChainCollector {
 public:
  std::vector<std::vector<Program>> chains;

  bool walk(const Formula& f, std::vector<Program>& prefix) {
    switch (f.kind()) {
      case Formula::Kind::Var:
      case Formula::Kind::Falsum: return false;
      case Formula::Kind::Implies: {
        bool l = walk(f.lhs(), prefix);
        bool r = walk(f.rhs(), prefix);
        return l || r;
      }
      case Formula::Kind::Box: {
        walk_tests(f.program(), prefix);
        prefix.push_back(f.program());
        if (!walk(f.body(), prefix)) chains.push_back(prefix);
        prefix.pop_back();
        return true;
      }
    }
    return false;
  }

 private:
  void walk_tests(const Program& p, std::vector<Program>& prefix) {
    switch (p.kind()) {
      case Program::Kind::Atomic:
      case Program::Kind::Special: return;
      case Program::Kind::Test: walk(p.formula(), prefix); return;
      case Program::Kind::Star: walk_tests(p.inner(), prefix); return;
      default: walk_tests(p.lhs(), prefix); walk_tests(p.rhs(), prefix); return;
    }
  }
};

}  // namespace detail

inline Formula prime(const Formula& phi, const TranslationContext& ctx) {
  validate(phi, ctx.dialect);
  detail::PrimeTranslator t(ctx);
  return t.formula(phi);
}

// Maximal chains of nested programs of phi, outermost first.
inline std::vector<std::vector<Program>> nested_program_chains(const Formula& phi) {
  detail::ChainCollector c;
  std::vector<Program> prefix;
  c.walk(phi, prefix);
  return c.chains;
}

inline Formula theta(const TranslationContext& ctx, const Formula& phi) {
  const Formula marker = Formula::var(ctx.marker());
  if (ctx.dialect != Dialect::PRSPDL) {
    const Program& g = *ctx.gamma;
    return conj(marker, Formula::box(Program::star(g), Formula::implies(diamond(g, marker), marker)));
  }
  // p & /\_i /\_{j=1}^{k_i - 1} [a^i_1]...[a^i_j](<a^i_{j+1}>p -> p)
  std::vector<Formula> conjuncts{marker};
  for (const auto& chain : nested_program_chains(phi)) {
    for (std::size_t j = 1; j < chain.size(); ++j) {
      Formula c = Formula::implies(diamond(chain[j], marker), marker);
      for (std::size_t i = j; i-- > 0;) c = Formula::box(chain[i], c);
      if (std::find(conjuncts.begin(), conjuncts.end(), c) == conjuncts.end()) conjuncts.push_back(c);
    }
  }
  return conj_all(conjuncts);
}

inline Formula hat(const Formula& phi, const TranslationContext& ctx) {
  return conj(theta(ctx, phi), prime(phi, ctx));
}

// ---- gadgets ----

// M_m: states r = 0, t = 1, s_i = 1 + i (1 <= i <= m). R_b is the transitive
// closure of r->t, t->t, r->s_1 and s_i->s_{i+1}; nothing else holds.
inline KripkeModel gadget_model(std::uint32_t m, std::uint32_t b) {
  if (m < 1) throw PreconditionError("gadget index m must be at least 1");
  if (b < 1) throw PreconditionError("atom indices start at 1");
  const std::size_t size = static_cast<std::size_t>(m) + 2;
  Relation base(size);
  base.insert(0, 1);
  base.insert(1, 1);
  base.insert(0, 2);
  for (std::size_t i = 1; i < m; ++i) base.insert(1 + i, 2 + i);
  KripkeModel model(size);
  model.set_relation(b, base.transitive_closure());
  return model;
}

// A_m = <b>^m [b]false & ~<b>^{m+1}[b]false & <b>(<b>true & [b]<b>true)
inline Formula marker_formula_A(std::uint32_t m, std::uint32_t b) {
  if (m < 1) throw PreconditionError("marker index m must be at least 1");
  const Program pb = Program::atomic(b);
  const Formula dead_end = Formula::box(pb, Formula::falsum());
  const Formula live = diamond(pb, top());
  return conj(diamond_power(pb, m, dead_end),
              conj(neg(diamond_power(pb, m + 1, dead_end)), diamond(pb, conj(live, Formula::box(pb, live)))));
}

inline Formula marker_formula_B(std::uint32_t m, std::uint32_t b) {
  return diamond(Program::atomic(b), marker_formula_A(m, b));
}

// Simultaneous substitution p_i := B_i for 1 <= i <= n+1.
inline Formula ground(const Formula& phi_hat, const TranslationContext& ctx) {
  FormulaMetrics mt = metrics(phi_hat);
  if (!mt.variables.empty() && *mt.variables.rbegin() > ctx.marker())
    throw PreconditionError("unexpected variable p" + std::to_string(*mt.variables.rbegin()) + " (n + 1 = " +
                            std::to_string(ctx.marker()) + ")");
  std::map<std::uint32_t, Formula> sigma;
  for (std::uint32_t i = 1; i <= ctx.marker(); ++i) sigma.emplace(i, marker_formula_B(i, ctx.b));
  return substitute_all(phi_hat, sigma);
}

struct Embedding {
  NormalizedFormula normalized;
  TranslationContext context;
  Formula theta;
  Formula hat;
  Formula result;  // variable-free, over the normalized atoms
};

inline Embedding embed_detailed(const Formula& phi, Dialect dialect) {
  validate(phi, dialect);
  NormalizedFormula nf = normalize_variables(phi);
  TranslationContext ctx = make_context(nf.formula, dialect);
  Formula th = theta(ctx, nf.formula);
  Formula h = conj(th, prime(nf.formula, ctx));
  Formula out = ground(h, ctx);
  return Embedding{std::move(nf), std::move(ctx), std::move(th), std::move(h), std::move(out)};
}

inline Formula embed(const Formula& phi, Dialect dialect) { return embed_detailed(phi, dialect).result; }

// ---- model constructions ----

struct PrunedModel {
  KripkeModel model;
  std::size_t root;                           // image of s0
  std::vector<std::size_t> original_states;   // new state -> old state
};

// Smallest submodel containing s0 and closed under: x kept, x R_gamma y and
// y satisfies the marker => y kept. Kept states are renumbered in order.
inline PrunedModel prune_to_marked(const KripkeModel& model, std::size_t s0, const TranslationContext& ctx) {
  if (!ctx.gamma) throw DialectError("prune_to_marked needs the union program gamma (PDL or IPDL)");
  if (s0 >= model.num_states()) throw PreconditionError("root state out of range");
  const StateSet& marked = model.valuation(ctx.marker());
  if (!marked.test(s0)) throw PreconditionError("root state does not satisfy the marker p" + std::to_string(ctx.marker()));

  Evaluator ev(model, ctx.dialect);
  const Relation& step = ev.relation(*ctx.gamma);
  StateSet keep(model.num_states());
  keep.set(s0);
  std::vector<std::size_t> work{s0};
  while (!work.empty()) {
    std::size_t x = work.back();
    work.pop_back();
    StateSet next = step.successors(x) & marked & ~keep;
    for (auto y = next.find_first(); y != StateSet::npos; y = next.find_next(y)) {
      keep.set(y);
      work.push_back(y);
    }
  }

  std::vector<std::size_t> old_of = members(keep);
  std::vector<std::size_t> new_of(model.num_states(), StateSet::npos);
  for (std::size_t i = 0; i < old_of.size(); ++i) new_of[old_of[i]] = i;

  KripkeModel out(old_of.size());
  for (const auto& [atom, rel] : model.relations()) {
    Relation& r = out.declare_relation(atom);
    for (auto [s, t] : rel.pairs())
      if (keep.test(s) && keep.test(t)) r.insert(new_of[s], new_of[t]);
  }
  for (const auto& [var, states] : model.valuations()) {
    StateSet& v = out.declare_variable(var);
    for (auto s = states.find_first(); s != StateSet::npos; s = states.find_next(s))
      if (keep.test(s)) v.set(new_of[s]);
  }
  if (model.has_star()) {
    out.enable_star();
    for (const auto& [xy, res] : model.star()) {
      if (!keep.test(xy.first) || !keep.test(xy.second)) continue;
      StateSet r(old_of.size());
      for (auto z = res.find_first(); z != StateSet::npos; z = res.find_next(z))
        if (keep.test(z)) r.set(new_of[z]);
      out.set_star(new_of[xy.first], new_of[xy.second], std::move(r));
    }
  }
  return PrunedModel{std::move(out), new_of[s0], std::move(old_of)};
}

struct AttachedModel {
  KripkeModel model;
  std::vector<std::size_t> roots;  // roots[m - 1] is the root of the copy of M_m
};

// Disjoint union of `model` with M_1..M_{n+1} (appended in that order after
// the original states), plus an R_b edge from every original state x to the
// root of M_m whenever x satisfies p_m. Requires the marker to hold everywhere.
inline AttachedModel attach_gadgets(const KripkeModel& model, const TranslationContext& ctx) {
  const std::size_t base = model.num_states();
  if (model.valuation(ctx.marker()).count() != base)
    throw PreconditionError("the marker p" + std::to_string(ctx.marker()) + " must hold at every state");

  std::size_t total = base;
  std::vector<std::size_t> roots;
  for (std::uint32_t m = 1; m <= ctx.marker(); ++m) {
    roots.push_back(total);
    total += static_cast<std::size_t>(m) + 2;
  }

  KripkeModel out(total);
  for (const auto& [atom, rel] : model.relations()) {
    Relation& r = out.declare_relation(atom);
    for (auto [s, t] : rel.pairs()) r.insert(s, t);
  }
  for (const auto& [var, states] : model.valuations()) {
    StateSet v = states;
    v.resize(total);
    out.set_valuation(var, std::move(v));
  }
  if (model.has_star()) {
    out.enable_star();
    for (const auto& [xy, res] : model.star()) {
      StateSet r = res;
      r.resize(total);
      out.set_star(xy.first, xy.second, std::move(r));
    }
  }

  Relation& rb = out.declare_relation(ctx.b);
  for (std::uint32_t m = 1; m <= ctx.marker(); ++m) {
    const std::size_t offset = roots[m - 1];
    for (auto [s, t] : gadget_model(m, ctx.b).relation(ctx.b).pairs()) rb.insert(offset + s, offset + t);
    const StateSet& holds = model.valuation(m);
    for (auto x = holds.find_first(); x != StateSet::npos; x = holds.find_next(x)) rb.insert(x, offset);
  }
  return AttachedModel{std::move(out), std::move(roots)};
}

}  // namespace pdlkit
