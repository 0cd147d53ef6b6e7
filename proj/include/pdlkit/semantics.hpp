#pragma once

// Model checking by simultaneous induction over formulas and programs.

#include <cstddef>
#include <unordered_map>
#include <vector>

#include "pdlkit/error.hpp"
#include "pdlkit/model.hpp"
#include "pdlkit/relation.hpp"
#include "pdlkit/syntax.hpp"

namespace pdlkit {

// Evaluates formulas and programs over one model, caching every subterm by
// node identity. Not thread-safe; create one evaluator per thread. The model
// must outlive the evaluator.
class Evaluator {
 public:
  Evaluator(const KripkeModel& model, Dialect dialect) : model_(model), dialect_(dialect) {}

  const StateSet& truth_set(const Formula& f) {
    if (auto it = formulas_.find(f.id()); it != formulas_.end()) return it->second;
    keep_.push_back(f);
    StateSet result;
    switch (f.kind()) {
      case Formula::Kind::Var: result = model_.valuation(f.index()); break;
      case Formula::Kind::Falsum: result = StateSet(model_.num_states()); break;
      case Formula::Kind::Implies: result = ~truth_set(f.lhs()) | truth_set(f.rhs()); break;
      case Formula::Kind::Box: {
        // [a]f = ~<a>~f, with <a> pushed through the program structure so
        // that iteration never materializes a closure.
        StateSet bad = ~truth_set(f.body());
        result = ~diamond_set(f.program(), bad);
        break;
      }
    }
    return formulas_.emplace(f.id(), std::move(result)).first->second;
  }

  const Relation& relation(const Program& p) {
    if (auto it = programs_.find(p.id()); it != programs_.end()) return it->second;
    if (!admits(dialect_, p.kind())) {
      throw DialectError(std::string(to_string(dialect_)) + " does not admit " +
                         std::string(constructor_name(p.kind())));
    }
    keep_program_.push_back(p);
    const std::size_t n = model_.num_states();
    Relation result(n);
    switch (p.kind()) {
      case Program::Kind::Atomic: result = model_.relation(p.index()); break;  // copy; rarely hit
      case Program::Kind::Special: result = special(p.special_kind()); break;
      case Program::Kind::Test: result = Relation::identity_on(truth_set(p.formula())); break;
      case Program::Kind::Seq: {
        const Relation& lhs = relation(p.lhs());
        result = lhs.compose(relation(p.rhs()));
        break;
      }
      case Program::Kind::Choice: {
        const Relation& lhs = relation(p.lhs());
        result = lhs | relation(p.rhs());
        break;
      }
      case Program::Kind::Inter: {
        const Relation& lhs = relation(p.lhs());
        result = lhs & relation(p.rhs());
        break;
      }
      case Program::Kind::Par: {
        const Relation& lhs = relation(p.lhs());
        result = parallel(lhs, relation(p.rhs()));
        break;
      }
      case Program::Kind::Star: result = relation(p.inner()).reflexive_transitive_closure(); break;
    }
    return programs_.emplace(p.id(), std::move(result)).first->second;
  }

  // States with a p-successor inside `target`.
  StateSet diamond_set(const Program& p, const StateSet& target) {
    if (!admits(dialect_, p.kind())) {
      throw DialectError(std::string(to_string(dialect_)) + " does not admit " +
                         std::string(constructor_name(p.kind())));
    }
    switch (p.kind()) {
      case Program::Kind::Atomic: return model_.relation(p.index()).diamond_preimage(target);
      case Program::Kind::Test: return truth_set(p.formula()) & target;
      case Program::Kind::Seq: return diamond_set(p.lhs(), diamond_set(p.rhs(), target));
      case Program::Kind::Choice: return diamond_set(p.lhs(), target) | diamond_set(p.rhs(), target);
      case Program::Kind::Star: {
        StateSet reached = target;
        StateSet frontier = target;
        while (frontier.any()) {
          StateSet step = diamond_set(p.inner(), frontier);
          frontier = step - reached;
          reached |= step;
        }
        return reached;
      }
      default: return relation(p).diamond_preimage(target);
    }
  }

  const KripkeModel& model() const noexcept { return model_; }

 private:
  const StarFunction& star_or_throw() const {
    if (!model_.has_star())
      throw ModelError("evaluating a PRSPDL construct needs a model with a composition function");
    return model_.star();
  }

  Relation special(SpecialProgram which) const {
    Relation r(model_.num_states());
    for (const auto& [xy, results] : star_or_throw()) {
      const auto [x, y] = xy;
      for (auto s = results.find_first(); s != StateSet::npos; s = results.find_next(s)) {
        switch (which) {
          case SpecialProgram::R1: r.insert(s, x); break;  // s ∈ x*y: s r1 x
          case SpecialProgram::R2: r.insert(s, y); break;
          case SpecialProgram::S1: r.insert(x, s); break;  // s ∈ x*y: x s1 s
          case SpecialProgram::S2: r.insert(y, s); break;
        }
      }
    }
    return r;
  }

  // (s, t) with s ∈ x1*x2, t ∈ y1*y2, (x1, y1) ∈ lhs and (x2, y2) ∈ rhs.
  Relation parallel(const Relation& lhs, const Relation& rhs) const {
    const auto& star = star_or_throw();
    Relation r(model_.num_states());
    for (const auto& [from, sources] : star) {
      if (sources.none()) continue;
      for (const auto& [to, targets] : star) {
        if (targets.none()) continue;
        if (!lhs.contains(from.first, to.first) || !rhs.contains(from.second, to.second)) continue;
        for (auto s = sources.find_first(); s != StateSet::npos; s = sources.find_next(s))
          for (auto t = targets.find_first(); t != StateSet::npos; t = targets.find_next(t)) r.insert(s, t);
      }
    }
    return r;
  }

  const KripkeModel& model_;
  Dialect dialect_;
  std::unordered_map<const void*, StateSet> formulas_;
  std::unordered_map<const void*, Relation> programs_;
  // Keep cached nodes alive so their addresses are not reused.
  std::vector<Formula> keep_;
  std::vector<Program> keep_program_;
};

inline Relation relation_of(const KripkeModel& model, const Program& alpha, Dialect dialect) {
  validate(alpha, dialect);
  Evaluator ev(model, dialect);
  return ev.relation(alpha);
}

inline StateSet truth_set(const KripkeModel& model, const Formula& phi, Dialect dialect) {
  validate(phi, dialect);
  Evaluator ev(model, dialect);
  return ev.truth_set(phi);
}

inline bool check(const KripkeModel& model, std::size_t state, const Formula& phi, Dialect dialect) {
  if (state >= model.num_states()) throw ModelError("state " + std::to_string(state) + " out of range");
  return truth_set(model, phi, dialect).test(state);
}

}  // namespace pdlkit
