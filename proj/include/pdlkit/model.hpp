#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pdlkit/error.hpp"
#include "pdlkit/relation.hpp"

namespace pdlkit {

// Composition function S × S → 2^S, listing only pairs with a non-empty or
// explicitly recorded result. Unlisted pairs compose to the empty set.
using StarFunction = std::map<std::pair<std::size_t, std::size_t>, StateSet>;

// A finite Kripke model. Atomic relations and valuations not listed are
// empty. The composition function is present only for models meant for
// PRSPDL; the other dialects never consult it.
class KripkeModel {
 public:
  explicit KripkeModel(std::size_t num_states) : num_states_(num_states), empty_relation_(num_states),
                                                 empty_set_(num_states) {
    if (num_states == 0) throw ModelError("a Kripke model needs at least one state");
  }

  std::size_t num_states() const noexcept { return num_states_; }

  const Relation& relation(std::uint32_t atom) const {
    auto it = relations_.find(atom);
    return it == relations_.end() ? empty_relation_ : it->second;
  }

  const std::map<std::uint32_t, Relation>& relations() const noexcept { return relations_; }

  // Registers `atom` (possibly with no pairs) so that it is listed on output.
  Relation& declare_relation(std::uint32_t atom) {
    return relations_.try_emplace(atom, num_states_).first->second;
  }

  void add_edge(std::uint32_t atom, std::size_t s, std::size_t t) { declare_relation(atom).insert(s, t); }

  void set_relation(std::uint32_t atom, Relation r) {
    if (r.num_states() != num_states_) throw ModelError("relation size does not match model");
    relations_.insert_or_assign(atom, std::move(r));
  }

  const StateSet& valuation(std::uint32_t var) const {
    auto it = valuation_.find(var);
    return it == valuation_.end() ? empty_set_ : it->second;
  }

  const std::map<std::uint32_t, StateSet>& valuations() const noexcept { return valuation_; }

  StateSet& declare_variable(std::uint32_t var) { return valuation_.try_emplace(var, num_states_).first->second; }

  void set_true(std::uint32_t var, std::size_t s) {
    check_state(s);
    declare_variable(var).set(s);
  }

  void set_valuation(std::uint32_t var, StateSet states) {
    if (states.size() != num_states_) throw ModelError("valuation size does not match model");
    valuation_.insert_or_assign(var, std::move(states));
  }

  bool has_star() const noexcept { return star_.has_value(); }

  const StarFunction& star() const {
    if (!star_) throw ModelError("model has no state-composition function");
    return *star_;
  }

  void enable_star() {
    if (!star_) star_.emplace();
  }

  // Records x * y = results (replacing any previous entry).
  void set_star(std::size_t x, std::size_t y, StateSet results) {
    check_state(x);
    check_state(y);
    if (results.size() != num_states_) throw ModelError("composition result size does not match model");
    enable_star();
    star_->insert_or_assign(std::make_pair(x, y), std::move(results));
  }

  void add_star(std::size_t x, std::size_t y, std::size_t result) {
    check_state(result);
    enable_star();
    auto [it, _] = star_->try_emplace(std::make_pair(x, y), StateSet(num_states_));
    check_state(x);
    check_state(y);
    it->second.set(result);
  }

  StateSet composition(std::size_t x, std::size_t y) const {
    if (star_) {
      if (auto it = star_->find({x, y}); it != star_->end()) return it->second;
    }
    return empty_set_;
  }

  StateSet all_states() const { return ~StateSet(num_states_); }

  friend bool operator==(const KripkeModel& a, const KripkeModel& b) {
    return a.num_states_ == b.num_states_ && a.relations_ == b.relations_ && a.valuation_ == b.valuation_ &&
           a.star_ == b.star_;
  }

 private:
  void check_state(std::size_t s) const {
    if (s >= num_states_) throw ModelError("state " + std::to_string(s) + " out of range");
  }

  std::size_t num_states_;
  std::map<std::uint32_t, Relation> relations_;
  std::map<std::uint32_t, StateSet> valuation_;
  std::optional<StarFunction> star_;
  Relation empty_relation_;
  StateSet empty_set_;
};

}  // namespace pdlkit
