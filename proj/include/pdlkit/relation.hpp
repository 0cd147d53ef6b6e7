#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "pdlkit/error.hpp"

namespace pdlkit {

using StateSet = boost::dynamic_bitset<std::uint64_t>;

inline std::vector<std::size_t> members(const StateSet& s) {
  std::vector<std::size_t> out;
  out.reserve(s.count());
  for (auto i = s.find_first(); i != StateSet::npos; i = s.find_next(i)) out.push_back(i);
  return out;
}

// Binary relation over states 0..n-1, stored as one successor bitset per state.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::size_t num_states) : rows_(num_states, StateSet(num_states)) {}

  static Relation identity(std::size_t n) {
    Relation r(n);
    for (std::size_t s = 0; s < n; ++s) r.rows_[s].set(s);
    return r;
  }

  static Relation identity_on(const StateSet& states) {
    Relation r(states.size());
    for (auto s = states.find_first(); s != StateSet::npos; s = states.find_next(s)) r.rows_[s].set(s);
    return r;
  }

  std::size_t num_states() const noexcept { return rows_.size(); }

  bool contains(std::size_t s, std::size_t t) const { return rows_.at(s).test(t); }

  void insert(std::size_t s, std::size_t t) {
    if (s >= rows_.size() || t >= rows_.size()) throw ModelError("relation pair out of range");
    rows_[s].set(t);
  }

  const StateSet& successors(std::size_t s) const { return rows_.at(s); }

  std::size_t num_pairs() const {
    std::size_t c = 0;
    for (const auto& r : rows_) c += r.count();
    return c;
  }

  bool empty() const {
    for (const auto& r : rows_)
      if (r.any()) return false;
    return true;
  }

  // Pairs in lexicographic order.
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t s = 0; s < rows_.size(); ++s)
      for (auto t = rows_[s].find_first(); t != StateSet::npos; t = rows_[s].find_next(t)) out.emplace_back(s, t);
    return out;
  }

  // this ; other
  Relation compose(const Relation& other) const {
    check_same(other);
    Relation out(num_states());
    for (std::size_t s = 0; s < rows_.size(); ++s) {
      const auto& row = rows_[s];
      for (auto u = row.find_first(); u != StateSet::npos; u = row.find_next(u)) out.rows_[s] |= other.rows_[u];
    }
    return out;
  }

  Relation& operator|=(const Relation& other) {
    check_same(other);
    for (std::size_t s = 0; s < rows_.size(); ++s) rows_[s] |= other.rows_[s];
    return *this;
  }

  Relation& operator&=(const Relation& other) {
    check_same(other);
    for (std::size_t s = 0; s < rows_.size(); ++s) rows_[s] &= other.rows_[s];
    return *this;
  }

  friend Relation operator|(Relation a, const Relation& b) { return a |= b; }
  friend Relation operator&(Relation a, const Relation& b) { return a &= b; }
  friend bool operator==(const Relation& a, const Relation& b) { return a.rows_ == b.rows_; }
  friend bool operator!=(const Relation& a, const Relation& b) { return !(a == b); }

  // Reflexive-transitive closure by repeated squaring of (I ∪ R).
  Relation reflexive_transitive_closure() const {
    Relation acc = identity(num_states()) | *this;
    while (true) {
      Relation next = acc.compose(acc);
      if (next == acc) return acc;
      acc = std::move(next);
    }
  }

  // Same closure computed by a breadth-first worklist from every state.
  Relation reflexive_transitive_closure_worklist() const {
    const std::size_t n = num_states();
    Relation out(n);
    std::vector<std::size_t> work;
    for (std::size_t s = 0; s < n; ++s) {
      StateSet& seen = out.rows_[s];
      seen.set(s);
      work.assign(1, s);
      while (!work.empty()) {
        std::size_t u = work.back();
        work.pop_back();
        const auto& row = rows_[u];
        for (auto v = row.find_first(); v != StateSet::npos; v = row.find_next(v)) {
          if (!seen.test(v)) {
            seen.set(v);
            work.push_back(v);
          }
        }
      }
    }
    return out;
  }

  Relation transitive_closure() const { return compose(reflexive_transitive_closure()); }

  // States all of whose successors lie in `target`.
  StateSet box_preimage(const StateSet& target) const {
    StateSet out(num_states());
    StateSet outside = ~target;
    for (std::size_t s = 0; s < rows_.size(); ++s)
      if (!rows_[s].intersects(outside)) out.set(s);
    return out;
  }

  // States with at least one successor in `target`.
  StateSet diamond_preimage(const StateSet& target) const {
    StateSet out(num_states());
    for (std::size_t s = 0; s < rows_.size(); ++s)
      if (rows_[s].intersects(target)) out.set(s);
    return out;
  }

 private:
  void check_same(const Relation& other) const {
    if (other.num_states() != num_states()) throw ModelError("relations over different state sets");
  }

  std::vector<StateSet> rows_;
};

}  // namespace pdlkit
