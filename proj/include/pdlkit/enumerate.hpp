#pragma once

// Exhaustive and random generation of small Kripke models.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "pdlkit/error.hpp"
#include "pdlkit/model.hpp"
#include "pdlkit/syntax.hpp"

namespace pdlkit {

struct EnumerationOptions {
  // Pairs (x, y) whose composition x*y may be non-empty (PRSPDL only). When
  // unset, the first `default_star_pairs` pairs in lexicographic order are used.
  std::optional<std::vector<std::pair<std::size_t, std::size_t>>> star_support;
  std::size_t default_star_pairs = 2;
  // Maximum number of models yielded; 0 means unlimited.
  std::uint64_t cap = 0;
};

// Streams every model over a signature with a fixed number of states.
//
// Models are indexed by a bit counter; the least significant bits are the
// valuation (variable-major), then the atomic relations (atom, source,
// target), then the composition function (support pair, result state).
class ModelEnumerator {
 public:
  ModelEnumerator(std::size_t num_states, std::set<std::uint32_t> atoms, std::set<std::uint32_t> variables,
                  Dialect dialect, EnumerationOptions options = {})
      : n_(num_states),
        atoms_(atoms.begin(), atoms.end()),
        variables_(variables.begin(), variables.end()),
        with_star_(dialect == Dialect::PRSPDL),
        cap_(options.cap) {
    if (num_states == 0) throw PreconditionError("enumeration needs at least one state");
    if (with_star_) {
      if (options.star_support) {
        support_ = *options.star_support;
        for (auto [x, y] : support_)
          if (x >= n_ || y >= n_) throw PreconditionError("star support pair out of range");
      } else {
        for (std::size_t x = 0; x < n_ && support_.size() < options.default_star_pairs; ++x)
          for (std::size_t y = 0; y < n_ && support_.size() < options.default_star_pairs; ++y)
            support_.emplace_back(x, y);
      }
    }
    bits_.assign(variables_.size() * n_ + atoms_.size() * n_ * n_ + support_.size() * n_, false);
  }

  // Total number of models in the space, saturating at UINT64_MAX.
  std::uint64_t space_size() const {
    if (bits_.size() >= 64) return std::numeric_limits<std::uint64_t>::max();
    return std::uint64_t{1} << bits_.size();
  }

  std::optional<KripkeModel> next() {
    if (done_) return std::nullopt;
    if (cap_ != 0 && yielded_ >= cap_) {
      truncated_ = true;
      done_ = true;
      return std::nullopt;
    }
    KripkeModel m = build();
    ++yielded_;
    if (!increment()) done_ = true;
    return m;
  }

  std::uint64_t yielded() const noexcept { return yielded_; }
  // True when the cap stopped the stream before the space was exhausted.
  bool truncated() const noexcept { return truncated_; }

 private:
  bool increment() {
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (!bits_[i]) {
        bits_[i] = true;
        return true;
      }
      bits_[i] = false;
    }
    return false;
  }

  KripkeModel build() const {
    KripkeModel m(n_);
    std::size_t k = 0;
    for (auto v : variables_) {
      StateSet& s = m.declare_variable(v);
      for (std::size_t x = 0; x < n_; ++x, ++k)
        if (bits_[k]) s.set(x);
    }
    for (auto a : atoms_) {
      Relation& r = m.declare_relation(a);
      for (std::size_t x = 0; x < n_; ++x)
        for (std::size_t y = 0; y < n_; ++y, ++k)
          if (bits_[k]) r.insert(x, y);
    }
    if (with_star_) {
      m.enable_star();
      for (auto [x, y] : support_) {
        StateSet res(n_);
        for (std::size_t z = 0; z < n_; ++z, ++k)
          if (bits_[k]) res.set(z);
        if (res.any()) m.set_star(x, y, std::move(res));
      }
    }
    return m;
  }

  std::size_t n_;
  std::vector<std::uint32_t> atoms_;
  std::vector<std::uint32_t> variables_;
  bool with_star_;
  std::vector<std::pair<std::size_t, std::size_t>> support_;
  std::vector<bool> bits_;
  std::uint64_t cap_;
  std::uint64_t yielded_ = 0;
  bool truncated_ = false;
  bool done_ = false;
};

// Materializes the whole enumeration. Throws ResourceLimitError when the
// space holds more than `options.cap` models.
inline std::vector<KripkeModel> enumerate_models(std::size_t num_states, const std::set<std::uint32_t>& atoms,
                                                 const std::set<std::uint32_t>& variables, Dialect dialect,
                                                 EnumerationOptions options = {}) {
  ModelEnumerator e(num_states, atoms, variables, dialect, options);
  std::vector<KripkeModel> out;
  while (auto m = e.next()) out.push_back(std::move(*m));
  if (e.truncated())
    throw ResourceLimitError("model enumeration exceeds the cap of " + std::to_string(options.cap) + " models");
  return out;
}

// Uniform double in [0, 1) from the top 53 bits; portable across standard libraries.
inline double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Each edge, valuation membership and (with_star) composition membership is
// included independently with probability `edge_probability`.
inline KripkeModel random_model(std::size_t num_states, const std::set<std::uint32_t>& atoms,
                                const std::set<std::uint32_t>& variables, double edge_probability,
                                std::uint64_t seed, bool with_star = false) {
  if (!(edge_probability >= 0.0 && edge_probability <= 1.0))
    throw PreconditionError("edge probability must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  KripkeModel m(num_states);
  for (auto v : variables) {
    StateSet& s = m.declare_variable(v);
    for (std::size_t x = 0; x < num_states; ++x)
      if (unit_draw(rng) < edge_probability) s.set(x);
  }
  for (auto a : atoms) {
    Relation& r = m.declare_relation(a);
    for (std::size_t x = 0; x < num_states; ++x)
      for (std::size_t y = 0; y < num_states; ++y)
        if (unit_draw(rng) < edge_probability) r.insert(x, y);
  }
  if (with_star) {
    m.enable_star();
    for (std::size_t x = 0; x < num_states; ++x)
      for (std::size_t y = 0; y < num_states; ++y) {
        StateSet res(num_states);
        for (std::size_t z = 0; z < num_states; ++z)
          if (unit_draw(rng) < edge_probability) res.set(z);
        if (res.any()) m.set_star(x, y, std::move(res));
      }
  }
  return m;
}

}  // namespace pdlkit
