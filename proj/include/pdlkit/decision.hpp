#pragma once

// Satisfiability verdicts and the bounded-model back-end, which works for
// every dialect but can only ever confirm satisfiability.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>

#include "pdlkit/enumerate.hpp"
#include "pdlkit/error.hpp"
#include "pdlkit/model.hpp"
#include "pdlkit/semantics.hpp"
#include "pdlkit/syntax.hpp"

namespace pdlkit {

enum class Verdict : std::uint8_t { Satisfiable, Unsatisfiable, UnknownAtBound };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Satisfiable: return "satisfiable";
    case Verdict::Unsatisfiable: return "unsatisfiable";
    case Verdict::UnknownAtBound: return "unknown-at-bound";
  }
  return "?";
}

struct Witness {
  KripkeModel model;
  std::size_t state;
};

struct SatResult {
  Verdict verdict = Verdict::UnknownAtBound;
  std::optional<Witness> witness;          // present iff Satisfiable
  std::optional<std::size_t> bound_used;   // largest state count searched (bounded back-end)
};

struct BoundedSatOptions {
  std::size_t max_states = 3;
  std::uint64_t per_size_model_cap = 200000;
  // Variables forced true at every state instead of being enumerated.
  std::set<std::uint32_t> universal_variables;
  // Number of pairs allowed a non-empty composition (PRSPDL).
  std::size_t star_pairs = 2;
};

// Searches models with 1..max_states states in enumeration order and returns
// the first (model, state) satisfying phi. Never answers Unsatisfiable.
inline SatResult bounded_sat(const Formula& phi, Dialect dialect, const BoundedSatOptions& options) {
  if (options.max_states < 1) throw PreconditionError("max_states must be at least 1");
  validate(phi, dialect);
  FormulaMetrics mt = metrics(phi);
  std::set<std::uint32_t> enumerated;
  for (auto v : mt.variables)
    if (!options.universal_variables.count(v)) enumerated.insert(v);

  SatResult result;
  for (std::size_t n = 1; n <= options.max_states; ++n) {
    EnumerationOptions eo;
    eo.cap = options.per_size_model_cap;
    eo.default_star_pairs = options.star_pairs;
    ModelEnumerator models(n, mt.atoms, enumerated, dialect, eo);
    while (auto m = models.next()) {
      for (auto v : options.universal_variables) m->set_valuation(v, m->all_states());
      Evaluator ev(*m, dialect);
      const StateSet& holds = ev.truth_set(phi);
      if (auto s = holds.find_first(); s != StateSet::npos) {
        result.verdict = Verdict::Satisfiable;
        result.witness = Witness{std::move(*m), s};
        result.bound_used = n;
        return result;
      }
    }
    result.bound_used = n;
  }
  return result;
}

inline SatResult bounded_sat(const Formula& phi, Dialect dialect, std::size_t max_states,
                             std::uint64_t per_size_model_cap = 200000) {
  BoundedSatOptions o;
  o.max_states = max_states;
  o.per_size_model_cap = per_size_model_cap;
  return bounded_sat(phi, dialect, o);
}

}  // namespace pdlkit
