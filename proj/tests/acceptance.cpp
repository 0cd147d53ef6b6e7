// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pdlkit/pdlkit.hpp"

using namespace pdlkit;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool ok = true;
  std::string detail;
};

const Dialect kDialects[] = {Dialect::PDL, Dialect::IPDL, Dialect::PRSPDL};

Outcome gadget_markers() {
  const auto t0 = Clock::now();
  int checks = 0, bad = 0;
  for (std::uint32_t b : {1u, 2u}) {
    for (std::uint32_t k = 1; k <= 6; ++k) {
      const KripkeModel g = gadget_model(k, b);
      for (std::uint32_t m = 1; m <= 6; ++m) {
        const Formula am = marker_formula_A(m, b);
        for (std::size_t x = 0; x < g.num_states(); ++x, ++checks)
          if (check(g, x, am, Dialect::PDL) != (k == m && x == 0)) ++bad;
      }
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream s;
  s << checks << " checks, " << bad << " wrong, " << secs << " s";
  return {bad == 0 && secs < 5.0, s.str()};
}

Outcome equisat_pdl() {
  const auto t0 = Clock::now();
  FormulaGenerator gen({Dialect::PDL, 3, 2, 12}, 20240);
  int mismatches = 0, sat = 0, unsat = 0, bad_witness = 0;
  const int count = 500;
  for (int i = 0; i < count; ++i) {
    const Formula f = gen.next();
    const Formula e = embed(f, Dialect::PDL);
    const SatResult r1 = pdl_sat(f);
    const SatResult r2 = pdl_sat(e);
    (r1.verdict == Verdict::Satisfiable ? sat : unsat) += 1;
    if (r1.verdict != r2.verdict) {
      ++mismatches;
      std::printf("  mismatch: %s\n", print(f).c_str());
    }
    if (r1.witness && !check(r1.witness->model, r1.witness->state, f, Dialect::PDL)) ++bad_witness;
    if (r2.witness && !check(r2.witness->model, r2.witness->state, e, Dialect::PDL)) ++bad_witness;
  }
  const double secs = seconds_since(t0);
  std::ostringstream s;
  s << count << " formulas (" << sat << " sat, " << unsat << " unsat), " << mismatches << " mismatches, " << secs
    << " s";
  return {mismatches == 0 && bad_witness == 0 && secs < 600.0, s.str()};
}

Outcome forward_direction() {
  std::ostringstream s;
  bool ok = true;
  for (Dialect d : kDialects) {
    FormulaGenerator gen({d, 3, 2, 12}, 31 + static_cast<int>(d));
    int found = 0, failures = 0, tries = 0;
    while (found < 200 && tries < 3000) {
      ++tries;
      const Formula f = gen.next();
      const Embedding e = embed_detailed(f, d);
      BoundedSatOptions o;
      o.max_states = 4;
      o.per_size_model_cap = 5000;
      o.universal_variables = {e.context.marker()};
      const SatResult r = bounded_sat(e.hat, d, o);
      if (r.verdict != Verdict::Satisfiable) continue;
      ++found;
      KripkeModel base = r.witness->model;
      std::size_t root = r.witness->state;
      // pruning to the marked part is only defined when gamma exists
      if (e.context.gamma) {
        PrunedModel p = prune_to_marked(base, root, e.context);
        base = std::move(p.model);
        root = p.root;
      }
      const AttachedModel att = attach_gadgets(base, e.context);
      if (!check(att.model, root, e.result, d)) {
        ++failures;
        std::printf("  forward failure (%s): %s\n", std::string(to_string(d)).c_str(), print(f).c_str());
      }
    }
    s << to_string(d) << " " << found << " witnesses/" << tries << " tries, " << failures << " failures; ";
    ok = ok && found >= 200 && failures == 0;
  }
  return {ok, s.str()};
}

Outcome hat_collapse() {
  std::ostringstream s;
  bool ok = true;
  std::mt19937_64 rng(77);
  for (Dialect d : kDialects) {
    FormulaGenerator gen({d, 3, 2, 16}, 90 + static_cast<int>(d));
    std::size_t triples = 0, failures = 0;
    for (int i = 0; i < 1000; ++i) {
      const Formula f = normalize_variables(gen.next()).formula;
      const TranslationContext c = make_context(f, d);
      const Formula collapsed = substitute(hat(f, c), c.marker(), top());
      std::set<std::uint32_t> atoms, vars;
      for (std::uint32_t x = 1; x <= c.l; ++x) atoms.insert(x);
      for (std::uint32_t v = 1; v <= c.marker(); ++v) vars.insert(v);
      const KripkeModel m = random_model(1 + rng() % 4, atoms, vars, 0.4, rng(), d == Dialect::PRSPDL);
      const StateSet lhs = truth_set(m, collapsed, d);
      const StateSet rhs = truth_set(m, f, d);
      triples += m.num_states();
      failures += (lhs ^ rhs).count();
    }
    s << to_string(d) << " " << triples << " triples, " << failures << " failures; ";
    ok = ok && triples >= 1000 && failures == 0;
  }
  return {ok, s.str()};
}

// Largest size(out) / (size(in) + n + l)^2 over a corpus; counts outputs that still mention variables.
double blowup(Dialect d, std::uint64_t seed, int count, int& non_free) {
  FormulaGenerator gen({d, 3, 2, 12}, seed);
  double c = 0.0;
  for (int i = 0; i < count; ++i) {
    const Formula f = gen.next();
    const Embedding e = embed_detailed(f, d);
    if (!metrics(e.result).variables.empty()) ++non_free;
    const double denom = static_cast<double>(f.size() + e.context.n + e.context.l);
    c = std::max(c, static_cast<double>(e.result.size()) / (denom * denom));
  }
  return c;
}

Outcome variable_free_blowup() {
  const double ceiling = 64.0;
  std::ostringstream s;
  bool ok = true;
  for (Dialect d : kDialects) {
    int non_free = 0;
    const double first = blowup(d, 1, 500, non_free);
    const double rerun = blowup(d, 1, 500, non_free);
    double worst = first;
    for (std::uint64_t seed = 2; seed <= 4; ++seed) worst = std::max(worst, blowup(d, seed, 500, non_free));
    s << to_string(d) << " C=" << first << " (rerun " << rerun << ", max over seeds " << worst << "), " << non_free
      << " with variables; ";
    ok = ok && non_free == 0 && first == rerun && worst <= ceiling;
  }
  s << "ceiling " << ceiling;
  return {ok, s.str()};
}

Outcome semantics_oracles() {
  std::mt19937_64 rng(5);
  int closure_bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + rng() % 8;
    const double p = 0.1 + 0.3 * unit_draw(rng);
    Relation r(n);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (unit_draw(rng) < p) r.insert(x, y);
    if (r.reflexive_transitive_closure() != r.reflexive_transitive_closure_worklist()) ++closure_bad;
  }
  int lemma_bad = 0, instances = 0;
  for (Dialect d : kDialects) {
    FormulaGenerator gen({d, 3, 2, 20}, 140 + static_cast<int>(d));
    FormulaGenerator rep({d, 3, 2, 10}, 150 + static_cast<int>(d));
    for (int i = 0; i < 170; ++i, ++instances) {
      const Formula psi = gen.next();
      const Formula chi = rep.next();
      const std::uint32_t v = 1 + static_cast<std::uint32_t>(rng() % 3);
      const KripkeModel m = random_model(1 + rng() % 4, {1, 2}, {1, 2, 3}, 0.4, rng(), d == Dialect::PRSPDL);
      KripkeModel m2 = m;
      m2.set_valuation(v, truth_set(m, chi, d));
      if (truth_set(m, substitute(psi, v, chi), d) != truth_set(m2, psi, d)) ++lemma_bad;
    }
  }
  std::ostringstream s;
  s << "1000 relations, " << closure_bad << " closure disagreements; " << instances << " substitution instances, "
    << lemma_bad << " failures";
  return {closure_bad == 0 && lemma_bad == 0 && instances >= 500, s.str()};
}

Outcome witness_soundness() {
  int complete_sat = 0, bounded_sat_count = 0, bad = 0;
  FormulaGenerator pgen({Dialect::PDL, 3, 2, 16}, 600);
  for (int i = 0; i < 300; ++i) {
    const Formula f = pgen.next();
    for (const Formula& g : {f, embed(f, Dialect::PDL)}) {
      const SatResult r = pdl_sat(g);
      if (r.verdict != Verdict::Satisfiable) continue;
      ++complete_sat;
      if (!r.witness || !check(r.witness->model, r.witness->state, g, Dialect::PDL)) ++bad;
    }
  }
  for (Dialect d : kDialects) {
    FormulaGenerator gen({d, 3, 2, 14}, 610 + static_cast<int>(d));
    for (int i = 0; i < 200; ++i) {
      const Formula f = gen.next();
      const SatResult r = bounded_sat(f, d, 3, 5000);
      if (r.verdict == Verdict::Unsatisfiable) ++bad;
      if (r.verdict != Verdict::Satisfiable) continue;
      ++bounded_sat_count;
      if (!r.witness || !check(r.witness->model, r.witness->state, f, d)) ++bad;
    }
  }
  std::ostringstream s;
  s << complete_sat << " complete witnesses, " << bounded_sat_count << " bounded witnesses, " << bad << " unsound";
  return {bad == 0 && complete_sat > 0 && bounded_sat_count > 0, s.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"gadget marker formulas (k, m <= 6)", gadget_markers},
      {"equisatisfiability on 500 PDL formulas", equisat_pdl},
      {"forward direction via attached gadgets", forward_direction},
      {"hat collapse under marker := true", hat_collapse},
      {"variable-free output, bounded blowup constant", variable_free_blowup},
      {"closure and substitution oracles", semantics_oracles},
      {"witness soundness of both back-ends", witness_soundness},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %s: %s\n", o.ok ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.ok;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
