// pdlkit command-line front end.
//
// Exit codes: 0 when a result was delivered, 1 when a checked property
// failed (equisat-fuzz), 2 on usage, parse, model or resource errors.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pdlkit/pdlkit.hpp"

namespace {

using namespace pdlkit;
using nlohmann::json;

enum class Format { Text, Lines };

struct Common {
  std::string dialect;
  std::string format = "text";
  std::string formula;
  std::string input;

  Dialect get_dialect() const { return parse_dialect(dialect); }
  Format get_format() const { return format == "lines" ? Format::Lines : Format::Text; }

  // Inline formula or every formula of the input file.
  std::vector<Formula> formulas() const {
    const Dialect d = get_dialect();
    if (!input.empty()) return parse_formula_file(input, d);
    if (formula.find_first_not_of(" \t\r\n") == std::string::npos)
      throw CLI::ValidationError("formula", "no formula given (pass one inline or use --input)");
    return {parse(formula, d)};
  }
};

void add_common(CLI::App* cmd, Common& c, bool formula_arg = true) {
  cmd->add_option("--dialect,-d", c.dialect, "pdl, ipdl or prspdl")->required();
  cmd->add_option("--format", c.format, "text or lines (one JSON object per result)")
      ->check(CLI::IsMember({"text", "lines"}));
  if (formula_arg) {
    cmd->add_option("formula", c.formula, "formula text");
    cmd->add_option("--input,-i", c.input, "file with one formula per line ('#' comments)");
  }
}

void emit(Format f, const json& j, const std::string& text) {
  if (f == Format::Lines) std::cout << j.dump() << '\n';
  else std::cout << text;
  std::cout.flush();
}

std::string vars_list(const std::set<std::uint32_t>& vs) {
  std::string s;
  for (auto v : vs) s += (s.empty() ? "p" : ", p") + std::to_string(v);
  return s.empty() ? "none" : s;
}

// ---- translate ----

struct TranslateArgs {
  Common c;
  bool emit_hat = false;
};

int run_translate(const TranslateArgs& a) {
  const Dialect d = a.c.get_dialect();
  for (const Formula& f : a.c.formulas()) {
    Embedding e = embed_detailed(f, d);
    const FormulaMetrics out = metrics(e.result);
    json j{{"input", print(f)},
           {"result", print(e.result)},
           {"input_size", f.size()},
           {"output_size", e.result.size()},
           {"n", e.context.n},
           {"l", e.context.l},
           {"b", e.context.b},
           {"variables", out.variables.size()}};
    std::ostringstream t;
    t << "input:     " << print(f) << "\n";
    if (a.emit_hat) {
      j["theta"] = print(e.theta);
      j["hat"] = print(e.hat);
      t << "theta:     " << print(e.theta) << "\n"
        << "hat:       " << print(e.hat) << "\n";
    }
    t << "embedded:  " << print(e.result) << "\n"
      << "sizes:     " << f.size() << " -> " << e.result.size() << "\n"
      << "n = " << e.context.n << ", l = " << e.context.l << ", b = a" << e.context.b
      << ", variables in output = " << out.variables.size() << "\n";
    emit(a.c.get_format(), j, t.str());
  }
  return 0;
}

// ---- check ----

struct CheckArgs {
  Common c;
  std::string model;
  std::optional<std::size_t> state;
};

int run_check(const CheckArgs& a) {
  const Dialect d = a.c.get_dialect();
  KripkeModel m = load_model(a.model);
  for (const Formula& f : a.c.formulas()) {
    const StateSet holds = truth_set(m, f, d);
    std::vector<std::size_t> states;
    if (a.state) {
      if (*a.state >= m.num_states()) throw ModelError("state " + std::to_string(*a.state) + " out of range");
      states.push_back(*a.state);
    } else {
      for (std::size_t s = 0; s < m.num_states(); ++s) states.push_back(s);
    }
    for (auto s : states) {
      const bool v = holds.test(s);
      emit(a.c.get_format(), json{{"formula", print(f)}, {"state", s}, {"value", v}},
           (a.state ? "" : std::to_string(s) + ": ") + (v ? "true" : "false") + "\n");
    }
  }
  return 0;
}

// ---- sat ----

struct SatArgs {
  Common c;
  bool complete = false;
  std::optional<std::size_t> bounded;
  std::uint64_t cap = 200000;
  std::size_t max_nodes = 200000;
  std::string emit_witness;
};

SatResult decide(const Formula& f, Dialect d, bool complete, std::optional<std::size_t> bounded, std::uint64_t cap,
                 std::size_t max_nodes) {
  if (complete && d != Dialect::PDL)
    throw PreconditionError("no complete back-end for " + std::string(to_string(d)) + "; use --bounded N");
  if (complete || (d == Dialect::PDL && !bounded)) {
    PdlSatOptions o;
    o.max_nodes = max_nodes;
    return pdl_sat(f, o);
  }
  return bounded_sat(f, d, bounded.value_or(3), cap);
}

int run_sat(const SatArgs& a) {
  const Dialect d = a.c.get_dialect();
  if (a.complete && a.bounded) throw CLI::ValidationError("--complete and --bounded are exclusive");
  const auto formulas = a.c.formulas();
  if (!a.emit_witness.empty() && formulas.size() != 1)
    throw CLI::ValidationError("--emit-witness", "needs exactly one formula");
  for (const Formula& f : formulas) {
    SatResult r = decide(f, d, a.complete, a.bounded, a.cap, a.max_nodes);
    json j{{"formula", print(f)}, {"verdict", std::string(to_string(r.verdict))}};
    std::ostringstream t;
    t << to_string(r.verdict);
    if (r.bound_used) {
      j["bound"] = *r.bound_used;
      if (r.verdict == Verdict::UnknownAtBound) t << " (searched up to " << *r.bound_used << " states)";
    }
    if (r.witness) {
      j["witness_states"] = r.witness->model.num_states();
      j["witness_root"] = r.witness->state;
      const std::size_t k = r.witness->model.num_states();
      t << " (witness: " << k << (k == 1 ? " state" : " states") << ", root " << r.witness->state << ")";
      if (!a.emit_witness.empty()) {
        save_model(r.witness->model, a.emit_witness);
        j["witness_file"] = a.emit_witness;
      }
    }
    t << "\n";
    emit(a.c.get_format(), j, t.str());
  }
  return 0;
}

// ---- equisat-fuzz ----

struct FuzzArgs {
  Common c;
  std::string mode;
  std::size_t count = 500;
  std::uint32_t max_vars = 3;
  std::uint32_t max_atoms = 2;
  std::size_t max_size = 12;
  std::uint64_t seed = 1;
  std::string replay_dir = ".";
  double c_ceiling = 64.0;
  std::size_t bounded_states = 4;
  std::uint64_t cap = 5000;
  std::size_t max_nodes = 200000;
};

std::string flags_of(const FuzzArgs& a, const std::string& mode) {
  std::ostringstream s;
  s << "--dialect " << a.c.dialect << " --mode " << mode << " --count " << a.count << " --max-vars " << a.max_vars
    << " --max-atoms " << a.max_atoms << " --max-size " << a.max_size << " --seed " << a.seed;
  if (mode == "witness") s << " --bounded-states " << a.bounded_states << " --cap " << a.cap;
  return s.str();
}

void write_replay(const FuzzArgs& a, const std::string& mode, std::size_t index, const Formula& f,
                  const std::string& why) {
  std::filesystem::create_directories(a.replay_dir);
  const auto path = std::filesystem::path(a.replay_dir) /
                    ("equisat-" + std::to_string(a.seed) + "-" + std::to_string(index) + ".replay");
  std::ofstream out(path);
  out << "# " << why << "\n# seed " << a.seed << ", corpus index " << index << "\n# flags: " << flags_of(a, mode)
      << "\n"
      << print(f) << "\n";
  std::cerr << "counterexample written to " << path.string() << "\n";
}

int run_fuzz(const FuzzArgs& a) {
  const Dialect d = a.c.get_dialect();
  const std::string mode = a.mode.empty() ? (d == Dialect::PDL ? "complete" : "witness") : a.mode;
  if (mode == "complete" && d != Dialect::PDL)
    throw PreconditionError("complete mode needs the PDL dialect; use --mode witness");
  if (a.count < 1) throw CLI::ValidationError("--count", "must be positive");

  FormulaGenerator gen({d, a.max_vars, a.max_atoms, a.max_size}, a.seed);
  std::size_t passed = 0, failed = 0, skipped = 0, sat = 0, unsat = 0, nonfree = 0;
  double c_measured = 0.0;
  for (std::size_t i = 0; i < a.count; ++i) {
    const Formula f = gen.next();
    const Embedding e = embed_detailed(f, d);
    const FormulaMetrics out = metrics(e.result);
    if (!out.variables.empty()) {
      ++nonfree;
      write_replay(a, mode, i, f, "embedding left variables " + vars_list(out.variables));
    }
    const double denom = static_cast<double>(f.size() + e.context.n + e.context.l);
    c_measured = std::max(c_measured, static_cast<double>(e.result.size()) / (denom * denom));

    bool ok = true;
    std::string why;
    if (mode == "complete") {
      PdlSatOptions o;
      o.max_nodes = a.max_nodes;
      const Verdict v1 = pdl_sat(f, o).verdict;
      const Verdict v2 = pdl_sat(e.result, o).verdict;
      (v1 == Verdict::Satisfiable ? sat : unsat) += 1;
      if (v1 != v2) {
        ok = false;
        why = "verdict mismatch: input " + std::string(to_string(v1)) + ", embedded " + std::string(to_string(v2));
      }
    } else {
      BoundedSatOptions o;
      o.max_states = a.bounded_states;
      o.per_size_model_cap = a.cap;
      o.universal_variables = {e.context.marker()};
      SatResult r = bounded_sat(e.hat, d, o);
      if (r.verdict != Verdict::Satisfiable) {
        ++skipped;
        continue;
      }
      ++sat;
      KripkeModel base = std::move(r.witness->model);
      std::size_t root = r.witness->state;
      if (e.context.gamma) {
        PrunedModel p = prune_to_marked(base, root, e.context);
        base = std::move(p.model);
        root = p.root;
      }
      AttachedModel att = attach_gadgets(base, e.context);
      if (!check(att.model, root, e.result, d)) {
        ok = false;
        why = "embedded formula fails at the witness state after attaching gadgets";
      }
    }
    if (ok) {
      ++passed;
    } else {
      ++failed;
      write_replay(a, mode, i, f, why);
    }
  }

  const bool c_ok = c_measured <= a.c_ceiling;
  json j{{"dialect", std::string(to_string(d))},
         {"mode", mode},
         {"seed", a.seed},
         {"count", a.count},
         {"passed", passed},
         {"failed", failed},
         {"skipped", skipped},
         {"satisfiable", sat},
         {"unsatisfiable", unsat},
         {"non_variable_free", nonfree},
         {"c_measured", c_measured},
         {"c_ceiling", a.c_ceiling}};
  std::ostringstream t;
  t << "equisat-fuzz " << to_string(d) << " mode=" << mode << " seed=" << a.seed << "\n"
    << "  formulas:    " << a.count << "\n"
    << "  passed:      " << passed << "\n"
    << "  failed:      " << failed << "\n";
  if (mode == "complete") t << "  verdicts:    " << sat << " satisfiable, " << unsat << " unsatisfiable\n";
  else t << "  skipped:     " << skipped << " (no witness within " << a.bounded_states << " states)\n";
  t << "  variable-free outputs: " << (a.count - nonfree) << "/" << a.count << "\n"
    << "  C measured:  " << c_measured << " (ceiling " << a.c_ceiling << (c_ok ? ")" : ", EXCEEDED)") << "\n";
  emit(a.c.get_format(), j, t.str());
  return failed == 0 && nonfree == 0 && c_ok ? 0 : 1;
}

// ---- gadget ----

struct GadgetArgs {
  Common c;
  std::uint32_t m = 1;
  std::uint32_t b = 1;
  std::string output;
};

int run_gadget(const GadgetArgs& a) {
  (void)a.c.get_dialect();
  if (a.m < 1) throw PreconditionError("m must be at least 1");
  if (a.b < 1) throw PreconditionError("b must be at least 1");
  const KripkeModel model = gadget_model(a.m, a.b);
  const std::string text = save_model_string(model);
  if (!a.output.empty()) save_model(model, a.output);
  const Formula am = marker_formula_A(a.m, a.b);
  const Formula bm = marker_formula_B(a.m, a.b);
  json j{{"m", a.m}, {"b", a.b}, {"model", json::parse(text)}, {"A", print(am)}, {"B", print(bm)}};
  std::ostringstream t;
  if (a.output.empty()) t << text;
  else t << "model written to " << a.output << "\n";
  t << "A" << a.m << ": " << print(am) << "\n"
    << "B" << a.m << ": " << print(bm) << "\n";
  emit(a.c.get_format(), j, t.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Embeddings of PDL, IPDL and PRSPDL into their variable-free fragments"};
  app.require_subcommand(1);

  TranslateArgs tr;
  auto* translate = app.add_subcommand("translate", "print the variable-free embedding of a formula");
  add_common(translate, tr.c);
  translate->add_flag("--emit-hat", tr.emit_hat, "also print theta and the hat formula");

  CheckArgs ck;
  auto* checkc = app.add_subcommand("check", "model-check a formula");
  add_common(checkc, ck.c);
  checkc->add_option("--model,-m", ck.model, "model JSON file")->required();
  checkc->add_option("--state,-s", ck.state, "state to check (all states when omitted)");

  SatArgs st;
  auto* satc = app.add_subcommand("sat", "decide or search for satisfiability");
  add_common(satc, st.c);
  satc->add_flag("--complete", st.complete, "complete procedure (PDL only; default for PDL)");
  satc->add_option("--bounded", st.bounded, "bounded model search up to N states");
  satc->add_option("--cap", st.cap, "models tried per state count in bounded search");
  satc->add_option("--max-nodes", st.max_nodes, "node budget of the complete procedure");
  satc->add_option("--emit-witness", st.emit_witness, "write the witness model to this file");

  FuzzArgs fz;
  auto* fuzz = app.add_subcommand("equisat-fuzz", "check equisatisfiability on a random corpus");
  add_common(fuzz, fz.c, false);
  fuzz->add_option("--mode", fz.mode, "complete (PDL) or witness; default complete for PDL")
      ->check(CLI::IsMember({"complete", "witness"}));
  fuzz->add_option("--count", fz.count, "corpus size");
  fuzz->add_option("--max-vars", fz.max_vars, "largest variable index");
  fuzz->add_option("--max-atoms", fz.max_atoms, "largest atom index");
  fuzz->add_option("--max-size", fz.max_size, "largest formula size");
  fuzz->add_option("--seed", fz.seed, "corpus seed");
  fuzz->add_option("--replay-dir", fz.replay_dir, "where counterexamples are written");
  fuzz->add_option("--c-ceiling", fz.c_ceiling, "largest acceptable blowup constant C");
  fuzz->add_option("--bounded-states", fz.bounded_states, "witness mode: largest model searched");
  fuzz->add_option("--cap", fz.cap, "witness mode: models tried per state count");
  fuzz->add_option("--max-nodes", fz.max_nodes, "complete mode: node budget");

  GadgetArgs gd;
  auto* gadget = app.add_subcommand("gadget", "print the gadget model M_m and the formulas A_m, B_m");
  add_common(gadget, gd.c, false);
  gadget->add_option("--m", gd.m, "gadget index, at least 1")->required();
  gadget->add_option("--b", gd.b, "atom wiring the gadget")->default_val(1);
  gadget->add_option("--output,-o", gd.output, "write the model file here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*translate) return run_translate(tr);
    if (*checkc) return run_check(ck);
    if (*satc) return run_sat(st);
    if (*fuzz) return run_fuzz(fz);
    if (*gadget) return run_gadget(gd);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error at " << e.position() << ": " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
