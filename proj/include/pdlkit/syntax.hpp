#pragma once

// Formula and program syntax trees for regular PDL, PDL with intersection
// (IPDL) and PDL with parallel composition (PRSPDL).
//
// Trees are immutable and share structure; a node is never modified after
// construction, so handles can be copied freely and used from several threads.
// Only four formula constructors exist: variables, falsum, implication and box.
// Every other connective is an abbreviation built by the helpers below.

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pdlkit/error.hpp"

namespace pdlkit {

enum class Dialect : std::uint8_t { PDL, IPDL, PRSPDL };

inline std::string_view to_string(Dialect d) {
  switch (d) {
    case Dialect::PDL: return "pdl";
    case Dialect::IPDL: return "ipdl";
    case Dialect::PRSPDL: return "prspdl";
  }
  return "?";
}

inline Dialect parse_dialect(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "pdl") return Dialect::PDL;
  if (lower == "ipdl") return Dialect::IPDL;
  if (lower == "prspdl") return Dialect::PRSPDL;
  throw DialectError("unknown dialect '" + std::string(name) + "' (expected pdl, ipdl or prspdl)");
}

// r1/r2 recover the first/second component of a composite state,
// s1/s2 store the current state as the first/second component.
enum class SpecialProgram : std::uint8_t { R1, R2, S1, S2 };

inline std::string_view to_string(SpecialProgram s) {
  switch (s) {
    case SpecialProgram::R1: return "r1";
    case SpecialProgram::R2: return "r2";
    case SpecialProgram::S1: return "s1";
    case SpecialProgram::S2: return "s2";
  }
  return "?";
}

namespace detail {
struct FormulaNode;
struct ProgramNode;

inline std::size_t hash_mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max()
                                                           : a + b;
}
}  // namespace detail

class Program;

class Formula {
 public:
  enum class Kind : std::uint8_t { Var, Falsum, Implies, Box };

  static Formula var(std::uint32_t index);
  static Formula falsum();
  static Formula implies(Formula lhs, Formula rhs);
  static Formula box(Program program, Formula body);

  Kind kind() const noexcept;
  std::uint32_t index() const;
  const Formula& lhs() const;
  const Formula& rhs() const;
  const Program& program() const;
  const Formula& body() const;

  // Node count of the formula tree, including embedded programs (saturating).
  std::uint64_t size() const noexcept;
  std::size_t hash() const noexcept;
  // Identity of the shared node; equal ids imply structural equality.
  const void* id() const noexcept { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  friend struct detail::FormulaNode;
  friend struct detail::ProgramNode;
  friend class Program;
  Formula() = default;
  explicit Formula(std::shared_ptr<const detail::FormulaNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::FormulaNode> node_;
};

class Program {
 public:
  enum class Kind : std::uint8_t { Atomic, Special, Test, Seq, Choice, Inter, Par, Star };

  static Program atomic(std::uint32_t index);
  static Program special(SpecialProgram which);
  static Program test(Formula formula);
  static Program seq(Program lhs, Program rhs);
  static Program choice(Program lhs, Program rhs);
  static Program inter(Program lhs, Program rhs);
  static Program par(Program lhs, Program rhs);
  static Program star(Program inner);
  // Any of the binary constructors by kind.
  static Program binary(Kind kind, Program lhs, Program rhs);

  Kind kind() const noexcept;
  std::uint32_t index() const;
  SpecialProgram special_kind() const;
  const Formula& formula() const;
  const Program& lhs() const;
  const Program& rhs() const;
  const Program& inner() const;

  std::uint64_t size() const noexcept;
  std::size_t hash() const noexcept;
  const void* id() const noexcept { return node_.get(); }

  bool is_binary() const noexcept {
    auto k = kind();
    return k == Kind::Seq || k == Kind::Choice || k == Kind::Inter || k == Kind::Par;
  }

  friend bool operator==(const Program& a, const Program& b);

 private:
  friend struct detail::FormulaNode;
  friend struct detail::ProgramNode;
  friend class Formula;
  Program() = default;
  explicit Program(std::shared_ptr<const detail::ProgramNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::ProgramNode> node_;
};

namespace detail {

struct FormulaNode {
  Formula::Kind kind;
  std::uint32_t index = 0;
  Formula lhs;
  Formula rhs;
  Program program;
  std::uint64_t size = 1;
  std::size_t hash = 0;
};

struct ProgramNode {
  Program::Kind kind;
  std::uint32_t index = 0;
  SpecialProgram special = SpecialProgram::R1;
  Formula formula;
  Program lhs;
  Program rhs;
  std::uint64_t size = 1;
  std::size_t hash = 0;
};

}  // namespace detail

// ---- Formula ----

inline Formula Formula::var(std::uint32_t index) {
  if (index == 0) throw PreconditionError("variable indices start at 1");
  auto n = std::make_shared<detail::FormulaNode>();
  n->kind = Kind::Var;
  n->index = index;
  n->hash = detail::hash_mix(0x51, index);
  return Formula(std::move(n));
}

inline Formula Formula::falsum() {
  static const Formula bottom = [] {
    auto n = std::make_shared<detail::FormulaNode>();
    n->kind = Kind::Falsum;
    n->hash = 0x7f4a7c15;
    return Formula(std::move(n));
  }();
  return bottom;
}

inline Formula Formula::implies(Formula lhs, Formula rhs) {
  auto n = std::make_shared<detail::FormulaNode>();
  n->kind = Kind::Implies;
  n->size = detail::saturating_add(1, detail::saturating_add(lhs.size(), rhs.size()));
  n->hash = detail::hash_mix(detail::hash_mix(0x13, lhs.hash()), rhs.hash());
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Formula(std::move(n));
}

inline Formula Formula::box(Program program, Formula body) {
  auto n = std::make_shared<detail::FormulaNode>();
  n->kind = Kind::Box;
  n->size = detail::saturating_add(1, detail::saturating_add(program.size(), body.size()));
  n->hash = detail::hash_mix(detail::hash_mix(0x29, program.hash()), body.hash());
  n->program = std::move(program);
  n->lhs = std::move(body);
  return Formula(std::move(n));
}

inline Formula::Kind Formula::kind() const noexcept { return node_->kind; }

inline std::uint32_t Formula::index() const {
  if (kind() != Kind::Var) throw PreconditionError("index() on a non-variable formula");
  return node_->index;
}

inline const Formula& Formula::lhs() const {
  if (kind() != Kind::Implies) throw PreconditionError("lhs() on a non-implication");
  return node_->lhs;
}

inline const Formula& Formula::rhs() const {
  if (kind() != Kind::Implies) throw PreconditionError("rhs() on a non-implication");
  return node_->rhs;
}

inline const Program& Formula::program() const {
  if (kind() != Kind::Box) throw PreconditionError("program() on a non-box formula");
  return node_->program;
}

inline const Formula& Formula::body() const {
  if (kind() != Kind::Box) throw PreconditionError("body() on a non-box formula");
  return node_->lhs;
}

inline std::uint64_t Formula::size() const noexcept { return node_->size; }
inline std::size_t Formula::hash() const noexcept { return node_->hash; }

inline bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size() || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Formula::Kind::Var: return a.node_->index == b.node_->index;
    case Formula::Kind::Falsum: return true;
    case Formula::Kind::Implies: return a.node_->lhs == b.node_->lhs && a.node_->rhs == b.node_->rhs;
    case Formula::Kind::Box: return a.node_->program == b.node_->program && a.node_->lhs == b.node_->lhs;
  }
  return false;
}

inline bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

// ---- Program ----

inline Program Program::atomic(std::uint32_t index) {
  if (index == 0) throw PreconditionError("atomic program indices start at 1");
  auto n = std::make_shared<detail::ProgramNode>();
  n->kind = Kind::Atomic;
  n->index = index;
  n->hash = detail::hash_mix(0xa7, index);
  return Program(std::move(n));
}

inline Program Program::special(SpecialProgram which) {
  auto n = std::make_shared<detail::ProgramNode>();
  n->kind = Kind::Special;
  n->special = which;
  n->hash = detail::hash_mix(0x5e, static_cast<std::size_t>(which));
  return Program(std::move(n));
}

inline Program Program::test(Formula formula) {
  auto n = std::make_shared<detail::ProgramNode>();
  n->kind = Kind::Test;
  n->size = detail::saturating_add(1, formula.size());
  n->hash = detail::hash_mix(0x3f, formula.hash());
  n->formula = std::move(formula);
  return Program(std::move(n));
}

namespace detail {
inline Program make_binary(Program::Kind kind, Program lhs, Program rhs);
}

inline Program Program::seq(Program lhs, Program rhs) {
  return detail::make_binary(Kind::Seq, std::move(lhs), std::move(rhs));
}
inline Program Program::choice(Program lhs, Program rhs) {
  return detail::make_binary(Kind::Choice, std::move(lhs), std::move(rhs));
}
inline Program Program::inter(Program lhs, Program rhs) {
  return detail::make_binary(Kind::Inter, std::move(lhs), std::move(rhs));
}
inline Program Program::par(Program lhs, Program rhs) {
  return detail::make_binary(Kind::Par, std::move(lhs), std::move(rhs));
}

inline Program Program::star(Program inner) {
  auto n = std::make_shared<detail::ProgramNode>();
  n->kind = Kind::Star;
  n->size = detail::saturating_add(1, inner.size());
  n->hash = detail::hash_mix(0x2a, inner.hash());
  n->lhs = std::move(inner);
  return Program(std::move(n));
}

inline Program::Kind Program::kind() const noexcept { return node_->kind; }

inline std::uint32_t Program::index() const {
  if (kind() != Kind::Atomic) throw PreconditionError("index() on a non-atomic program");
  return node_->index;
}

inline SpecialProgram Program::special_kind() const {
  if (kind() != Kind::Special) throw PreconditionError("special_kind() on a non-special program");
  return node_->special;
}

inline const Formula& Program::formula() const {
  if (kind() != Kind::Test) throw PreconditionError("formula() on a non-test program");
  return node_->formula;
}

inline const Program& Program::lhs() const {
  if (!is_binary()) throw PreconditionError("lhs() on a non-binary program");
  return node_->lhs;
}

inline const Program& Program::rhs() const {
  if (!is_binary()) throw PreconditionError("rhs() on a non-binary program");
  return node_->rhs;
}

inline const Program& Program::inner() const {
  if (kind() != Kind::Star) throw PreconditionError("inner() on a non-iteration program");
  return node_->lhs;
}

inline std::uint64_t Program::size() const noexcept { return node_->size; }
inline std::size_t Program::hash() const noexcept { return node_->hash; }

inline bool operator==(const Program& a, const Program& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size() || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Program::Kind::Atomic: return a.node_->index == b.node_->index;
    case Program::Kind::Special: return a.node_->special == b.node_->special;
    case Program::Kind::Test: return a.node_->formula == b.node_->formula;
    case Program::Kind::Star: return a.node_->lhs == b.node_->lhs;
    default: return a.node_->lhs == b.node_->lhs && a.node_->rhs == b.node_->rhs;
  }
}

inline bool operator!=(const Program& a, const Program& b) { return !(a == b); }

inline Program Program::binary(Kind kind, Program lhs, Program rhs) {
  using namespace detail;
  if (kind != Kind::Seq && kind != Kind::Choice && kind != Kind::Inter && kind != Kind::Par)
    throw std::invalid_argument("not a binary program constructor");
  auto n = std::make_shared<ProgramNode>();
  n->kind = kind;
  n->size = saturating_add(1, saturating_add(lhs.size(), rhs.size()));
  n->hash = hash_mix(hash_mix(0x40 + static_cast<std::size_t>(kind), lhs.hash()), rhs.hash());
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Program(std::move(n));
}

namespace detail {
inline Program make_binary(Program::Kind kind, Program lhs, Program rhs) {
  return Program::binary(kind, std::move(lhs), std::move(rhs));
}
}  // namespace detail

struct FormulaHash {
  std::size_t operator()(const Formula& f) const noexcept { return f.hash(); }
};

// ---- Abbreviations ----
//
// ~f = f -> false, true = ~false, f & g = ~(f -> ~g), f | g = ~f -> g,
// f <-> g = (f -> g) & (g -> f), <a>f = ~[a]~f.

inline Formula neg(Formula f) { return Formula::implies(std::move(f), Formula::falsum()); }
inline Formula top() {
  static const Formula t = neg(Formula::falsum());
  return t;
}
inline Formula conj(Formula f, Formula g) { return neg(Formula::implies(std::move(f), neg(std::move(g)))); }
inline Formula disj(Formula f, Formula g) { return Formula::implies(neg(std::move(f)), std::move(g)); }
inline Formula iff(const Formula& f, const Formula& g) {
  return conj(Formula::implies(f, g), Formula::implies(g, f));
}
inline Formula diamond(Program a, Formula f) { return neg(Formula::box(std::move(a), neg(std::move(f)))); }

// <a>^j f with j literally nested diamonds.
inline Formula diamond_power(const Program& a, std::size_t j, Formula f) {
  for (std::size_t i = 0; i < j; ++i) f = diamond(a, std::move(f));
  return f;
}

// Conjunction of all formulas, right-nested; empty input yields true.
inline Formula conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return top();
  Formula acc = fs.back();
  for (std::size_t i = fs.size() - 1; i-- > 0;) acc = conj(fs[i], acc);
  return acc;
}

// Recognizers for the abbreviation patterns, used by the printer.
inline bool is_top(const Formula& f) {
  return f.kind() == Formula::Kind::Implies && f.lhs().kind() == Formula::Kind::Falsum &&
         f.rhs().kind() == Formula::Kind::Falsum;
}

inline std::optional<Formula> as_negation(const Formula& f) {
  if (f.kind() == Formula::Kind::Implies && f.rhs().kind() == Formula::Kind::Falsum) return f.lhs();
  return std::nullopt;
}

inline std::optional<std::pair<Formula, Formula>> as_conjunction(const Formula& f) {
  auto inner = as_negation(f);
  if (!inner || inner->kind() != Formula::Kind::Implies) return std::nullopt;
  auto rhs = as_negation(inner->rhs());
  if (!rhs) return std::nullopt;
  return std::make_pair(inner->lhs(), *rhs);
}

inline std::optional<std::pair<Program, Formula>> as_diamond(const Formula& f) {
  auto inner = as_negation(f);
  if (!inner || inner->kind() != Formula::Kind::Box) return std::nullopt;
  auto body = as_negation(inner->body());
  if (!body) return std::nullopt;
  return std::make_pair(inner->program(), *body);
}

// ---- Dialect validation ----

inline std::string_view constructor_name(Program::Kind k) {
  switch (k) {
    case Program::Kind::Atomic: return "atomic program";
    case Program::Kind::Special: return "special program (r1/r2/s1/s2)";
    case Program::Kind::Test: return "test (?)";
    case Program::Kind::Seq: return "composition (;)";
    case Program::Kind::Choice: return "choice (u)";
    case Program::Kind::Inter: return "intersection (&)";
    case Program::Kind::Par: return "parallel composition (||)";
    case Program::Kind::Star: return "iteration (*)";
  }
  return "?";
}

inline bool admits(Dialect d, Program::Kind k) {
  using K = Program::Kind;
  switch (d) {
    case Dialect::PDL: return k == K::Atomic || k == K::Seq || k == K::Choice || k == K::Star;
    case Dialect::IPDL: return k != K::Special && k != K::Par;
    case Dialect::PRSPDL: return k != K::Choice && k != K::Inter;
  }
  return false;
}

namespace detail {
struct Validator {
  Dialect dialect;
  std::unordered_map<const void*, bool> seen;

  void formula(const Formula& f) {
    if (!seen.emplace(f.id(), true).second) return;
    switch (f.kind()) {
      case Formula::Kind::Var:
      case Formula::Kind::Falsum: return;
      case Formula::Kind::Implies: formula(f.lhs()); formula(f.rhs()); return;
      case Formula::Kind::Box: program(f.program()); formula(f.body()); return;
    }
  }

  void program(const Program& p) {
    if (!seen.emplace(p.id(), true).second) return;
    if (!admits(dialect, p.kind())) {
      throw DialectError(std::string(to_string(dialect)) + " does not admit " +
                         std::string(constructor_name(p.kind())));
    }
    switch (p.kind()) {
      case Program::Kind::Atomic:
      case Program::Kind::Special: return;
      case Program::Kind::Test: formula(p.formula()); return;
      case Program::Kind::Star: program(p.inner()); return;
      default: program(p.lhs()); program(p.rhs()); return;
    }
  }
};
}  // namespace detail

// Throws DialectError naming the first offending constructor.
inline void validate(const Formula& phi, Dialect dialect) {
  detail::Validator v{dialect, {}};
  v.formula(phi);
}

inline void validate(const Program& alpha, Dialect dialect) {
  detail::Validator v{dialect, {}};
  v.program(alpha);
}

inline bool is_valid_for(const Formula& phi, Dialect dialect) {
  try {
    validate(phi, dialect);
    return true;
  } catch (const DialectError&) {
    return false;
  }
}

// ---- Substitution ----

namespace detail {

// Rewrites variables bottom-up, sharing untouched subtrees. Results are
// memoized by node identity so shared DAGs are rewritten once.
class VariableRewriter {
 public:
  explicit VariableRewriter(std::function<std::optional<Formula>(std::uint32_t)> replace)
      : replace_(std::move(replace)) {}

  Formula formula(const Formula& f) {
    if (auto it = formulas_.find(f.id()); it != formulas_.end()) return it->second;
    Formula out = f;
    switch (f.kind()) {
      case Formula::Kind::Var:
        if (auto r = replace_(f.index())) out = *r;
        break;
      case Formula::Kind::Falsum: break;
      case Formula::Kind::Implies: {
        Formula l = formula(f.lhs());
        Formula r = formula(f.rhs());
        if (l.id() != f.lhs().id() || r.id() != f.rhs().id()) out = Formula::implies(l, r);
        break;
      }
      case Formula::Kind::Box: {
        Program p = program(f.program());
        Formula b = formula(f.body());
        if (p.id() != f.program().id() || b.id() != f.body().id()) out = Formula::box(p, b);
        break;
      }
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
      case Program::Kind::Test: {
        Formula f = formula(p.formula());
        if (f.id() != p.formula().id()) out = Program::test(f);
        break;
      }
      case Program::Kind::Star: {
        Program i = program(p.inner());
        if (i.id() != p.inner().id()) out = Program::star(i);
        break;
      }
      default: {
        Program l = program(p.lhs());
        Program r = program(p.rhs());
        if (l.id() != p.lhs().id() || r.id() != p.rhs().id()) out = detail::make_binary(p.kind(), l, r);
        break;
      }
    }
    programs_.emplace(p.id(), out);
    return out;
  }

 private:
  std::function<std::optional<Formula>(std::uint32_t)> replace_;
  std::unordered_map<const void*, Formula> formulas_;
  std::unordered_map<const void*, Program> programs_;
};

}  // namespace detail

// phi with every occurrence of p_{var_index} (tests included) replaced by psi.
inline Formula substitute(const Formula& phi, std::uint32_t var_index, const Formula& psi) {
  detail::VariableRewriter rw([&](std::uint32_t i) -> std::optional<Formula> {
    if (i == var_index) return psi;
    return std::nullopt;
  });
  return rw.formula(phi);
}

// Simultaneous substitution: replacements are not themselves rewritten.
inline Formula substitute_all(const Formula& phi, const std::map<std::uint32_t, Formula>& replacements) {
  detail::VariableRewriter rw([&](std::uint32_t i) -> std::optional<Formula> {
    if (auto it = replacements.find(i); it != replacements.end()) return it->second;
    return std::nullopt;
  });
  return rw.formula(phi);
}

// ---- Normalization ----

struct NormalizedFormula {
  Formula formula;
  std::map<std::uint32_t, std::uint32_t> variable_map;  // old index -> new index
  std::map<std::uint32_t, std::uint32_t> atom_map;
};

// Renames variables to 1..n and atoms to 1..l by first occurrence in a
// left-to-right reading of the formula text.
inline NormalizedFormula normalize_variables(const Formula& phi) {
  NormalizedFormula out{phi, {}, {}};
  std::unordered_map<const void*, bool> seen;
  std::function<void(const Formula&)> visit_f;
  std::function<void(const Program&)> visit_p;
  visit_f = [&](const Formula& f) {
    if (!seen.emplace(f.id(), true).second) return;
    switch (f.kind()) {
      case Formula::Kind::Var:
        out.variable_map.emplace(f.index(), static_cast<std::uint32_t>(out.variable_map.size() + 1));
        return;
      case Formula::Kind::Falsum: return;
      case Formula::Kind::Implies: visit_f(f.lhs()); visit_f(f.rhs()); return;
      case Formula::Kind::Box: visit_p(f.program()); visit_f(f.body()); return;
    }
  };
  visit_p = [&](const Program& p) {
    if (!seen.emplace(p.id(), true).second) return;
    switch (p.kind()) {
      case Program::Kind::Atomic:
        out.atom_map.emplace(p.index(), static_cast<std::uint32_t>(out.atom_map.size() + 1));
        return;
      case Program::Kind::Special: return;
      case Program::Kind::Test: visit_f(p.formula()); return;
      case Program::Kind::Star: visit_p(p.inner()); return;
      default: visit_p(p.lhs()); visit_p(p.rhs()); return;
    }
  };
  visit_f(phi);

  std::unordered_map<const void*, Formula> fmemo;
  std::unordered_map<const void*, Program> pmemo;
  std::function<Formula(const Formula&)> rf;
  std::function<Program(const Program&)> rp;
  rf = [&](const Formula& f) -> Formula {
    if (auto it = fmemo.find(f.id()); it != fmemo.end()) return it->second;
    Formula r = f;
    switch (f.kind()) {
      case Formula::Kind::Var: r = Formula::var(out.variable_map.at(f.index())); break;
      case Formula::Kind::Falsum: break;
      case Formula::Kind::Implies: r = Formula::implies(rf(f.lhs()), rf(f.rhs())); break;
      case Formula::Kind::Box: r = Formula::box(rp(f.program()), rf(f.body())); break;
    }
    fmemo.emplace(f.id(), r);
    return r;
  };
  rp = [&](const Program& p) -> Program {
    if (auto it = pmemo.find(p.id()); it != pmemo.end()) return it->second;
    Program r = p;
    switch (p.kind()) {
      case Program::Kind::Atomic: r = Program::atomic(out.atom_map.at(p.index())); break;
      case Program::Kind::Special: break;
      case Program::Kind::Test: r = Program::test(rf(p.formula())); break;
      case Program::Kind::Star: r = Program::star(rp(p.inner())); break;
      default: r = detail::make_binary(p.kind(), rp(p.lhs()), rp(p.rhs())); break;
    }
    pmemo.emplace(p.id(), r);
    return r;
  };
  out.formula = rf(phi);
  return out;
}

// ---- Metrics ----

struct FormulaMetrics {
  std::uint64_t size = 0;
  std::set<std::uint32_t> variables;
  std::set<std::uint32_t> atoms;
  std::uint32_t modal_depth = 0;
};

// Modal depth counts box nesting; a test formula contributes its own depth at
// the position of the box whose program contains it.
inline FormulaMetrics metrics(const Formula& phi) {
  FormulaMetrics m;
  m.size = phi.size();
  std::unordered_map<const void*, std::uint32_t> depth;
  std::function<std::uint32_t(const Formula&)> df;
  std::function<std::uint32_t(const Program&)> dp;
  df = [&](const Formula& f) -> std::uint32_t {
    if (auto it = depth.find(f.id()); it != depth.end()) return it->second;
    std::uint32_t d = 0;
    switch (f.kind()) {
      case Formula::Kind::Var: m.variables.insert(f.index()); break;
      case Formula::Kind::Falsum: break;
      case Formula::Kind::Implies: d = std::max(df(f.lhs()), df(f.rhs())); break;
      case Formula::Kind::Box: d = 1 + std::max(dp(f.program()), df(f.body())); break;
    }
    depth.emplace(f.id(), d);
    return d;
  };
  dp = [&](const Program& p) -> std::uint32_t {
    if (auto it = depth.find(p.id()); it != depth.end()) return it->second;
    std::uint32_t d = 0;
    switch (p.kind()) {
      case Program::Kind::Atomic: m.atoms.insert(p.index()); break;
      case Program::Kind::Special: break;
      case Program::Kind::Test: d = df(p.formula()); break;
      case Program::Kind::Star: d = dp(p.inner()); break;
      default: d = std::max(dp(p.lhs()), dp(p.rhs())); break;
    }
    depth.emplace(p.id(), d);
    return d;
  };
  m.modal_depth = df(phi);
  return m;
}

}  // namespace pdlkit
