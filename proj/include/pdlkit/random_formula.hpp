#pragma once

// Seeded random formulas for fuzzing.
//
// Draws use `rng() % total` on a mt19937_64, so a seed yields the same
// corpus on every platform. Constructor weights (out of 100):
//
//   formula:   leaf 10, not 10, implies 2, and 58, box 10, diamond 10
//              (and/diamond fall back to implies/box when the size
//              budget cannot pay for their expansion)
//   leaf:      var 40, falsum 60
//   program:   atom 50, the dialect's binary operators share 35
//              equally, star 15
//   in atom:   PRSPDL gives 10 to specials; IPDL and PRSPDL give 8 to
//              tests
//
// The budget is always max_size. With these weights about 60% of
// the PDL formulas at (3 vars, 2 atoms, size 12) are satisfiable.

#include <cstdint>
#include <random>
#include <vector>

#include "pdlkit/error.hpp"
#include "pdlkit/syntax.hpp"

namespace pdlkit {

struct FormulaBounds {
  Dialect dialect = Dialect::PDL;
  std::uint32_t max_vars = 3;
  std::uint32_t max_atoms = 2;
  std::size_t max_size = 12;
};

class FormulaGenerator {
 public:
  FormulaGenerator(FormulaBounds bounds, std::uint64_t seed) : b_(bounds), rng_(seed) {
    if (b_.max_vars < 1 || b_.max_atoms < 1 || b_.max_size < 1)
      throw PreconditionError("formula bounds must be positive");
  }

  Formula next() {
    for (;;) {
      const std::size_t budget = b_.max_size;
      Formula f = formula(budget);
      if (f.size() <= b_.max_size) return f;
    }
  }

  std::vector<Formula> corpus(std::size_t count) {
    std::vector<Formula> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(next());
    return out;
  }

 private:
  std::uint64_t pick(std::uint64_t n) { return rng_() % n; }

  Formula leaf() {
    if (pick(100) < 40) return Formula::var(1 + static_cast<std::uint32_t>(pick(b_.max_vars)));
    return Formula::falsum();
  }

  // Costs count primitive nodes: ~x adds 2, x & y adds 5, <a>x adds 5.
  Formula formula(std::size_t budget) {
    if (budget <= 1) return leaf();
    const auto r = pick(100);
    if (r < W_LEAF) return leaf();
    if (r < W_NEG || budget < 3) return neg(formula(budget > 3 ? budget - 2 : 1));
    if (r < W_BIN) {
      const bool implies = r < W_IMP || budget < 7;
      const std::size_t rest = budget - (implies ? 1 : 5);
      const std::size_t left = 1 + pick(rest - 1);
      Formula x = formula(left);
      Formula y = formula(rest - left);
      return implies ? Formula::implies(x, y) : conj(x, y);
    }
    const bool dia = r >= W_BOX && budget >= 7;
    const std::size_t rest = budget - (dia ? 5 : 1);
    const std::size_t prog_budget = 1 + pick(rest > 2 ? rest / 2 : 1);
    Program p = program(prog_budget);
    Formula body = formula(rest > prog_budget ? rest - prog_budget : 1);
    return dia ? diamond(p, body) : Formula::box(p, body);
  }

  Program atom() { return Program::atomic(1 + static_cast<std::uint32_t>(pick(b_.max_atoms))); }

  Program program(std::size_t budget) {
    const bool prs = b_.dialect == Dialect::PRSPDL;
    const bool tests = b_.dialect != Dialect::PDL;
    if (budget <= 1) {
      if (prs && pick(100) < 20) return Program::special(static_cast<SpecialProgram>(pick(4)));
      return atom();
    }
    const auto r = pick(100);
    if (r < 50) {
      if (prs && r < 10) return Program::special(static_cast<SpecialProgram>(pick(4)));
      if (tests && r >= 42) return Program::test(formula(budget - 1));
      return atom();
    }
    const std::size_t rest = budget - 1;
    if (r >= 85) return Program::star(program(rest));
    std::vector<Program::Kind> ops{Program::Kind::Seq};
    if (b_.dialect == Dialect::PDL) ops.push_back(Program::Kind::Choice);
    if (b_.dialect == Dialect::IPDL) {
      ops.push_back(Program::Kind::Choice);
      ops.push_back(Program::Kind::Inter);
    }
    if (prs) ops.push_back(Program::Kind::Par);
    const auto op = ops[(r - 50) * ops.size() / 35];
    if (rest < 2) return Program::star(program(1));
    const std::size_t left = 1 + pick(rest - 1);
    Program x = program(left);
    Program y = program(rest - left);
    return detail::make_binary(op, x, y);
  }

  static constexpr std::uint64_t W_LEAF = 10, W_NEG = 20, W_IMP = 22, W_BIN = 80, W_BOX = 90;

  FormulaBounds b_;
  std::mt19937_64 rng_;
};

}  // namespace pdlkit
