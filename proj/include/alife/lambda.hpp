#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "alife/rng.hpp"

namespace alife {

struct LambdaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class TermKind : std::uint8_t { Var, Abs, App };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Immutable AST. Var: name set. Abs: name = binder, left = body.
// App: left = function, right = argument.
struct Term {
  TermKind kind;
  std::string name;
  TermPtr left;
  TermPtr right;
};

TermPtr make_var(std::string name);
TermPtr make_abs(std::string binder, TermPtr body);
TermPtr make_app(TermPtr fn, TermPtr arg);

// Grammar:
//   term := var | "\" var "." term | "(" term ")" "(" term ")"
//         | "(" term " " term ")"
// Variables are alphanumeric identifiers; whitespace is free between tokens.
// Errors carry the character position.
TermPtr parse_term(const std::string& text);

// Prints with the original binder names: \x.body and (fn)(arg).
std::string print_term(const TermPtr& t);

// Alpha-canonical form: binders renamed to x1, x2, ... by binding order
// (skipping any free-variable names), printed like print_term. Two terms are
// alpha-equivalent iff their canonical prints are equal, so this string is
// the alpha-class key.
std::string print_canonical(const TermPtr& t);

bool alpha_eq(const TermPtr& a, const TermPtr& b);

// 2 * (abstraction nodes) + (variable occurrences).
std::int64_t term_size(const TermPtr& t);

std::vector<std::string> free_vars(const TermPtr& t);

// Capture-avoiding substitution of value for free occurrences of name.
TermPtr substitute(const TermPtr& t, const std::string& name,
                   const TermPtr& value);

enum class ReduceStatus : std::uint8_t { NormalForm, Cycle, Exhausted };

struct ReduceResult {
  ReduceStatus status = ReduceStatus::Exhausted;
  TermPtr term;  // normal form / revisited cycle representative / last term
  std::uint32_t steps = 0;
};

// Normal-order (leftmost-outermost) beta reduction. Stops with NormalForm
// when no redex remains; with Cycle when the path revisits an alpha-class it
// already passed through (the revisited term is its own representative and
// stands as the result); with Exhausted when the step or size budget runs
// out.
ReduceResult reduce(const TermPtr& t, std::uint32_t max_steps,
                    std::uint32_t max_size);

// Relative weights for the generator's node choice at interior depth; the
// variable weight only applies once a binder is in scope.
struct TermGenWeights {
  std::uint32_t var = 2;
  std::uint32_t abs = 2;
  std::uint32_t app = 1;
};

// Seeded closed-term generator: chooses among variable / abstraction /
// application, biased toward leaves as depth runs out; never emits free
// variables. Binders are named x1, x2, ... by depth.
TermPtr random_term(Rng& rng, std::uint32_t max_depth,
                    const TermGenWeights& weights = {});

}  // namespace alife
