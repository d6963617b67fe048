#include <string>
#include <vector>

#include "doctest.h"

#include "alife/lambda.hpp"
#include "alife/rng.hpp"

using namespace alife;

TEST_CASE("parse and print round-trip both application spellings") {
  for (const std::string text :
       {"x", "\\x.x", "\\x1.\\x2.x2", "(\\x.x)(y)", "((a)(b))(c)",
        "\\f.(f)((f)(x))"}) {
    CAPTURE(text);
    CHECK(print_term(parse_term(text)) == text);
  }
  // "(fn arg)" is accepted on input and prints as "(fn)(arg)".
  CHECK(print_term(parse_term("(f x)")) == "(f)(x)");
  CHECK(print_term(parse_term("( f  x )")) == "(f)(x)");
  CHECK(print_term(parse_term(" \\x . x ")) == "\\x.x");
}

TEST_CASE("parse errors carry the character position") {
  CHECK_THROWS_WITH_AS(parse_term(""), "position 0: unexpected end of input",
                       LambdaError);
  CHECK_THROWS_WITH_AS(parse_term("\\.x"), "position 1: expected identifier",
                       LambdaError);
  CHECK_THROWS_WITH_AS(parse_term("\\x x"), "position 3: expected '.'",
                       LambdaError);
  CHECK_THROWS_WITH_AS(parse_term("(x"), "position 2: unexpected end of input",
                       LambdaError);
  CHECK_THROWS_WITH_AS(parse_term("x y"), "position 2: trailing input",
                       LambdaError);
  CHECK_THROWS_WITH_AS(parse_term(")"), "position 0: expected term",
                       LambdaError);
}

TEST_CASE("print_canonical renames binders and avoids free names") {
  CHECK(print_canonical(parse_term("\\a.\\b.(a)(b)")) ==
        "\\x1.\\x2.(x1)(x2)");
  CHECK(print_canonical(parse_term("\\x2.x2")) == "\\x1.x1");
  // The free variable x1 keeps its name, so the binder skips over it.
  CHECK(print_canonical(parse_term("\\a.(a)(x1)")) == "\\x2.(x2)(x1)");
  // Identical canonical prints iff alpha-equivalent.
  CHECK(print_canonical(parse_term("\\a.a")) ==
        print_canonical(parse_term("\\q.q")));
}

TEST_CASE("alpha_eq compares modulo bound names only") {
  CHECK(alpha_eq(parse_term("\\a.a"), parse_term("\\b.b")));
  CHECK(alpha_eq(parse_term("\\a.(a)(c)"), parse_term("\\b.(b)(c)")));
  CHECK_FALSE(alpha_eq(parse_term("\\a.(a)(c)"), parse_term("\\b.(b)(d)")));
  CHECK(alpha_eq(parse_term("y"), parse_term("y")));
  CHECK_FALSE(alpha_eq(parse_term("y"), parse_term("z")));
  CHECK_FALSE(alpha_eq(parse_term("\\a.\\b.a"), parse_term("\\a.\\b.b")));
  // A bound name on one side must not match a free one on the other.
  CHECK_FALSE(alpha_eq(parse_term("\\a.(a)(b)"), parse_term("\\b.(b)(b)")));
}

TEST_CASE("term_size weighs abstractions double") {
  CHECK(term_size(parse_term("x")) == 1);
  CHECK(term_size(parse_term("(x)(y)")) == 2);
  CHECK(term_size(parse_term("\\x.x")) == 3);
  CHECK(term_size(parse_term("\\x1.\\x2.x2")) == 5);
  CHECK(term_size(parse_term("\\x.(x)(x)")) == 4);
}

TEST_CASE("free_vars reports sorted free names") {
  CHECK(free_vars(parse_term("(\\a.(a)(q))(p)")) ==
        std::vector<std::string>{"p", "q"});
  CHECK(free_vars(parse_term("\\a.\\b.(a)(b)")).empty());
}

TEST_CASE("substitute avoids variable capture") {
  // [x := y] \y.x  requires renaming the binder.
  const TermPtr t = substitute(parse_term("\\y.x"), "x", parse_term("y"));
  CHECK(print_term(t) == "\\y1.y");
  // Shadowed occurrences are untouched.
  const TermPtr s = substitute(parse_term("\\x.x"), "x", parse_term("z"));
  CHECK(print_term(s) == "\\x.x");
  // Plain replacement when no capture threatens.
  const TermPtr p =
      substitute(parse_term("(x)(\\a.x)"), "x", parse_term("\\b.b"));
  CHECK(print_term(p) == "(\\b.b)(\\a.\\b.b)");
}

TEST_CASE("reduce finds normal forms in normal order") {
  const ReduceResult r = reduce(parse_term("(\\x1.\\x2.x2)(\\x.x)"), 50, 1000);
  CHECK(r.status == ReduceStatus::NormalForm);
  CHECK(r.steps == 1);
  CHECK(alpha_eq(r.term, parse_term("\\z.z")));

  // Normal order discards the argument of a constant function even when the
  // argument itself diverges.
  const ReduceResult k = reduce(
      parse_term("(\\a.\\b.b)((\\x.(x)(x))(\\x.(x)(x)))"), 50, 1000);
  CHECK(k.status == ReduceStatus::NormalForm);
  CHECK(alpha_eq(k.term, parse_term("\\b.b")));
}

TEST_CASE("reduce detects cycles by alpha-class") {
  const TermPtr omega = parse_term("(\\x.(x)(x))(\\x.(x)(x))");
  const ReduceResult r = reduce(omega, 100, 1000);
  CHECK(r.status == ReduceStatus::Cycle);
  CHECK(r.steps == 1);
  CHECK(alpha_eq(r.term, omega));
}

TEST_CASE("reduce stops on step and size budgets") {
  const TermPtr omega = parse_term("(\\x.(x)(x))(\\x.(x)(x))");
  const ReduceResult steps = reduce(omega, 0, 1000);
  CHECK(steps.status == ReduceStatus::Exhausted);
  CHECK(steps.steps == 0);
  CHECK(alpha_eq(steps.term, omega));

  // The initial term already exceeds the size budget.
  const ReduceResult size = reduce(omega, 100, 5);
  CHECK(size.status == ReduceStatus::Exhausted);
  CHECK(size.steps == 0);

  // A grower trips the size budget mid-reduction: (\x.(x)(x))(\y.((y)(y))(y))
  const ReduceResult grow = reduce(
      parse_term("(\\x.((x)(x))(x))(\\x.((x)(x))(x))"), 1000, 40);
  CHECK(grow.status == ReduceStatus::Exhausted);
  CHECK(grow.steps > 0);
}

TEST_CASE("random_term is closed and deterministic per seed") {
  Rng zero(99);
  CHECK(print_term(random_term(zero, 0)) == "\\x1.x1");

  Rng a(12345);
  Rng b(12345);
  const TermPtr ta = random_term(a, 6);
  const TermPtr tb = random_term(b, 6);
  CHECK(print_term(ta) == print_term(tb));

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    const TermPtr t = random_term(rng, 6);
    CAPTURE(seed);
    CHECK(free_vars(t).empty());
  }
}
