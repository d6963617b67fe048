#include "alife/lambda.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_set>

namespace alife {

TermPtr make_var(std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Var;
  t->name = std::move(name);
  return t;
}

TermPtr make_abs(std::string binder, TermPtr body) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Abs;
  t->name = std::move(binder);
  t->left = std::move(body);
  return t;
}

TermPtr make_app(TermPtr fn, TermPtr arg) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::App;
  t->left = std::move(fn);
  t->right = std::move(arg);
  return t;
}

namespace {

bool is_ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}

struct Parser {
  const std::string& text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw LambdaError("position " + std::to_string(pos) + ": " + msg);
  }

  void skip_ws() {
    while (pos < text.size() &&
           (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' ||
            text[pos] == '\r')) {
      ++pos;
    }
  }

  char peek() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    return text[pos];
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && is_ident_char(text[pos])) ++pos;
    if (pos == start) fail("expected identifier");
    return text.substr(start, pos - start);
  }

  TermPtr term() {
    const char c = peek();
    if (c == '\\') {
      ++pos;
      std::string binder = ident();
      expect('.');
      return make_abs(std::move(binder), term());
    }
    if (c == '(') {
      ++pos;
      TermPtr fn = term();
      if (peek() == ')') {
        ++pos;  // "(fn)(arg)"
        expect('(');
        TermPtr arg = term();
        expect(')');
        return make_app(std::move(fn), std::move(arg));
      }
      TermPtr arg = term();  // "(fn arg)"
      expect(')');
      return make_app(std::move(fn), std::move(arg));
    }
    if (is_ident_char(c)) return make_var(ident());
    fail("expected term");
  }
};

}  // namespace

TermPtr parse_term(const std::string& text) {
  Parser p{text};
  TermPtr t = p.term();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return t;
}

namespace {

void print_into(const TermPtr& t, std::string& out) {
  switch (t->kind) {
    case TermKind::Var:
      out += t->name;
      break;
    case TermKind::Abs:
      out += '\\';
      out += t->name;
      out += '.';
      print_into(t->left, out);
      break;
    case TermKind::App:
      out += '(';
      print_into(t->left, out);
      out += ")(";
      print_into(t->right, out);
      out += ')';
      break;
  }
}

void collect_free(const Term* t, std::vector<std::string>& bound,
                  std::set<std::string>& out) {
  switch (t->kind) {
    case TermKind::Var:
      if (std::find(bound.begin(), bound.end(), t->name) == bound.end())
        out.insert(t->name);
      break;
    case TermKind::Abs:
      bound.push_back(t->name);
      collect_free(t->left.get(), bound, out);
      bound.pop_back();
      break;
    case TermKind::App:
      collect_free(t->left.get(), bound, out);
      collect_free(t->right.get(), bound, out);
      break;
  }
}

TermPtr rename_canonical(const TermPtr& t,
                         std::vector<std::pair<std::string, std::string>>& env,
                         const std::set<std::string>& avoid,
                         std::size_t& counter) {
  switch (t->kind) {
    case TermKind::Var: {
      for (auto it = env.rbegin(); it != env.rend(); ++it)
        if (it->first == t->name) return make_var(it->second);
      return t;  // free occurrence keeps its name
    }
    case TermKind::Abs: {
      std::string fresh;
      do {
        fresh = "x" + std::to_string(++counter);
      } while (avoid.count(fresh) > 0);
      env.emplace_back(t->name, fresh);
      TermPtr body = rename_canonical(t->left, env, avoid, counter);
      env.pop_back();
      return make_abs(std::move(fresh), std::move(body));
    }
    case TermKind::App: {
      TermPtr fn = rename_canonical(t->left, env, avoid, counter);
      TermPtr arg = rename_canonical(t->right, env, avoid, counter);
      return make_app(std::move(fn), std::move(arg));
    }
  }
  throw LambdaError("unreachable term kind");
}

bool alpha_eq_rec(const Term* a, const Term* b,
                  std::vector<std::pair<std::string, std::string>>& env) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TermKind::Var: {
      for (auto it = env.rbegin(); it != env.rend(); ++it) {
        const bool la = it->first == a->name;
        const bool lb = it->second == b->name;
        if (la || lb) return la && lb;
      }
      return a->name == b->name;  // both free
    }
    case TermKind::Abs: {
      env.emplace_back(a->name, b->name);
      const bool eq = alpha_eq_rec(a->left.get(), b->left.get(), env);
      env.pop_back();
      return eq;
    }
    case TermKind::App:
      return alpha_eq_rec(a->left.get(), b->left.get(), env) &&
             alpha_eq_rec(a->right.get(), b->right.get(), env);
  }
  return false;
}

}  // namespace

std::string print_term(const TermPtr& t) {
  std::string out;
  print_into(t, out);
  return out;
}

std::string print_canonical(const TermPtr& t) {
  std::set<std::string> avoid;
  std::vector<std::string> bound;
  collect_free(t.get(), bound, avoid);
  std::vector<std::pair<std::string, std::string>> env;
  std::size_t counter = 0;
  return print_term(rename_canonical(t, env, avoid, counter));
}

bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  std::vector<std::pair<std::string, std::string>> env;
  return alpha_eq_rec(a.get(), b.get(), env);
}

std::int64_t term_size(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Var:
      return 1;
    case TermKind::Abs:
      return 2 + term_size(t->left);
    case TermKind::App:
      return term_size(t->left) + term_size(t->right);
  }
  throw LambdaError("unreachable term kind");
}

std::vector<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free(t.get(), bound, out);
  return {out.begin(), out.end()};
}

namespace {

bool occurs_free(const Term* t, const std::string& name) {
  switch (t->kind) {
    case TermKind::Var:
      return t->name == name;
    case TermKind::Abs:
      return t->name != name && occurs_free(t->left.get(), name);
    case TermKind::App:
      return occurs_free(t->left.get(), name) ||
             occurs_free(t->right.get(), name);
  }
  return false;
}

std::string fresh_name(const std::string& base, const Term* a,
                       const Term* b) {
  for (std::size_t i = 1;; ++i) {
    std::string cand = base + std::to_string(i);
    if (!occurs_free(a, cand) && !occurs_free(b, cand)) return cand;
  }
}

}  // namespace

TermPtr substitute(const TermPtr& t, const std::string& name,
                   const TermPtr& value) {
  switch (t->kind) {
    case TermKind::Var:
      return t->name == name ? value : t;
    case TermKind::Abs: {
      if (t->name == name) return t;  // shadowed
      if (!occurs_free(t->left.get(), name)) return t;
      if (occurs_free(value.get(), t->name)) {
        // Binder would capture a free variable of the value: rename it.
        const std::string fresh =
            fresh_name(t->name, t->left.get(), value.get());
        TermPtr body = substitute(t->left, t->name, make_var(fresh));
        return make_abs(fresh, substitute(body, name, value));
      }
      return make_abs(t->name, substitute(t->left, name, value));
    }
    case TermKind::App:
      return make_app(substitute(t->left, name, value),
                      substitute(t->right, name, value));
  }
  throw LambdaError("unreachable term kind");
}

namespace {

// One leftmost-outermost contraction; nullopt when t is in normal form.
std::optional<TermPtr> step(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Var:
      return std::nullopt;
    case TermKind::Abs: {
      auto body = step(t->left);
      if (!body) return std::nullopt;
      return make_abs(t->name, std::move(*body));
    }
    case TermKind::App: {
      if (t->left->kind == TermKind::Abs)
        return substitute(t->left->left, t->left->name, t->right);
      auto fn = step(t->left);
      if (fn) return make_app(std::move(*fn), t->right);
      auto arg = step(t->right);
      if (arg) return make_app(t->left, std::move(*arg));
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

ReduceResult reduce(const TermPtr& t, std::uint32_t max_steps,
                    std::uint32_t max_size) {
  ReduceResult res;
  res.term = t;
  if (term_size(res.term) > static_cast<std::int64_t>(max_size)) {
    res.status = ReduceStatus::Exhausted;
    return res;
  }
  std::unordered_set<std::string> path{print_canonical(res.term)};
  while (true) {
    auto next = step(res.term);
    if (!next) {
      res.status = ReduceStatus::NormalForm;
      return res;
    }
    if (res.steps == max_steps) {
      res.status = ReduceStatus::Exhausted;
      return res;
    }
    ++res.steps;
    res.term = std::move(*next);
    if (term_size(res.term) > static_cast<std::int64_t>(max_size)) {
      res.status = ReduceStatus::Exhausted;
      return res;
    }
    if (!path.insert(print_canonical(res.term)).second) {
      res.status = ReduceStatus::Cycle;
      return res;
    }
  }
}

namespace {

TermPtr random_rec(Rng& rng, const TermGenWeights& w, std::uint32_t depth,
                   std::uint32_t n_bound) {
  // Leaf position: emit a bound variable, or the identity when none is in
  // scope (keeps terms closed).
  if (depth == 0) {
    if (n_bound == 0) {
      const std::string v = "x1";
      return make_abs(v, make_var(v));
    }
    return make_var("x" + std::to_string(rng.below(n_bound) + 1));
  }
  const std::uint64_t w_var = n_bound > 0 ? w.var : 0;
  const std::uint64_t total = w_var + w.abs + w.app;
  if (total == 0) throw LambdaError("term generator weights sum to zero");
  const std::uint64_t roll = rng.below(total);
  if (roll < w_var)
    return make_var("x" + std::to_string(rng.below(n_bound) + 1));
  if (roll < w_var + w.abs) {
    const std::string binder = "x" + std::to_string(n_bound + 1);
    return make_abs(binder, random_rec(rng, w, depth - 1, n_bound + 1));
  }
  return make_app(random_rec(rng, w, depth - 1, n_bound),
                  random_rec(rng, w, depth - 1, n_bound));
}

}  // namespace

TermPtr random_term(Rng& rng, std::uint32_t max_depth,
                    const TermGenWeights& weights) {
  return random_rec(rng, weights, max_depth, 0);
}

}  // namespace alife
