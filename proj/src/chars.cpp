#include "alife/chars.hpp"

#include <charconv>

namespace alife {

std::string char_value_to_string(const CharValue& v) {
  if (std::holds_alternative<std::int64_t>(v))
    return std::to_string(std::get<std::int64_t>(v));
  return std::get<std::string>(v);
}

bool char_value_eq(const CharValue& a, const CharValue& b) { return a == b; }

int char_value_cmp(const CharValue& a, const CharValue& b) {
  if (a.index() != b.index())
    throw SchemaError("cannot order values of different kinds");
  if (std::holds_alternative<std::int64_t>(a)) {
    auto x = std::get<std::int64_t>(a), y = std::get<std::int64_t>(b);
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  const auto& x = std::get<std::string>(a);
  const auto& y = std::get<std::string>(b);
  return x < y ? -1 : (x > y ? 1 : 0);
}

int CharSpaceSchema::dim_index(const std::string& name) const {
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (dims[i].name == name) return static_cast<int>(i);
  return -1;
}

void MutationBounds::require_arity(std::size_t n) const {
  if (delta_mut.size() != n || delta_rep_mut.size() != n)
    throw SchemaError("mutation bounds arity does not match schema");
}

namespace {

void require_same_arity(const CharSpaceSchema& s, const CharVector& a,
                        const CharVector& b) {
  if (a.size() != s.arity() || b.size() != s.arity())
    throw SchemaError("character vector arity does not match schema");
}

std::int64_t as_int(const CharValue& v, const char* what) {
  if (!std::holds_alternative<std::int64_t>(v))
    throw SchemaError(std::string("expected integer value for ") + what);
  return std::get<std::int64_t>(v);
}

DiffVector xor_apply(const CharSpaceSchema& s, const CharVector& a,
                     const CharVector& b) {
  require_same_arity(s, a, b);
  DiffVector d(s.arity());
  for (std::size_t i = 0; i < s.arity(); ++i) {
    auto x = as_int(a[i], "xor measure"), y = as_int(b[i], "xor measure");
    if ((x != 0 && x != 1) || (y != 0 && y != 1))
      throw SchemaError("xor measure requires binary values");
    d[i] = x ^ y;
  }
  return d;
}

DiffVector eq_apply(const CharSpaceSchema& s, const CharVector& a,
                    const CharVector& b) {
  require_same_arity(s, a, b);
  DiffVector d(s.arity());
  for (std::size_t i = 0; i < s.arity(); ++i)
    d[i] = char_value_eq(a[i], b[i]) ? 0 : 1;
  return d;
}

DiffVector hamming_apply(const CharSpaceSchema& s, const CharVector& a,
                         const CharVector& b) {
  if (s.arity() != 1)
    throw SchemaError("hamming measure is defined over a 1-dim schema");
  require_same_arity(s, a, b);
  const auto& x = std::get<std::string>(a[0]);
  const auto& y = std::get<std::string>(b[0]);
  if (x.size() != y.size())
    throw SchemaError("hamming measure requires equal-length strings");
  std::int64_t n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) n += x[i] != y[i];
  return {n};
}

struct TagTriple {
  std::int64_t size = 0, lex = 0, mul = 0;
};

TagTriple parse_tag_triple(const std::string& s) {
  TagTriple t;
  std::int64_t* fields[3] = {&t.size, &t.lex, &t.mul};
  std::size_t pos = 0;
  for (int f = 0; f < 3; ++f) {
    std::size_t end = f < 2 ? s.find(',', pos) : s.size();
    if (end == std::string::npos)
      throw SchemaError("malformed tag triple: " + s);
    auto first = s.data() + pos;
    auto last = s.data() + end;
    auto res = std::from_chars(first, last, *fields[f]);
    if (res.ec != std::errc{} || res.ptr != last)
      throw SchemaError("malformed tag triple: " + s);
    pos = end + 1;
  }
  return t;
}

DiffVector alchemy_tag_apply(const CharSpaceSchema& s, const CharVector& a,
                             const CharVector& b) {
  if (s.arity() != 2)
    throw SchemaError("alchemy-tag measure is defined over a 2-dim schema");
  require_same_arity(s, a, b);
  DiffVector d(2);
  d[0] = char_value_eq(a[0], b[0]) ? 0 : 1;
  TagTriple ta = parse_tag_triple(std::get<std::string>(a[1]));
  TagTriple tb = parse_tag_triple(std::get<std::string>(b[1]));
  bool continues =
      ta.size == tb.size && ta.lex == tb.lex && tb.mul == ta.mul + 1;
  d[1] = continues ? 0 : 1;
  return d;
}

// Key = values of every dim whose bound forces exact equality; dims whose
// bound admits any binary difference contribute nothing. Works whenever all
// constrained dims are exact-match under the measure.
std::optional<std::string> exact_match_key(const CharSpaceSchema& s,
                                           const MutationBounds& bounds,
                                           const CharVector& v,
                                           bool dim1_is_directional) {
  std::string key;
  for (std::size_t i = 0; i < s.arity(); ++i) {
    if (!s.dims[i].diff_ordered) continue;       // ignored by the bound
    if (bounds.delta_rep_mut[i] >= 1) continue;  // admits any 0/1 diff
    if (bounds.delta_rep_mut[i] < 0) return std::nullopt;
    if (dim1_is_directional && i == 1) return std::nullopt;
    key += char_value_to_string(v[i]);
    key += '\x1f';
  }
  return key;
}

std::optional<std::string> xor_key(const CharSpaceSchema& s,
                                   const MutationBounds& b,
                                   const CharVector& v) {
  return exact_match_key(s, b, v, false);
}

std::optional<std::string> eq_key(const CharSpaceSchema& s,
                                  const MutationBounds& b,
                                  const CharVector& v) {
  return exact_match_key(s, b, v, false);
}

std::optional<std::string> hamming_key(const CharSpaceSchema& s,
                                       const MutationBounds& b,
                                       const CharVector& v) {
  if (s.dims.at(0).diff_ordered && b.delta_rep_mut.at(0) == 0)
    return char_value_to_string(v[0]);
  return std::nullopt;  // partial-distance bounds are not key-equivalent
}

std::optional<std::string> alchemy_key(const CharSpaceSchema& s,
                                       const MutationBounds& b,
                                       const CharVector& v) {
  // Dim 1 (tag continuation) is directional, so a zero bound there cannot be
  // expressed as key equality.
  return exact_match_key(s, b, v, true);
}

const DistanceMeasure kMeasures[] = {
    {"xor", xor_apply, xor_key},
    {"eq", eq_apply, eq_key},
    {"hamming", hamming_apply, hamming_key},
    {"alchemy-tag", alchemy_tag_apply, alchemy_key},
};

}  // namespace

const DistanceMeasure& measure_by_id(const std::string& id) {
  for (const auto& m : kMeasures)
    if (m.id == id) return m;
  throw SchemaError("unknown distance measure: " + id);
}

DiffVector diff(const CharSpaceSchema& schema, const DistanceMeasure& m,
                const CharVector& a, const CharVector& b) {
  return m.apply(schema, a, b);
}

bool within_bounds(const CharSpaceSchema& schema, const DiffVector& d,
                   const DiffVector& bound) {
  if (d.size() != schema.arity() || bound.size() != schema.arity())
    throw SchemaError("diff/bound arity does not match schema");
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!schema.dims[i].diff_ordered) continue;
    if (d[i] < 0 || d[i] > bound[i]) return false;
  }
  return true;
}

bool diff_is_zero(const DiffVector& d) {
  for (auto x : d)
    if (x != 0) return false;
  return true;
}

}  // namespace alife
