#pragma once

#include <json.hpp>

#include "sp2sigma/value.hpp"

namespace sp2sigma {

/// Deterministic JSON with insertion-ordered object keys.
using Json = nlohmann::ordered_json;

/// Encodes a value per the external interface: big integers as decimal
/// strings, rationals "p/q", complex {"re","im"}, dual {"a","da"}, matrices
/// row-major nested arrays, group rings as coefficient arrays indexed by
/// exponent, Laurent as {"lo","coeffs"}; the internal rational-function kind
/// serializes as {"num","den"} coefficient arrays.
inline Json encode_value(const Value& x) {
  switch (x.ring->kind) {
    case RingKind::Int:
    case RingKind::Rat: return rat_to_string(x.a);
    case RingKind::Complex: return Json{{"re", rat_to_string(x.a)}, {"im", rat_to_string(x.b)}};
    case RingKind::Dual: return Json{{"a", encode_value(x.parts[0])}, {"da", encode_value(x.parts[1])}};
    case RingKind::Mat: {
      Json rows = Json::array();
      for (int i = 0; i < x.ring->n; ++i) {
        Json row = Json::array();
        for (int j = 0; j < x.ring->n; ++j) row.push_back(encode_value(mat_at(x, i, j)));
        rows.push_back(std::move(row));
      }
      return rows;
    }
    case RingKind::Group: {
      Json coeffs = Json::array();
      for (const auto& c : x.parts) coeffs.push_back(encode_value(c));
      return coeffs;
    }
    case RingKind::Laurent: {
      Json coeffs = Json::array();
      for (const auto& c : x.parts) coeffs.push_back(encode_value(c));
      return Json{{"lo", x.lo}, {"coeffs", std::move(coeffs)}};
    }
    case RingKind::RatFunc: {
      Json num = Json::array(), den = Json::array();
      for (const auto& c : x.num) num.push_back(rat_to_string(c));
      for (const auto& c : x.den) den.push_back(rat_to_string(c));
      return Json{{"num", std::move(num)}, {"den", std::move(den)}};
    }
  }
  throw std::logic_error("unreachable ring kind");
}

inline Value decode_value(const Ring& r, const Json& j) {
  switch (r->kind) {
    case RingKind::Int:
    case RingKind::Rat: {
      Value v{r};
      v.a = rat_from_string(j.get<std::string>());
      if (r->kind == RingKind::Int && !is_integer(v.a)) throw RingError("non-integer payload");
      return v;
    }
    case RingKind::Complex:
      return complex_of(rat_from_string(j.at("re").get<std::string>()),
                        rat_from_string(j.at("im").get<std::string>()));
    case RingKind::Dual:
      return dual_of(r, decode_value(r->base, j.at("a")), decode_value(r->base, j.at("da")));
    case RingKind::Mat: {
      std::vector<Value> entries;
      entries.reserve(static_cast<size_t>(r->n) * r->n);
      for (const auto& row : j)
        for (const auto& e : row) entries.push_back(decode_value(r->base, e));
      return mat_of(r, std::move(entries));
    }
    case RingKind::Group: {
      Value v{r};
      for (const auto& e : j) v.parts.push_back(decode_value(r->base, e));
      if (v.parts.size() != static_cast<size_t>(r->n)) throw RingError("wrong coefficient count");
      return v;
    }
    case RingKind::Laurent: {
      Value v{r};
      v.lo = j.at("lo").get<long>();
      for (const auto& e : j.at("coeffs")) v.parts.push_back(decode_value(r->base, e));
      return laurent_canon(std::move(v));
    }
    case RingKind::RatFunc: {
      Value v{r};
      for (const auto& e : j.at("num")) v.num.push_back(rat_from_string(e.get<std::string>()));
      for (const auto& e : j.at("den")) v.den.push_back(rat_from_string(e.get<std::string>()));
      return ratfunc_canon(std::move(v));
    }
  }
  throw std::logic_error("unreachable ring kind");
}

}  // namespace sp2sigma
