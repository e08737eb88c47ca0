#include "abel/spec_format.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

namespace abel {

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// ---------------------------------------------------------------------------
// Tokenizer

enum class Tok { Key, Number, LBrace, RBrace, LBracket, RBracket, Comma, Colon, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  int line = 1;
};

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1;

  explicit Lexer(const std::string& s) : src(s) {}

  Token next() {
    while (pos < src.size()) {
      const char c = src[pos];
      if (c == '\n') { ++line; ++pos; continue; }
      if (std::isspace(static_cast<unsigned char>(c))) { ++pos; continue; }
      if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
    if (pos >= src.size()) return {Tok::End, "", 0.0, line};
    const char c = src[pos];
    const int tok_line = line;
    switch (c) {
      case '{': ++pos; return {Tok::LBrace, "{", 0.0, tok_line};
      case '}': ++pos; return {Tok::RBrace, "}", 0.0, tok_line};
      case '[': ++pos; return {Tok::LBracket, "[", 0.0, tok_line};
      case ']': ++pos; return {Tok::RBracket, "]", 0.0, tok_line};
      case ',': ++pos; return {Tok::Comma, ",", 0.0, tok_line};
      case ':': ++pos; return {Tok::Colon, ":", 0.0, tok_line};
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
        ++pos;
      return {Tok::Key, src.substr(start, pos - start), 0.0, tok_line};
    }
    if (c == '+' || c == '-' || c == '.' ||
        std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos;
      char* endp = nullptr;
      const double v = std::strtod(src.c_str() + start, &endp);
      if (endp == src.c_str() + start)
        throw SpecParseError("malformed number", tok_line, "");
      pos = static_cast<size_t>(endp - src.c_str());
      return {Tok::Number, src.substr(start, pos - start), v, tok_line};
    }
    throw SpecParseError(std::string("unexpected character '") + c + "'", tok_line,
                         "");
  }
};

// ---------------------------------------------------------------------------
// Document values

struct Value;
using ValuePtr = std::unique_ptr<Value>;

struct Value {
  enum class Kind { Number, Object, Array } kind = Kind::Number;
  double number = 0.0;
  std::vector<std::pair<std::string, ValuePtr>> object;
  std::vector<ValuePtr> array;
  int line = 1;
};

struct Parser {
  Lexer lex;
  Token cur;

  explicit Parser(const std::string& s) : lex(s) { cur = lex.next(); }

  void advance() { cur = lex.next(); }

  ValuePtr parse_value() {
    auto v = std::make_unique<Value>();
    v->line = cur.line;
    switch (cur.kind) {
      case Tok::Number:
        v->kind = Value::Kind::Number;
        v->number = cur.number;
        advance();
        return v;
      case Tok::LBrace: {
        v->kind = Value::Kind::Object;
        advance();
        while (cur.kind != Tok::RBrace) {
          if (cur.kind == Tok::Comma) { advance(); continue; }
          if (cur.kind != Tok::Key)
            throw SpecParseError("expected a key inside { }", cur.line, "");
          std::string key = cur.text;
          advance();
          if (cur.kind != Tok::Colon)
            throw SpecParseError("expected ':' after key", cur.line, key);
          advance();
          v->object.emplace_back(std::move(key), parse_value());
        }
        advance();
        return v;
      }
      case Tok::LBracket: {
        v->kind = Value::Kind::Array;
        advance();
        while (cur.kind != Tok::RBracket) {
          if (cur.kind == Tok::Comma) { advance(); continue; }
          v->array.push_back(parse_value());
        }
        advance();
        return v;
      }
      default:
        throw SpecParseError("expected a value", cur.line, "");
    }
  }

  // Top level: sequence of key: value pairs.
  std::vector<std::pair<std::string, ValuePtr>> parse_document() {
    std::vector<std::pair<std::string, ValuePtr>> doc;
    while (cur.kind != Tok::End) {
      if (cur.kind == Tok::Comma) { advance(); continue; }
      if (cur.kind != Tok::Key)
        throw SpecParseError("expected a top-level key", cur.line, "");
      std::string key = cur.text;
      advance();
      if (cur.kind != Tok::Colon)
        throw SpecParseError("expected ':' after key", cur.line, key);
      advance();
      doc.emplace_back(std::move(key), parse_value());
    }
    return doc;
  }
};

double expect_number(const Value& v, const std::string& field) {
  if (v.kind != Value::Kind::Number)
    throw SpecParseError("expected a number", v.line, field);
  return v.number;
}

std::vector<double> expect_number_array(const Value& v, const std::string& field) {
  if (v.kind != Value::Kind::Array)
    throw SpecParseError("expected an array", v.line, field);
  std::vector<double> out;
  for (const auto& e : v.array) out.push_back(expect_number(*e, field));
  return out;
}

CoefficientFunction build_coefficient(const Value& v, const std::string& which) {
  if (v.kind != Value::Kind::Object || v.object.size() != 1)
    throw SpecParseError("expected exactly one of trig/poly/samples", v.line, which);
  const auto& [variant, body] = v.object.front();

  if (variant == "trig") {
    if (body->kind != Value::Kind::Object)
      throw SpecParseError("expected an object", body->line, which + ".trig");
    TrigPoly p;
    for (const auto& [key, val] : body->object) {
      if (key == "c0") p.c0 = expect_number(*val, which + ".trig.c0");
      else if (key == "cos") p.cos_coeffs = expect_number_array(*val, which + ".trig.cos");
      else if (key == "sin") p.sin_coeffs = expect_number_array(*val, which + ".trig.sin");
      else throw SpecParseError("unknown key '" + key + "'", val->line, which + ".trig");
    }
    return CoefficientFunction(std::move(p));
  }

  if (variant == "poly") {
    if (body->kind != Value::Kind::Object)
      throw SpecParseError("expected an object", body->line, which + ".poly");
    std::vector<MonomialPoly::Term> terms;
    bool saw_terms = false;
    for (const auto& [key, val] : body->object) {
      if (key != "terms")
        throw SpecParseError("unknown key '" + key + "'", val->line, which + ".poly");
      saw_terms = true;
      if (val->kind != Value::Kind::Array)
        throw SpecParseError("expected an array of [exp, coef] pairs", val->line,
                             which + ".poly.terms");
      for (const auto& pair : val->array) {
        if (pair->kind != Value::Kind::Array || pair->array.size() != 2)
          throw SpecParseError("expected an [exp, coef] pair", pair->line,
                               which + ".poly.terms");
        const double e = expect_number(*pair->array[0], which + ".poly.terms");
        const double c = expect_number(*pair->array[1], which + ".poly.terms");
        if (e < 0.0 || e != std::floor(e))
          throw SpecParseError("exponent must be a non-negative integer",
                               pair->line, which + ".poly.terms");
        terms.push_back({static_cast<int>(e), c});
      }
      for (size_t i = 0; i < terms.size(); ++i)
        for (size_t q = i + 1; q < terms.size(); ++q)
          if (terms[i].exponent == terms[q].exponent)
            throw SpecParseError("duplicate exponent " +
                                     std::to_string(terms[i].exponent),
                                 val->line, which + ".poly.terms");
    }
    if (!saw_terms)
      throw SpecParseError("missing 'terms'", body->line, which + ".poly");
    return CoefficientFunction(MonomialPoly::from_terms(std::move(terms)));
  }

  if (variant == "samples") {
    if (body->kind != Value::Kind::Array)
      throw SpecParseError("expected an array of [t, v] pairs", body->line,
                           which + ".samples");
    std::vector<double> ts, vs;
    for (const auto& pair : body->array) {
      if (pair->kind != Value::Kind::Array || pair->array.size() != 2)
        throw SpecParseError("expected a [t, v] pair", pair->line,
                             which + ".samples");
      ts.push_back(expect_number(*pair->array[0], which + ".samples"));
      vs.push_back(expect_number(*pair->array[1], which + ".samples"));
    }
    if (ts.size() < 8)
      throw SpecParseError("samples need at least 8 nodes", body->line,
                           which + ".samples");
    const size_t n = ts.size();
    for (size_t i = 0; i < n; ++i) {
      const double want = static_cast<double>(i) / (n - 1);
      if (std::abs(ts[i] - want) > 1e-9)
        throw SpecParseError("samples must lie on the uniform grid over [0,1]",
                             body->line, which + ".samples");
    }
    return CoefficientFunction(SampledFunction(std::move(vs)));
  }

  throw SpecParseError("unknown variant '" + variant + "'", v.line, which);
}

void serialize_coefficient(std::string& out, const std::string& name,
                           const CoefficientFunction& f) {
  out += name;
  out += ": ";
  if (f.is_trig()) {
    const TrigPoly& p = f.trig();
    out += "{trig: {c0: " + format_double(p.c0) + ", cos: [";
    for (size_t i = 0; i < p.cos_coeffs.size(); ++i)
      out += (i ? ", " : "") + format_double(p.cos_coeffs[i]);
    out += "], sin: [";
    for (size_t i = 0; i < p.sin_coeffs.size(); ++i)
      out += (i ? ", " : "") + format_double(p.sin_coeffs[i]);
    out += "]}}\n";
  } else if (f.is_poly()) {
    out += "{poly: {terms: [";
    const auto& terms = f.poly().terms;
    for (size_t i = 0; i < terms.size(); ++i) {
      out += (i ? ", [" : "[") + std::to_string(terms[i].exponent) + ", " +
             format_double(terms[i].coefficient) + "]";
    }
    out += "]}}\n";
  } else {
    const auto& vals = f.sampled().values;
    out += "{samples: [";
    const size_t n = vals.size();
    for (size_t i = 0; i < n; ++i) {
      out += (i ? ", [" : "[") + format_double(static_cast<double>(i) / (n - 1)) +
             ", " + format_double(vals[i]) + "]";
    }
    out += "]}\n";
  }
}

}  // namespace

AbelEquation parse_spec(const std::string& text) {
  Parser parser(text);
  auto doc = parser.parse_document();
  std::optional<CoefficientFunction> A, B, C;
  for (const auto& [key, value] : doc) {
    if (key == "A") A = build_coefficient(*value, "A");
    else if (key == "B") B = build_coefficient(*value, "B");
    else if (key == "C") C = build_coefficient(*value, "C");
    else throw SpecParseError("unknown top-level key '" + key + "'", value->line, key);
  }
  if (!A) throw SpecParseError("missing required field", 1, "A");
  if (!B) throw SpecParseError("missing required field", 1, "B");
  return AbelEquation(std::move(*A), std::move(*B),
                      C ? std::move(*C) : CoefficientFunction::zero());
}

std::string serialize_spec(const AbelEquation& eq) {
  std::string out;
  serialize_coefficient(out, "A", eq.A);
  serialize_coefficient(out, "B", eq.B);
  if (!(eq.C == CoefficientFunction::zero()))
    serialize_coefficient(out, "C", eq.C);
  return out;
}

}  // namespace abel
