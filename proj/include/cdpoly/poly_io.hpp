#pragma once

#include <cctype>
#include <charconv>
#include <cstddef>
#include <string>
#include <string_view>
#include <system_error>

#include "json.hpp"

#include "cdpoly/errors.hpp"
#include "cdpoly/polynomial.hpp"

namespace cdpoly {

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <Coefficient K>
std::string format_coefficient(const K& c) {
  if constexpr (std::same_as<K, Rational>) {
    return c.get_str();
  } else {
    return format_double(c);
  }
}

template <Coefficient K>
bool is_unit(const K& c) {
  if constexpr (std::same_as<K, Rational>) {
    return c == 1;
  } else {
    return c == 1.0;
  }
}

// Recursive-descent parser over the grammar
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ['^' integer]
//   atom   := number | 'x'<i> | 'y'<i> | '(' expr ')'
template <Coefficient K>
class Parser {
 public:
  Parser(std::string_view text, std::size_t nvars, bool doubled)
      : text_(text), nvars_(nvars), doubled_(doubled) {
    if (doubled_ && nvars_ % 2 != 0) throw DimensionError("doubled variable naming needs even nvars");
  }

  Polynomial<K> parse() {
    skip_ws();
    if (at_end()) throw ParseError("empty polynomial", pos_);
    Polynomial<K> p = expr();
    skip_ws();
    if (!at_end()) throw ParseError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
    return p;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  Polynomial<K> expr() {
    skip_ws();
    bool negate = false;
    if (peek() == '+' || peek() == '-') {
      negate = peek() == '-';
      ++pos_;
    }
    Polynomial<K> acc = term();
    if (negate) acc = -acc;
    for (;;) {
      skip_ws();
      char c = peek();
      if (c != '+' && c != '-') break;
      ++pos_;
      Polynomial<K> t = term();
      if (c == '+') acc += t; else acc -= t;
    }
    return acc;
  }

  Polynomial<K> term() {
    Polynomial<K> acc = factor();
    for (;;) {
      skip_ws();
      if (peek() != '*') break;
      ++pos_;
      acc = acc * factor();
    }
    return acc;
  }

  Polynomial<K> factor() {
    Polynomial<K> base = atom();
    skip_ws();
    if (peek() != '^') return base;
    ++pos_;
    skip_ws();
    const std::size_t start = pos_;
    if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) {
      throw ParseError("malformed exponent", start);
    }
    int e = read_int("exponent");
    Polynomial<K> out = Polynomial<K>::constant(nvars_, K(1));
    for (int i = 0; i < e; ++i) out = out * base;
    return out;
  }

  Polynomial<K> atom() {
    skip_ws();
    const std::size_t start = pos_;
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Polynomial<K> inner = expr();
      skip_ws();
      if (peek() != ')') throw ParseError("expected ')'", pos_);
      ++pos_;
      return inner;
    }
    if (c == 'x' || c == 'y') {
      ++pos_;
      if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) {
        throw ParseError("variable name needs an index", pos_);
      }
      int idx = read_int("variable index");
      if (idx == 0) throw ParseError("variables are 1-indexed", start);
      return Polynomial<K>::variable(nvars_, variable_slot(c, static_cast<std::size_t>(idx), start));
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return Polynomial<K>::constant(nvars_, number());
    }
    if (at_end()) throw ParseError("unexpected end of input", start);
    throw ParseError(std::string("unexpected character '") + c + "'", start);
  }

  std::size_t variable_slot(char name, std::size_t idx, std::size_t at) const {
    if (doubled_) {
      const std::size_t d = nvars_ / 2;
      if (idx > d) throw ParseError("unknown variable " + std::string(1, name) + std::to_string(idx), at);
      return name == 'x' ? idx - 1 : d + idx - 1;
    }
    if (name == 'y') throw ParseError("unknown variable y" + std::to_string(idx), at);
    if (idx > nvars_) throw ParseError("unknown variable x" + std::to_string(idx), at);
    return idx - 1;
  }

  int read_int(const char* what) {
    const std::size_t start = pos_;
    int v = 0;
    auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (res.ec != std::errc()) throw ParseError(std::string("malformed ") + what, start);
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    return v;
  }

  K number() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
    const bool decimal = end < text_.size() && (text_[end] == '.' || text_[end] == 'e' || text_[end] == 'E');
    if (decimal) {
      double v = 0.0;
      auto res = std::from_chars(text_.data() + start, text_.data() + text_.size(), v);
      if (res.ec != std::errc()) throw ParseError("malformed number", start);
      pos_ = static_cast<std::size_t>(res.ptr - text_.data());
      if constexpr (std::same_as<K, Rational>) {
        // Decimal literals are exact in rational mode: 0.25 -> 1/4.
        std::string digits(text_.substr(start, pos_ - start));
        return decimal_to_rational(digits, start);
      } else {
        return v;
      }
    }
    std::string num(text_.substr(start, end - start));
    pos_ = end;
    std::string den = "1";
    if (peek() == '/') {
      ++pos_;
      const std::size_t dstart = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      if (pos_ == dstart) throw ParseError("malformed denominator", dstart);
      den = std::string(text_.substr(dstart, pos_ - dstart));
      if (den.find_first_not_of('0') == std::string::npos) throw ParseError("zero denominator", dstart);
    }
    Rational q{BigInt(num, 10), BigInt(den, 10)};
    q.canonicalize();
    if constexpr (std::same_as<K, Rational>) {
      return q;
    } else {
      return q.get_d();
    }
  }

  static Rational decimal_to_rational(const std::string& s, std::size_t at) {
    std::size_t epos = s.find_first_of("eE");
    std::string mant = s.substr(0, epos);
    long exp10 = 0;
    if (epos != std::string::npos) {
      try {
        exp10 = std::stol(s.substr(epos + 1));
      } catch (const std::exception&) {
        throw ParseError("malformed exponent in number", at);
      }
    }
    std::size_t dot = mant.find('.');
    std::string digits = mant;
    if (dot != std::string::npos) {
      exp10 -= static_cast<long>(mant.size() - dot - 1);
      digits.erase(dot, 1);
    }
    if (digits.empty()) throw ParseError("malformed number", at);
    BigInt n(digits, 10);
    BigInt p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    Rational q = exp10 < 0 ? Rational(n, p) : Rational(n * p);
    q.canonicalize();
    return q;
  }

  std::string_view text_;
  std::size_t nvars_;
  bool doubled_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses the text grammar (x1..xd, and y1..yd when `doubled`).
template <Coefficient K>
Polynomial<K> parse_polynomial(std::string_view text, std::size_t nvars, bool doubled = false) {
  return detail::Parser<K>(text, nvars, doubled).parse();
}

/// Largest variable index appearing as x<i> or y<i> in the text (0 if none).
inline std::size_t max_variable_index(std::string_view text) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if ((text[i] == 'x' || text[i] == 'y') && i + 1 < text.size() &&
        std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
      std::size_t v = 0;
      std::size_t j = i + 1;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
        v = v * 10 + static_cast<std::size_t>(text[j] - '0');
        ++j;
      }
      best = std::max(best, v);
      i = j - 1;
    }
  }
  return best;
}

inline std::string format_monomial(const Monomial& m, bool doubled = false) {
  std::string out;
  const std::size_t d = doubled ? m.nvars() / 2 : m.nvars();
  for (std::size_t i = 0; i < m.nvars(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += (doubled && i >= d) ? 'y' : 'x';
    out += std::to_string((doubled && i >= d) ? i - d + 1 : i + 1);
    if (m[i] > 1) out += '^' + std::to_string(m[i]);
  }
  return out;
}

/// Canonical text: terms in descending monomial order, "a/b*x1^2*x2" style.
template <Coefficient K>
std::string format_polynomial(const Polynomial<K>& p, bool doubled = false) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    const bool negative = c < 0;
    K mag = negative ? K(-c) : c;
    if (first) {
      if (negative) out += '-';
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    const std::string mono = format_monomial(m, doubled);
    if (mono.empty()) {
      out += detail::format_coefficient(mag);
    } else if (detail::is_unit(mag)) {
      out += mono;
    } else {
      out += detail::format_coefficient(mag) + '*' + mono;
    }
  }
  return out;
}

/// {nvars, terms:[{exps, num, den}]} (rational) or {nvars, terms:[{exps, val}]} (float).
template <Coefficient K>
nlohmann::json to_json(const Polynomial<K>& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [m, c] : p.terms()) {
    nlohmann::json t;
    t["exps"] = std::vector<int>(m.exponents().begin(), m.exponents().end());
    if constexpr (std::same_as<K, Rational>) {
      t["num"] = c.get_num().get_str();
      t["den"] = c.get_den().get_str();
    } else {
      t["val"] = c;
    }
    terms.push_back(std::move(t));
  }
  return {{"nvars", p.nvars()}, {"terms", std::move(terms)}};
}

namespace detail {
inline BigInt json_bigint(const nlohmann::json& j) {
  if (j.is_string()) return BigInt(j.get<std::string>(), 10);
  if (j.is_number_integer()) return BigInt(j.get<long>());
  throw DimensionError("rational component must be an integer or integer string");
}
}  // namespace detail

template <Coefficient K>
Polynomial<K> polynomial_from_json(const nlohmann::json& j) {
  const std::size_t nvars = j.at("nvars").get<std::size_t>();
  Polynomial<K> p(nvars);
  for (const auto& t : j.at("terms")) {
    Monomial m(t.at("exps").get<std::vector<int>>());
    if (m.nvars() != nvars) throw DimensionError("term arity does not match nvars");
    Rational q;
    if (t.contains("val")) {
      if constexpr (std::same_as<K, Rational>) {
        q = Rational(t.at("val").get<double>());
      } else {
        p.add_term(m, t.at("val").get<double>());
        continue;
      }
    } else {
      q = Rational(detail::json_bigint(t.at("num")), detail::json_bigint(t.at("den")));
      q.canonicalize();
    }
    p.add_term(m, coeff_traits<K>::from_rational(q));
  }
  return p;
}

}  // namespace cdpoly
