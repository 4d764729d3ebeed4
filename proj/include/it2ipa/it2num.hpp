#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "error.hpp"

namespace it2ipa {

/// One trapezoidal membership function: four ordered endpoints and the
/// membership heights reached at the second and third endpoint.
struct trapezoid {
  std::array<double, 4> x{};
  double h1 = 1.0;
  double h2 = 1.0;

  friend bool operator==(const trapezoid&, const trapezoid&) = default;
};

/// Interval type-2 trapezoidal fuzzy number. The lower membership function
/// sits inside the upper one (the footprint of uncertainty lies between).
struct it2_number {
  trapezoid upper;
  trapezoid lower;

  friend bool operator==(const it2_number&, const it2_number&) = default;
};

/// Result of an operation that can leave the endpoint order broken.
/// The tuple is kept as computed; downstream formulas work on raw tuples.
struct arith_result {
  it2_number value;
  bool ordering_violated = false;
};

constexpr trapezoid make_trapezoid(double a1, double a2, double a3, double a4,
                                   double h1 = 1.0, double h2 = 1.0) {
  return trapezoid{{a1, a2, a3, a4}, h1, h2};
}

constexpr it2_number crisp(double c) {
  return it2_number{make_trapezoid(c, c, c, c), make_trapezoid(c, c, c, c)};
}

inline bool is_ordered(const trapezoid& t) noexcept {
  return t.x[0] <= t.x[1] && t.x[1] <= t.x[2] && t.x[2] <= t.x[3];
}

inline bool is_ordered(const it2_number& a) noexcept {
  return is_ordered(a.upper) && is_ordered(a.lower);
}

/// Lists every broken invariant; empty means the number is valid.
inline std::vector<std::string> violations(const it2_number& a) {
  std::vector<std::string> out;
  auto check_trap = [&](const trapezoid& t, const char* which) {
    for (double v : t.x) {
      if (!std::isfinite(v)) {
        out.push_back(std::string(which) + " endpoint is not finite");
        return;
      }
    }
    if (!is_ordered(t)) out.push_back(std::string(which) + " endpoints are not non-decreasing");
    if (!(t.h1 > 0.0 && t.h1 <= 1.0)) out.push_back(std::string(which) + " h1 outside (0, 1]");
    if (!(t.h2 > 0.0 && t.h2 <= 1.0)) out.push_back(std::string(which) + " h2 outside (0, 1]");
  };
  check_trap(a.upper, "upper");
  check_trap(a.lower, "lower");
  if (a.lower.x[0] < a.upper.x[0] || a.lower.x[3] > a.upper.x[3])
    out.emplace_back("lower support not contained in upper support");
  if (a.lower.h1 > a.upper.h1 || a.lower.h2 > a.upper.h2)
    out.emplace_back("lower heights exceed upper heights");
  return out;
}

inline bool is_valid(const it2_number& a) { return violations(a).empty(); }

/// Validating constructor; throws errc::invalid_number listing the violations.
inline it2_number make_it2(const trapezoid& upper, const trapezoid& lower) {
  it2_number a{upper, lower};
  auto v = violations(a);
  if (!v.empty()) {
    std::string msg = "invalid IT2 number:";
    for (const auto& s : v) msg += " " + s + ";";
    throw error(errc::invalid_number, msg);
  }
  return a;
}

namespace detail {

template <class Op>
trapezoid zip(const trapezoid& a, const trapezoid& b, Op op) {
  trapezoid r;
  for (std::size_t k = 0; k < 4; ++k) r.x[k] = op(a.x[k], b.x[k]);
  r.h1 = std::min(a.h1, b.h1);
  r.h2 = std::min(a.h2, b.h2);
  return r;
}

// Endpoint k of the quotient uses the divisor's endpoint 5-k (1-based).
inline trapezoid cross_divide(const trapezoid& a, const trapezoid& b) {
  trapezoid r;
  for (std::size_t k = 0; k < 4; ++k) r.x[k] = a.x[k] / b.x[3 - k];
  r.h1 = std::min(a.h1, b.h1);
  r.h2 = std::min(a.h2, b.h2);
  return r;
}

}  // namespace detail

inline it2_number add(const it2_number& a, const it2_number& b) {
  return {detail::zip(a.upper, b.upper, std::plus<>{}),
          detail::zip(a.lower, b.lower, std::plus<>{})};
}

/// Endpoint-wise a - b in the same index order (no reversal).
inline arith_result sub(const it2_number& a, const it2_number& b) {
  it2_number r{detail::zip(a.upper, b.upper, std::minus<>{}),
               detail::zip(a.lower, b.lower, std::minus<>{})};
  return {r, !is_ordered(r)};
}

/// Approximate product, endpoint-wise. Only defined for non-negative supports.
inline it2_number mul(const it2_number& a, const it2_number& b) {
  if (a.upper.x[0] < 0.0 || b.upper.x[0] < 0.0)
    throw error(errc::negative_support, "multiplication requires non-negative supports");
  return {detail::zip(a.upper, b.upper, std::multiplies<>{}),
          detail::zip(a.lower, b.lower, std::multiplies<>{})};
}

/// Approximate quotient with the divisor's endpoints reversed per trapezoid.
inline arith_result div(const it2_number& a, const it2_number& b) {
  if (!(b.upper.x[0] > 0.0))
    throw error(errc::divisor_spans_zero, "divisor support must be strictly positive");
  it2_number r{detail::cross_divide(a.upper, b.upper), detail::cross_divide(a.lower, b.lower)};
  return {r, !is_ordered(r)};
}

inline it2_number scalar_div(const it2_number& a, unsigned m) {
  if (m == 0) throw error(errc::invalid_divisor, "scalar divisor must be at least 1");
  const double d = static_cast<double>(m);
  it2_number r = a;
  for (auto* t : {&r.upper, &r.lower})
    for (double& v : t->x) v /= d;
  return r;
}

/// Crisp one minus a fuzzy number: endpoint k becomes 1 - endpoint(5-k).
inline it2_number one_minus(const it2_number& a) {
  auto reflect = [](const trapezoid& t) {
    return trapezoid{{1.0 - t.x[3], 1.0 - t.x[2], 1.0 - t.x[1], 1.0 - t.x[0]}, t.h1, t.h2};
  };
  return {reflect(a.upper), reflect(a.lower)};
}

inline it2_number operator+(const it2_number& a, const it2_number& b) { return add(a, b); }
inline it2_number operator*(const it2_number& a, const it2_number& b) { return mul(a, b); }

/// Largest endpoint-wise absolute difference, heights included.
inline double max_abs_diff(const it2_number& a, const it2_number& b) {
  double d = 0.0;
  auto cmp = [&](const trapezoid& s, const trapezoid& t) {
    for (std::size_t k = 0; k < 4; ++k) d = std::max(d, std::abs(s.x[k] - t.x[k]));
    d = std::max({d, std::abs(s.h1 - t.h1), std::abs(s.h2 - t.h2)});
  };
  cmp(a.upper, b.upper);
  cmp(a.lower, b.lower);
  return d;
}

// ---------------------------------------------------------------------------
// Canonical text form: ((a1,a2,a3,a4;h1,h2),(b1,b2,b3,b4;g1,g2))

/// Formats a real. decimals < 0 gives the shortest round-trip form;
/// otherwise rounds to that many decimals and drops trailing zeros.
inline std::string format_real(double v, int decimals = -1) {
  char buf[64];
  if (decimals < 0) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
  }
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

inline std::string to_string(const trapezoid& t, int decimals = -1) {
  std::string s = "(";
  for (std::size_t k = 0; k < 4; ++k) {
    if (k) s += ',';
    s += format_real(t.x[k], decimals);
  }
  s += ';' + format_real(t.h1, decimals) + ',' + format_real(t.h2, decimals) + ')';
  return s;
}

inline std::string to_string(const it2_number& a, int decimals = -1) {
  return "(" + to_string(a.upper, decimals) + "," + to_string(a.lower, decimals) + ")";
}

namespace detail {

class text_cursor {
 public:
  explicit text_cursor(std::string_view s) : s_(s) {}

  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  double number() {
    skip_ws();
    double v = 0.0;
    const char* first = s_.data() + pos_;
    const char* last = s_.data() + s_.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{}) fail("expected a number");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return v;
  }

  void finish() {
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw error(errc::parse_error,
                "malformed IT2 number '" + std::string(s_) + "': " + what + " at offset " +
                    std::to_string(pos_));
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

inline trapezoid parse_trapezoid(text_cursor& c) {
  trapezoid t;
  c.expect('(');
  for (std::size_t k = 0; k < 4; ++k) {
    if (k) c.expect(',');
    t.x[k] = c.number();
  }
  c.expect(';');
  t.h1 = c.number();
  c.expect(',');
  t.h2 = c.number();
  c.expect(')');
  return t;
}

}  // namespace detail

/// Parses the canonical form. Does not validate; use make_it2 or violations().
inline it2_number parse_it2(std::string_view text) {
  detail::text_cursor c(text);
  c.expect('(');
  it2_number a;
  a.upper = detail::parse_trapezoid(c);
  c.expect(',');
  a.lower = detail::parse_trapezoid(c);
  c.expect(')');
  c.finish();
  return a;
}

}  // namespace it2ipa
