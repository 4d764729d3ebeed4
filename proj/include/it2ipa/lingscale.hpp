#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "defuzz.hpp"
#include "it2num.hpp"

namespace it2ipa {

struct term {
  std::string label;
  it2_number value;
};

namespace detail {

inline std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::string fold(std::string_view s) {
  s = trim(s);
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace detail

/// Ordered verbal terms mapped to IT2 numbers, weakest first.
/// Immutable once built.
class linguistic_scale {
 public:
  linguistic_scale() = default;
  explicit linguistic_scale(std::vector<term> terms) : terms_(std::move(terms)) {}

  const std::vector<term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Case-insensitive, whitespace-trimmed exact match.
  const it2_number& lookup(std::string_view label) const {
    const std::string key = detail::fold(label);
    if (!key.empty()) {
      for (const auto& t : terms_)
        if (detail::fold(t.label) == key) return t.value;
    }
    throw error(errc::unknown_term,
                "unknown linguistic term '" + std::string(label) + "'; expected one of: " + vocabulary());
  }

  std::string vocabulary() const {
    std::string s;
    for (const auto& t : terms_) {
      if (!s.empty()) s += ", ";
      s += t.label;
    }
    return s;
  }

 private:
  std::vector<term> terms_;
};

/// Five-term scale used to collect the ratings (upper heights 1, lower 0.9).
inline linguistic_scale default_scale() {
  auto t = [](double a1, double a2, double a3, double a4, double b1, double b2, double b3,
              double b4) {
    return it2_number{make_trapezoid(a1, a2, a3, a4, 1.0, 1.0),
                      make_trapezoid(b1, b2, b3, b4, 0.9, 0.9)};
  };
  return linguistic_scale({
      {"Very Low", t(0, 0, 0, 0.1, 0, 0, 0, 0.05)},
      {"Low", t(0, 0.1, 0.1, 0.3, 0.05, 0.1, 0.1, 0.2)},
      {"Medium", t(0.3, 0.5, 0.5, 0.7, 0.4, 0.5, 0.5, 0.6)},
      {"High", t(0.7, 0.9, 0.9, 1, 0.8, 0.9, 0.9, 0.95)},
      {"Very High", t(0.9, 1, 1, 1, 0.95, 1, 1, 1)},
  });
}

/// Every broken scale invariant, one message per problem.
inline std::vector<std::string> validate_scale(const linguistic_scale& scale) {
  std::vector<std::string> out;
  const auto& terms = scale.terms();
  if (terms.empty()) out.emplace_back("scale has no terms");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    if (detail::trim(t.label).empty()) out.push_back("term " + std::to_string(i + 1) + " has an empty label");
    for (std::size_t j = 0; j < i; ++j) {
      if (detail::fold(terms[j].label) == detail::fold(t.label)) {
        out.push_back("duplicate label '" + t.label + "'");
        break;
      }
    }
    for (const auto& v : violations(t.value)) out.push_back("term '" + t.label + "': " + v);
    const auto& u = t.value.upper;
    const auto& l = t.value.lower;
    if (u.x[0] < 0.0 || u.x[3] > 1.0 || l.x[0] < 0.0 || l.x[3] > 1.0)
      out.push_back("term '" + t.label + "' has support outside [0, 1]");
    if (i > 0 && !(dtrat(terms[i - 1].value) < dtrat(t.value)))
      out.push_back("defuzzified value of '" + t.label + "' does not exceed that of '" +
                    terms[i - 1].label + "'");
  }
  return out;
}

}  // namespace it2ipa
