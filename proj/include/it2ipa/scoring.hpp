#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include "it2num.hpp"
#include "survey.hpp"

namespace it2ipa {

enum class score_kind { success, failure };

// as_written: W * (1 - R).  as_computed: R / W, the form that matches the
// published failure scores.
enum class cffs_mode { as_written, as_computed };

constexpr std::string_view to_string(score_kind k) noexcept {
  return k == score_kind::success ? "success" : "failure";
}

constexpr std::string_view to_string(cffs_mode m) noexcept {
  return m == cffs_mode::as_written ? "as_written" : "as_computed";
}

struct fuzzy_score {
  factor info;
  score_kind kind = score_kind::success;
  it2_number value;
  std::optional<cffs_mode> mode;  // set for failure scores only
};

/// Critical success score W * R.
inline fuzzy_score csfs(const factor& f, const it2_number& w, const it2_number& r) {
  return {f, score_kind::success, mul(w, r), std::nullopt};
}

/// Critical failure score in the requested mode.
inline fuzzy_score cffs(const factor& f, const it2_number& w, const it2_number& r,
                        cffs_mode mode = cffs_mode::as_computed) {
  it2_number v = mode == cffs_mode::as_written ? mul(w, one_minus(r)) : div(r, w).value;
  return {f, score_kind::failure, v, mode};
}

// ---------------------------------------------------------------------------
// Ranking value of an IT2 number: pairwise endpoint means, minus a quarter
// of the endpoint deviations, plus the membership heights.

struct trapezoid_terms {
  std::array<double, 3> m{};  // mean of endpoints p, p+1
  std::array<double, 4> s{};  // deviation of endpoints p, p+1; s[3] over all four
  double h1 = 0.0;
  double h2 = 0.0;
};

struct rank_breakdown {
  trapezoid_terms upper;
  trapezoid_terms lower;
  double rank = 0.0;
};

namespace detail {

inline trapezoid_terms rank_terms(const trapezoid& t) {
  trapezoid_terms r;
  for (std::size_t p = 0; p < 3; ++p) {
    r.m[p] = (t.x[p] + t.x[p + 1]) / 2.0;
    // population standard deviation of a pair
    r.s[p] = std::abs(t.x[p + 1] - t.x[p]) / 2.0;
  }
  const double mean = (t.x[0] + t.x[1] + t.x[2] + t.x[3]) / 4.0;
  double ss = 0.0;
  for (double v : t.x) ss += (v - mean) * (v - mean);
  r.s[3] = std::sqrt(ss / 4.0);
  r.h1 = t.h1;
  r.h2 = t.h2;
  return r;
}

}  // namespace detail

/// Accepts raw (possibly unordered) tuples.
inline rank_breakdown rank(const it2_number& a) {
  rank_breakdown b;
  b.upper = detail::rank_terms(a.upper);
  b.lower = detail::rank_terms(a.lower);
  double means = 0.0, devs = 0.0, heights = 0.0;
  for (const auto* t : {&b.upper, &b.lower}) {
    for (double v : t->m) means += v;
    for (double v : t->s) devs += v;
    heights += t->h1 + t->h2;
  }
  b.rank = means - devs / 4.0 + heights;
  return b;
}

/// Natural ordering for factor ids: digit runs compare numerically,
/// so "x_3" sorts before "x_11".
inline bool natural_less(std::string_view a, std::string_view b) {
  std::size_t i = 0, j = 0;
  auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  while (i < a.size() && j < b.size()) {
    if (digit(a[i]) && digit(b[j])) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && digit(a[ie])) ++ie;
      while (je < b.size() && digit(b[je])) ++je;
      std::string_view na = a.substr(i, ie - i), nb = b.substr(j, je - j);
      while (na.size() > 1 && na.front() == '0') na.remove_prefix(1);
      while (nb.size() > 1 && nb.front() == '0') nb.remove_prefix(1);
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if (a.size() - i != b.size() - j) return a.size() - i < b.size() - j;
  return a < b;
}

struct ranked_factor {
  fuzzy_score score;
  rank_breakdown breakdown;
  std::size_t position = 0;  // 1-based
};

/// Descending by rank value; ties go to the smaller factor id.
inline std::vector<ranked_factor> rank_order(const std::vector<fuzzy_score>& scores) {
  std::vector<ranked_factor> out;
  out.reserve(scores.size());
  for (const auto& s : scores) {
    if (s.kind != scores.front().kind)
      throw error(errc::mixed_kinds, "cannot rank success and failure scores together");
    out.push_back({s, rank(s.value), 0});
  }
  std::sort(out.begin(), out.end(), [](const ranked_factor& x, const ranked_factor& y) {
    if (x.breakdown.rank != y.breakdown.rank) return x.breakdown.rank > y.breakdown.rank;
    return natural_less(x.score.info.id, y.score.info.id);
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].position = i + 1;
  return out;
}

}  // namespace it2ipa
