#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "defuzz.hpp"
#include "it2num.hpp"
#include "lingscale.hpp"
#include "region.hpp"

namespace it2ipa {

struct factor {
  std::string id;  // e.g. "x_1"
  std::string name;
  std::string dimension;
};

enum class facet { importance, performance };

constexpr std::string_view to_string(facet f) noexcept {
  return f == facet::importance ? "importance" : "performance";
}

/// Linguistic ratings, factor x expert, for both facets. Dense.
struct rating_matrix {
  std::vector<factor> factors;
  std::vector<std::string> experts;
  std::vector<std::vector<std::string>> importance;
  std::vector<std::vector<std::string>> performance;
  // Optional source line per factor and facet ({importance, performance}),
  // used to locate errors in the input file.
  std::vector<std::array<std::size_t, 2>> source_lines;
};

/// Aggregated view of one factor. e_w/e_r are zero until defuzzify() runs;
/// region stays empty until the factor is placed on the map.
struct factor_profile {
  factor info;
  it2_number w;  // importance
  it2_number r;  // performance
  double e_w = 0.0;
  double e_r = 0.0;
  std::optional<map_region> region;
};

/// Arithmetic mean of a non-empty set of IT2 numbers.
inline it2_number mean(std::span<const it2_number> values) {
  if (values.empty()) throw error(errc::empty_matrix, "cannot average zero ratings");
  it2_number sum = values.front();
  for (std::size_t i = 1; i < values.size(); ++i) sum = add(sum, values[i]);
  return scalar_div(sum, static_cast<unsigned>(values.size()));
}

/// Averages each factor's expert ratings per facet. Unknown labels are
/// reported with factor, expert and facet.
inline std::vector<factor_profile> aggregate(const rating_matrix& m, const linguistic_scale& scale) {
  if (m.factors.empty()) throw error(errc::empty_matrix, "rating matrix has no factors");
  if (m.experts.empty()) throw error(errc::empty_matrix, "rating matrix has no experts");
  if (m.importance.size() != m.factors.size() || m.performance.size() != m.factors.size())
    throw error(errc::empty_matrix, "rating grids do not cover every factor");

  std::vector<factor_profile> out;
  out.reserve(m.factors.size());
  std::vector<it2_number> buf;
  for (std::size_t j = 0; j < m.factors.size(); ++j) {
    auto facet_mean = [&](const std::vector<std::string>& row, facet f) {
      if (row.size() != m.experts.size())
        throw error(errc::empty_matrix, "factor " + m.factors[j].id + " has " +
                                            std::to_string(row.size()) + " " +
                                            std::string(to_string(f)) + " ratings for " +
                                            std::to_string(m.experts.size()) + " experts");
      buf.clear();
      for (std::size_t t = 0; t < row.size(); ++t) {
        try {
          buf.push_back(scale.lookup(row[t]));
        } catch (const error& e) {
          error located(e.code(), "factor " + m.factors[j].id + ", expert " + m.experts[t] + " (" +
                                      std::string(to_string(f)) + "): " + e.what());
          if (j < m.source_lines.size())
            located.at_row(m.source_lines[j][f == facet::importance ? 0 : 1]);
          throw located;
        }
      }
      return mean(buf);
    };
    factor_profile p;
    p.info = m.factors[j];
    p.w = facet_mean(m.importance[j], facet::importance);
    p.r = facet_mean(m.performance[j], facet::performance);
    out.push_back(std::move(p));
  }
  return out;
}

/// Fills e_w and e_r from the fuzzy fields.
inline void defuzzify(std::vector<factor_profile>& profiles) {
  for (auto& p : profiles) {
    p.e_w = dtrat(p.w);
    p.e_r = dtrat(p.r);
  }
}

// ---------------------------------------------------------------------------
// Questionnaire psychometrics

/// Lawshe content validity ratio (n_e - N/2) / (N/2).
inline double cvr(long n_essential, long n_panel) {
  if (n_panel < 1 || n_essential < 0 || n_essential > n_panel)
    throw error(errc::invalid_counts, "CVR needs 0 <= essential (" + std::to_string(n_essential) +
                                          ") <= panel (" + std::to_string(n_panel) + "), panel >= 1");
  const double half = static_cast<double>(n_panel) / 2.0;
  return (static_cast<double>(n_essential) - half) / half;
}

inline constexpr double default_cvr_threshold = 0.59;
inline constexpr double default_alpha_threshold = 0.7;

/// A component is retained when its CVR strictly exceeds the threshold.
inline bool cvr_passes(double value, double threshold = default_cvr_threshold) noexcept {
  return value > threshold;
}

/// Cronbach's alpha over a respondents x items grid, sample variances.
inline double cronbach_alpha(std::span<const std::vector<double>> scores) {
  const std::size_t n = scores.size();
  if (n < 2) throw error(errc::degenerate_data, "Cronbach's alpha needs at least 2 respondents");
  const std::size_t k = scores.front().size();
  if (k < 2) throw error(errc::degenerate_data, "Cronbach's alpha needs at least 2 items");
  for (const auto& row : scores)
    if (row.size() != k) throw error(errc::degenerate_data, "score grid rows differ in length");

  auto sample_variance = [n](auto&& value_at) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += value_at(i);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = value_at(i) - mean;
      ss += d * d;
    }
    return ss / static_cast<double>(n - 1);
  };

  double item_var_sum = 0.0;
  for (std::size_t item = 0; item < k; ++item)
    item_var_sum += sample_variance([&](std::size_t i) { return scores[i][item]; });

  const double total_var = sample_variance([&](std::size_t i) {
    double s = 0.0;
    for (double v : scores[i]) s += v;
    return s;
  });
  if (!(total_var > 0.0)) throw error(errc::degenerate_data, "total-score variance is zero");

  const double kd = static_cast<double>(k);
  return kd / (kd - 1.0) * (1.0 - item_var_sum / total_var);
}

}  // namespace it2ipa
