#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "region.hpp"
#include "survey.hpp"

namespace it2ipa {

/// Cut points splitting each axis into low/medium/high.
struct map_thresholds {
  double t1 = 1.0 / 3.0;
  double t2 = 2.0 / 3.0;

  static map_thresholds make(double t1, double t2) {
    if (!(0.0 < t1 && t1 < t2 && t2 < 1.0))
      throw error(errc::invalid_thresholds, "thresholds must satisfy 0 < t1 < t2 < 1");
    return {t1, t2};
  }
};

// [0,t1) low, [t1,t2) medium, [t2,1] high.
inline band band_of(double v, const map_thresholds& th) noexcept {
  if (v < th.t1) return band::low;
  if (v < th.t2) return band::medium;
  return band::high;
}

inline map_region place(double e_w, double e_r, const map_thresholds& th = {}) {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(e_w) || !in_unit(e_r))
    throw error(errc::out_of_range, "map coordinates must lie in [0, 1] (importance " +
                                        format_real(e_w) + ", performance " + format_real(e_r) + ")");
  map_region r;
  r.importance = band_of(e_w, th);
  r.performance = band_of(e_r, th);
  const int wi = static_cast<int>(r.importance);
  const int ri = static_cast<int>(r.performance);
  r.where = wi > ri ? zone::weakness : (wi == ri ? zone::balanced : zone::strength);
  return r;
}

inline void place_all(std::vector<factor_profile>& profiles, const map_thresholds& th = {}) {
  for (auto& p : profiles) {
    try {
      p.region = place(p.e_w, p.e_r, th);
    } catch (const error& e) {
      throw error(e.code(), "factor " + p.info.id + ": " + e.what());
    }
  }
}

enum class partition_mode {
  region,      // zone on the 3x3 map decides
  comparison,  // sign of e_w - e_r decides
};

struct partition_result {
  std::vector<factor_profile> failure;  // critical failure candidates
  std::vector<factor_profile> success;  // critical success candidates
  std::vector<factor_profile> balanced;
};

inline partition_result partition(const std::vector<factor_profile>& profiles,
                                  const map_thresholds& th, partition_mode mode) {
  partition_result out;
  for (const auto& p : profiles) {
    if (mode == partition_mode::region) {
      const map_region reg = p.region ? *p.region : place(p.e_w, p.e_r, th);
      switch (reg.where) {
        case zone::weakness: out.failure.push_back(p); break;
        case zone::strength: out.success.push_back(p); break;
        case zone::balanced: out.balanced.push_back(p); break;
      }
    } else {
      if (p.e_w > p.e_r)
        out.failure.push_back(p);
      else if (p.e_w < p.e_r)
        out.success.push_back(p);
      else
        out.balanced.push_back(p);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rendering

enum class map_format { svg, text, structured };

inline map_format parse_map_format(std::string_view s) {
  if (s == "svg") return map_format::svg;
  if (s == "text") return map_format::text;
  if (s == "structured" || s == "json") return map_format::structured;
  throw error(errc::unsupported_format, "unsupported map format '" + std::string(s) + "'");
}

constexpr std::string_view file_extension(map_format f) noexcept {
  switch (f) {
    case map_format::svg: return "svg";
    case map_format::text: return "txt";
    case map_format::structured: return "json";
  }
  return "";
}

namespace detail {

inline std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string svg_num(double v) { return format_real(v, 2); }

inline std::string render_svg(const std::vector<factor_profile>& profiles, const map_thresholds& th) {
  constexpr double margin = 60.0;
  constexpr double side = 480.0;
  constexpr double total = side + 2 * margin;
  // performance on x, importance on y (y grows upward on the map)
  auto px = [&](double v) { return margin + v * side; };
  auto py = [&](double v) { return margin + (1.0 - v) * side; };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + svg_num(total) + "\" height=\"" +
       svg_num(total) + "\" viewBox=\"0 0 " + svg_num(total) + " " + svg_num(total) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + svg_num(total) + "\" height=\"" + svg_num(total) +
       "\" fill=\"white\"/>\n";

  // Shade the 9 cells by zone.
  const double cuts[4] = {0.0, th.t1, th.t2, 1.0};
  for (int wi = 0; wi < 3; ++wi) {
    for (int ri = 0; ri < 3; ++ri) {
      const char* fill = wi > ri ? "#f8d7da" : (wi == ri ? "#fff3cd" : "#d4edda");
      s += "<rect class=\"cell\" x=\"" + svg_num(px(cuts[ri])) + "\" y=\"" + svg_num(py(cuts[wi + 1])) +
           "\" width=\"" + svg_num(px(cuts[ri + 1]) - px(cuts[ri])) + "\" height=\"" +
           svg_num(py(cuts[wi]) - py(cuts[wi + 1])) + "\" fill=\"" + fill + "\"/>\n";
    }
  }
  s += "<rect x=\"" + svg_num(margin) + "\" y=\"" + svg_num(margin) + "\" width=\"" + svg_num(side) +
       "\" height=\"" + svg_num(side) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : {th.t1, th.t2}) {
    s += "<line class=\"threshold\" x1=\"" + svg_num(px(t)) + "\" y1=\"" + svg_num(py(0)) + "\" x2=\"" +
         svg_num(px(t)) + "\" y2=\"" + svg_num(py(1)) + "\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n";
    s += "<line class=\"threshold\" x1=\"" + svg_num(px(0)) + "\" y1=\"" + svg_num(py(t)) + "\" x2=\"" +
         svg_num(px(1)) + "\" y2=\"" + svg_num(py(t)) + "\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n";
  }
  s += "<text x=\"" + svg_num(margin + side / 2) + "\" y=\"" + svg_num(total - 15) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">Performance</text>\n";
  s += "<text x=\"15\" y=\"" + svg_num(margin + side / 2) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" transform=\"rotate(-90 15 " +
       svg_num(margin + side / 2) + ")\">Importance</text>\n";
  for (double t : {0.0, th.t1, th.t2, 1.0}) {
    s += "<text x=\"" + svg_num(px(t)) + "\" y=\"" + svg_num(py(0) + 16) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" + format_real(t, 2) +
         "</text>\n";
    s += "<text x=\"" + svg_num(px(0) - 6) + "\" y=\"" + svg_num(py(t) + 3) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" + format_real(t, 2) +
         "</text>\n";
  }
  for (const auto& p : profiles) {
    const std::string id = xml_escape(p.info.id);
    s += "<g class=\"factor\" data-id=\"" + id + "\">";
    s += "<circle cx=\"" + svg_num(px(p.e_r)) + "\" cy=\"" + svg_num(py(p.e_w)) +
         "\" r=\"3\" fill=\"black\"/>";
    s += "<text x=\"" + svg_num(px(p.e_r) + 5) + "\" y=\"" + svg_num(py(p.e_w) - 4) +
         "\" font-family=\"sans-serif\" font-size=\"10\">" + id + "</text>";
    s += "</g>\n";
  }
  s += "</svg>\n";
  return s;
}

inline std::string render_text(const std::vector<factor_profile>& profiles, const map_thresholds& th) {
  std::vector<std::string> cells(9);
  for (const auto& p : profiles) {
    const map_region reg = p.region ? *p.region : place(p.e_w, p.e_r, th);
    auto& cell = cells[static_cast<int>(reg.importance) * 3 + static_cast<int>(reg.performance)];
    if (!cell.empty()) cell += ' ';
    cell += p.info.id;
  }
  std::size_t width = 12;
  for (const auto& c : cells) width = std::max(width, c.size());

  auto pad = [&](const std::string& s) { return " " + s + std::string(width - s.size(), ' ') + " "; };
  std::string rule = "           +";
  for (int i = 0; i < 3; ++i) rule += std::string(width + 2, '-') + "+";
  rule += "\n";

  std::string s = "Importance-performance map (rows: importance, columns: performance)\n";
  s += "thresholds: " + format_real(th.t1, 4) + ", " + format_real(th.t2, 4) + "\n";
  s += rule;
  const char* row_names[3] = {"low", "medium", "high"};
  for (int wi = 2; wi >= 0; --wi) {
    char head[16];
    std::snprintf(head, sizeof(head), "%-11s|", row_names[wi]);
    s += head;
    for (int ri = 0; ri < 3; ++ri) s += pad(cells[wi * 3 + ri]) + "|";
    s += "\n" + rule;
  }
  s += "           ";
  for (int ri = 0; ri < 3; ++ri) s += pad(row_names[ri]) + " ";
  while (!s.empty() && s.back() == ' ') s.pop_back();
  s += "\n";
  return s;
}

}  // namespace detail

/// Structured (JSON-ready) description of the map.
inline nlohmann::ordered_json map_to_json(const std::vector<factor_profile>& profiles,
                                          const map_thresholds& th) {
  nlohmann::ordered_json j;
  j["thresholds"] = {th.t1, th.t2};
  j["axes"] = {{"x", "performance"}, {"y", "importance"}};
  auto pts = nlohmann::ordered_json::array();
  for (const auto& p : profiles) {
    const map_region reg = p.region ? *p.region : place(p.e_w, p.e_r, th);
    pts.push_back({{"id", p.info.id},
                   {"importance", p.e_w},
                   {"performance", p.e_r},
                   {"importance_band", to_string(reg.importance)},
                   {"performance_band", to_string(reg.performance)},
                   {"zone", to_string(reg.where)}});
  }
  j["factors"] = std::move(pts);
  return j;
}

/// Renders the 3x3 map with each factor plotted at (e_r, e_w).
/// Output is a pure function of the inputs.
inline std::string render_map(const std::vector<factor_profile>& profiles, const map_thresholds& th,
                              map_format format) {
  switch (format) {
    case map_format::svg: return detail::render_svg(profiles, th);
    case map_format::text: return detail::render_text(profiles, th);
    case map_format::structured: return map_to_json(profiles, th).dump(2) + "\n";
  }
  throw error(errc::unsupported_format, "unsupported map format");
}

}  // namespace it2ipa
