#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "it2num.hpp"
#include "lingscale.hpp"
#include "survey.hpp"

namespace it2ipa::io {

// ---------------------------------------------------------------------------
// Delimited text. Comma separated, double-quote quoting with "" escapes.
// Blank lines and lines starting with '#' are skipped.

struct csv_row {
  std::size_t line = 0;  // 1-based physical line
  std::vector<std::string> cells;
};

inline std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::string(it2ipa::detail::trim(cur)));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw error(errc::parse_error, "unterminated quoted field").at_row(line_no);
  cells.push_back(std::string(it2ipa::detail::trim(cur)));
  return cells;
}

inline std::vector<csv_row> parse_csv(std::istream& in) {
  std::vector<csv_row> rows;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto t = it2ipa::detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    rows.push_back({n, split_csv_line(line, n)});
  }
  return rows;
}

inline std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string csv_line(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += ',';
    s += csv_escape(cells[i]);
  }
  s += '\n';
  return s;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::io_failure, "cannot open file for reading").at_file(path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs fn, stamping the file path onto any library error it raises.
template <class Fn>
auto with_file(const std::filesystem::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (error& e) {
    if (!e.file()) e.at_file(path.string());
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw error(errc::parse_error, e.what()).at_file(path.string());
  }
}

namespace detail {

inline std::map<std::string, std::size_t> header_index(const csv_row& header) {
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < header.cells.size(); ++i) idx[it2ipa::detail::fold(header.cells[i])] = i;
  return idx;
}

inline const std::string& cell(const csv_row& row, std::size_t col, std::string_view what) {
  if (col >= row.cells.size() || row.cells[col].empty())
    throw error(errc::parse_error, "missing " + std::string(what)).at_row(row.line);
  return row.cells[col];
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Ratings file: header "factor,facet,<expert>..." with optional "name" and
// "dimension" columns; one row per (factor, facet).

inline constexpr std::string_view unspecified_dimension = "unspecified";

inline rating_matrix parse_ratings(std::istream& in) {
  const auto rows = parse_csv(in);
  if (rows.empty()) throw error(errc::empty_matrix, "ratings file is empty");
  const auto idx = detail::header_index(rows.front());
  if (!idx.count("factor") || !idx.count("facet"))
    throw error(errc::parse_error, "ratings header needs 'factor' and 'facet' columns")
        .at_row(rows.front().line);

  const std::size_t c_factor = idx.at("factor");
  const std::size_t c_facet = idx.at("facet");
  const std::size_t c_name = idx.count("name") ? idx.at("name") : SIZE_MAX;
  const std::size_t c_dim = idx.count("dimension") ? idx.at("dimension") : SIZE_MAX;

  rating_matrix m;
  std::vector<std::size_t> expert_cols;
  for (std::size_t i = 0; i < rows.front().cells.size(); ++i) {
    if (i == c_factor || i == c_facet || i == c_name || i == c_dim) continue;
    expert_cols.push_back(i);
    m.experts.push_back(rows.front().cells[i]);
  }
  if (m.experts.empty())
    throw error(errc::empty_matrix, "ratings file has no expert columns").at_row(rows.front().line);
  if (rows.size() == 1) throw error(errc::empty_matrix, "ratings file has no rows");

  std::map<std::string, std::size_t> pos;
  std::vector<std::array<bool, 2>> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.cells.size() != rows.front().cells.size())
      throw error(errc::parse_error, "expected " + std::to_string(rows.front().cells.size()) +
                                         " cells, found " + std::to_string(row.cells.size()))
          .at_row(row.line);
    const std::string& id = detail::cell(row, c_factor, "factor id");
    const std::string f = it2ipa::detail::fold(detail::cell(row, c_facet, "facet"));
    if (f != "importance" && f != "performance")
      throw error(errc::parse_error, "facet must be 'importance' or 'performance', got '" +
                                         row.cells[c_facet] + "'")
          .at_row(row.line);

    auto [it, inserted] = pos.try_emplace(id, m.factors.size());
    if (inserted) {
      factor fac{id, c_name != SIZE_MAX ? row.cells[c_name] : id,
                 c_dim != SIZE_MAX && !row.cells[c_dim].empty() ? row.cells[c_dim]
                                                                 : std::string(unspecified_dimension)};
      m.factors.push_back(std::move(fac));
      m.importance.emplace_back();
      m.performance.emplace_back();
      seen.push_back({false, false});
      m.source_lines.push_back({0, 0});
    }
    const std::size_t j = it->second;
    const bool imp = f == "importance";
    if (seen[j][imp ? 0 : 1])
      throw error(errc::parse_error, "duplicate " + f + " row for factor " + id).at_row(row.line);
    seen[j][imp ? 0 : 1] = true;
    m.source_lines[j][imp ? 0 : 1] = row.line;

    std::vector<std::string> labels;
    for (std::size_t e = 0; e < expert_cols.size(); ++e)
      labels.push_back(detail::cell(row, expert_cols[e], "rating for expert " + m.experts[e]));
    (imp ? m.importance[j] : m.performance[j]) = std::move(labels);
  }
  for (std::size_t j = 0; j < m.factors.size(); ++j) {
    if (!seen[j][0] || !seen[j][1])
      throw error(errc::parse_error, "factor " + m.factors[j].id + " lacks a " +
                                         (seen[j][0] ? "performance" : "importance") + " row");
  }
  return m;
}

// ---------------------------------------------------------------------------
// Pre-aggregated file: header "factor,[name,][dimension,]importance,performance";
// importance/performance cells hold canonical IT2 numbers.

inline std::vector<factor_profile> parse_aggregated(std::istream& in) {
  const auto rows = parse_csv(in);
  if (rows.size() < 2) throw error(errc::empty_matrix, "aggregated file has no factor rows");
  const auto idx = detail::header_index(rows.front());
  for (const char* col : {"factor", "importance", "performance"})
    if (!idx.count(col))
      throw error(errc::parse_error, std::string("aggregated header needs a '") + col + "' column")
          .at_row(rows.front().line);

  std::vector<factor_profile> out;
  std::set<std::string> ids;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    auto get = [&](const char* col) -> std::string {
      auto it = idx.find(col);
      if (it == idx.end() || it->second >= row.cells.size()) return {};
      return row.cells[it->second];
    };
    factor_profile p;
    p.info.id = detail::cell(row, idx.at("factor"), "factor id");
    if (!ids.insert(p.info.id).second)
      throw error(errc::parse_error, "duplicate factor id " + p.info.id).at_row(row.line);
    p.info.name = get("name").empty() ? p.info.id : get("name");
    p.info.dimension = get("dimension").empty() ? std::string(unspecified_dimension) : get("dimension");
    auto parse_valid = [&](const char* col) {
      try {
        const auto v = parse_it2(detail::cell(row, idx.at(col), col));
        auto bad = violations(v);
        if (!bad.empty()) throw error(errc::invalid_number, std::string(col) + ": " + bad.front());
        return v;
      } catch (error& e) {
        if (!e.row()) e.at_row(row.line);
        throw;
      }
    };
    p.w = parse_valid("importance");
    p.r = parse_valid("performance");
    out.push_back(std::move(p));
  }
  return out;
}

enum class input_kind { ratings, aggregated };

/// Sniffs the header: a 'facet' column means ratings.
inline input_kind detect_input_kind(std::istream& in) {
  const auto pos = in.tellg();
  std::string line;
  input_kind kind = input_kind::ratings;
  bool found = false;
  while (std::getline(in, line)) {
    const auto t = it2ipa::detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    found = true;
    const auto cells = split_csv_line(t, 0);
    bool facet = false, imp = false;
    for (const auto& c : cells) {
      const auto f = it2ipa::detail::fold(c);
      facet = facet || f == "facet";
      imp = imp || f == "importance";
    }
    kind = (!facet && imp) ? input_kind::aggregated : input_kind::ratings;
    break;
  }
  in.clear();
  in.seekg(pos);
  if (!found) return input_kind::ratings;  // empty inputs fail in the ratings reader
  return kind;
}

// ---------------------------------------------------------------------------
// Scale file (JSON):
//   {"terms": [{"label": "Low", "upper": [a1,a2,a3,a4,h1,h2], "lower": [...]}, ...]}

inline linguistic_scale parse_scale(const nlohmann::json& j) {
  if (!j.contains("terms") || !j["terms"].is_array())
    throw error(errc::parse_error, "scale document needs a 'terms' array");
  std::vector<term> terms;
  for (std::size_t i = 0; i < j["terms"].size(); ++i) {
    const auto& t = j["terms"][i];
    auto trap = [&](const char* key) {
      const auto& a = t.at(key);
      if (!a.is_array() || a.size() != 6)
        throw error(errc::parse_error, "term " + std::to_string(i + 1) + ": '" + key +
                                           "' must hold 4 endpoints and 2 heights")
            .at_row(i + 1);
      return make_trapezoid(a[0].get<double>(), a[1].get<double>(), a[2].get<double>(),
                            a[3].get<double>(), a[4].get<double>(), a[5].get<double>());
    };
    terms.push_back({t.at("label").get<std::string>(), it2_number{trap("upper"), trap("lower")}});
  }
  linguistic_scale scale(std::move(terms));
  const auto bad = validate_scale(scale);
  if (!bad.empty()) {
    std::string msg = "invalid scale:";
    for (const auto& b : bad) msg += " " + b + ";";
    throw error(errc::invalid_scale, msg);
  }
  return scale;
}

inline nlohmann::ordered_json scale_to_json(const linguistic_scale& scale) {
  nlohmann::ordered_json j;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& t : scale.terms()) {
    auto trap = [](const trapezoid& x) {
      return nlohmann::ordered_json::array({x.x[0], x.x[1], x.x[2], x.x[3], x.h1, x.h2});
    };
    arr.push_back({{"label", t.label}, {"upper", trap(t.value.upper)}, {"lower", trap(t.value.lower)}});
  }
  j["terms"] = std::move(arr);
  return j;
}

// ---------------------------------------------------------------------------
// Psychometrics file (JSON):
//   {"panel_size": 11, "cvr_threshold": 0.59, "alpha_threshold": 0.7,
//    "components": [{"id": "x_1", "essential": 11}, ...],
//    "dimensions": [{"name": "...", "scores": [[...], ...]}, ...]}

struct psychometrics_input {
  long panel_size = 0;
  double cvr_threshold = default_cvr_threshold;
  double alpha_threshold = default_alpha_threshold;
  std::vector<std::pair<std::string, long>> components;
  std::vector<std::pair<std::string, std::vector<std::vector<double>>>> dimensions;
};

inline psychometrics_input parse_psychometrics(const nlohmann::json& j) {
  psychometrics_input p;
  p.panel_size = j.value("panel_size", 0L);
  p.cvr_threshold = j.value("cvr_threshold", default_cvr_threshold);
  p.alpha_threshold = j.value("alpha_threshold", default_alpha_threshold);
  if (j.contains("components")) {
    if (p.panel_size < 1)
      throw error(errc::invalid_counts, "psychometrics 'panel_size' must be at least 1");
    for (const auto& c : j["components"])
      p.components.emplace_back(c.at("id").get<std::string>(), c.at("essential").get<long>());
  }
  if (j.contains("dimensions")) {
    for (const auto& d : j["dimensions"])
      p.dimensions.emplace_back(d.at("name").get<std::string>(),
                                d.at("scores").get<std::vector<std::vector<double>>>());
  }
  return p;
}

// ---------------------------------------------------------------------------
// Reference values to compare a run against (JSON):
//   {"defuzzified": {"x_1": [e_w, e_r], ...},
//    "success_scores": {"x_2": "((...),(...))", ...}, "failure_scores": {...},
//    "success_ranks": {"x_2": 51.237, ...}, "failure_ranks": {...},
//    "success_factors": [...], "failure_factors": [...]}

struct reference_values {
  std::string label = "reference";
  std::map<std::string, std::pair<double, double>> defuzzified;
  std::map<std::string, it2_number> success_scores;
  std::map<std::string, it2_number> failure_scores;
  std::map<std::string, double> success_ranks;
  std::map<std::string, double> failure_ranks;
  std::vector<std::string> success_factors;
  std::vector<std::string> failure_factors;
};

inline reference_values parse_reference(const nlohmann::json& j) {
  reference_values r;
  r.label = j.value("label", std::string("reference"));
  if (j.contains("defuzzified"))
    for (const auto& [k, v] : j["defuzzified"].items())
      r.defuzzified[k] = {v.at(0).get<double>(), v.at(1).get<double>()};
  auto tuples = [&](const char* key, std::map<std::string, it2_number>& dst) {
    if (j.contains(key))
      for (const auto& [k, v] : j[key].items()) dst[k] = parse_it2(v.get<std::string>());
  };
  tuples("success_scores", r.success_scores);
  tuples("failure_scores", r.failure_scores);
  auto ranks = [&](const char* key, std::map<std::string, double>& dst) {
    if (j.contains(key))
      for (const auto& [k, v] : j[key].items()) dst[k] = v.get<double>();
  };
  ranks("success_ranks", r.success_ranks);
  ranks("failure_ranks", r.failure_ranks);
  r.success_factors = j.value("success_factors", std::vector<std::string>{});
  r.failure_factors = j.value("failure_factors", std::vector<std::string>{});
  return r;
}

// ---------------------------------------------------------------------------
// File-level entry points

inline rating_matrix load_ratings(const std::filesystem::path& path) {
  return with_file(path, [&] {
    std::istringstream in(read_file(path));
    return parse_ratings(in);
  });
}

inline std::vector<factor_profile> load_aggregated(const std::filesystem::path& path) {
  return with_file(path, [&] {
    std::istringstream in(read_file(path));
    return parse_aggregated(in);
  });
}

inline nlohmann::json load_json(const std::filesystem::path& path) {
  return with_file(path, [&] { return nlohmann::json::parse(read_file(path)); });
}

inline linguistic_scale load_scale(const std::filesystem::path& path) {
  return with_file(path, [&] { return parse_scale(load_json(path)); });
}

inline psychometrics_input load_psychometrics(const std::filesystem::path& path) {
  return with_file(path, [&] { return parse_psychometrics(load_json(path)); });
}

inline reference_values load_reference(const std::filesystem::path& path) {
  return with_file(path, [&] { return parse_reference(load_json(path)); });
}

/// Writes via a sibling temporary file and rename, so readers never see a
/// partial file.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw error(errc::io_failure, "cannot open file for writing").at_file(tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw error(errc::io_failure, "write failed").at_file(tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw error(errc::io_failure, "cannot move output into place").at_file(path.string());
  }
}

}  // namespace it2ipa::io
