#pragma once

#include <cmath>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "io.hpp"
#include "ipamap.hpp"
#include "lingscale.hpp"
#include "scoring.hpp"
#include "survey.hpp"

namespace it2ipa {

enum class report_format { structured, delimited, map, svg_map };

inline report_format parse_report_format(std::string_view s) {
  if (s == "structured" || s == "json") return report_format::structured;
  if (s == "delimited" || s == "csv") return report_format::delimited;
  if (s == "map") return report_format::map;
  if (s == "svg-map") return report_format::svg_map;
  throw error(errc::unsupported_format, "unsupported report format '" + std::string(s) + "'");
}

inline partition_mode parse_partition_mode(std::string_view s) {
  if (s == "region") return partition_mode::region;
  if (s == "comparison") return partition_mode::comparison;
  throw error(errc::unsupported_format, "unsupported partition mode '" + std::string(s) + "'");
}

inline cffs_mode parse_cffs_mode(std::string_view s) {
  if (s == "as_computed" || s == "as-computed") return cffs_mode::as_computed;
  if (s == "as_written" || s == "as-written") return cffs_mode::as_written;
  throw error(errc::unsupported_format, "unsupported cffs mode '" + std::string(s) + "'");
}

constexpr std::string_view to_string(partition_mode m) noexcept {
  return m == partition_mode::region ? "region" : "comparison";
}

struct pipeline_config {
  std::optional<std::filesystem::path> scale_path;
  map_thresholds thresholds{};
  partition_mode partition = partition_mode::region;
  cffs_mode failure_mode = cffs_mode::as_computed;
  map_format map_fmt = map_format::svg;
  std::filesystem::path out_dir = "report";
  std::vector<report_format> formats{report_format::structured};
  std::optional<io::input_kind> input_kind;  // sniffed when empty
  std::optional<std::filesystem::path> psychometrics_path;
  std::optional<std::filesystem::path> reference_path;
  int decimals = 3;  // display rounding in delimited output; < 0 keeps full precision
  double reference_tolerance = 5e-3;
};

struct cvr_row {
  std::string id;
  long essential = 0;
  long panel = 0;
  double value = 0.0;
  bool passes = false;
};

struct alpha_row {
  std::string dimension;
  std::size_t respondents = 0;
  std::size_t items = 0;
  double alpha = 0.0;
  bool passes = false;
};

struct psychometrics_summary {
  double cvr_threshold = default_cvr_threshold;
  double alpha_threshold = default_alpha_threshold;
  std::vector<cvr_row> cvr;
  std::vector<alpha_row> alpha;
};

struct report {
  io::input_kind source = io::input_kind::aggregated;
  std::string input_name;
  std::size_t experts = 0;  // 0 for pre-aggregated input
  pipeline_config config;
  linguistic_scale scale;
  std::vector<factor_profile> profiles;
  partition_result groups;
  std::vector<fuzzy_score> success_scores;
  std::vector<fuzzy_score> failure_scores;
  std::vector<ranked_factor> success_ranking;
  std::vector<ranked_factor> failure_ranking;
  std::string map_document;
  std::optional<psychometrics_summary> psychometrics;
  std::vector<std::string> notes;
};

inline psychometrics_summary summarize_psychometrics(const io::psychometrics_input& in) {
  psychometrics_summary s;
  s.cvr_threshold = in.cvr_threshold;
  s.alpha_threshold = in.alpha_threshold;
  for (const auto& [id, essential] : in.components) {
    cvr_row r{id, essential, in.panel_size, 0.0, false};
    try {
      r.value = cvr(essential, in.panel_size);
    } catch (const error& e) {
      throw error(e.code(), "component " + id + ": " + e.what());
    }
    r.passes = cvr_passes(r.value, in.cvr_threshold);
    s.cvr.push_back(r);
  }
  for (const auto& [name, grid] : in.dimensions) {
    alpha_row r{name, grid.size(), grid.empty() ? 0 : grid.front().size(), 0.0, false};
    try {
      r.alpha = cronbach_alpha(grid);
    } catch (const error& e) {
      throw error(e.code(), "dimension " + name + ": " + e.what());
    }
    r.passes = r.alpha >= in.alpha_threshold;
    s.alpha.push_back(r);
  }
  return s;
}

namespace detail {

inline std::vector<std::string> ids_of(const std::vector<factor_profile>& ps) {
  std::vector<std::string> ids;
  for (const auto& p : ps) ids.push_back(p.info.id);
  return ids;
}

// Compares a finished report against reference values and appends one note
// per disagreement.
inline void compare_with_reference(report& rep, const io::reference_values& ref) {
  const double tol = rep.config.reference_tolerance;
  const std::string tag = "[" + ref.label + "] ";
  auto profile_of = [&](const std::string& id) -> const factor_profile* {
    for (const auto& p : rep.profiles)
      if (p.info.id == id) return &p;
    return nullptr;
  };
  std::size_t mismatches = 0;
  auto note = [&](std::string s) {
    rep.notes.push_back(tag + std::move(s));
    ++mismatches;
  };

  for (const auto& [id, vals] : ref.defuzzified) {
    const auto* p = profile_of(id);
    if (!p) {
      note("factor " + id + " is in the reference but not in the input");
      continue;
    }
    if (std::abs(p->e_w - vals.first) > tol || std::abs(p->e_r - vals.second) > tol)
      note("defuzzified values of " + id + " are (" + format_real(p->e_w, 3) + ", " +
           format_real(p->e_r, 3) + "), reference (" + format_real(vals.first, 3) + ", " +
           format_real(vals.second, 3) + ")");
  }

  for (const auto& [id, expected] : ref.success_scores) {
    const auto* p = profile_of(id);
    if (!p) continue;
    const auto got = csfs(p->info, p->w, p->r).value;
    if (max_abs_diff(got, expected) > tol)
      note("success score of " + id + " is " + to_string(got, 3) + ", reference " +
           to_string(expected, 3));
  }
  for (const auto& [id, expected] : ref.failure_scores) {
    const auto* p = profile_of(id);
    if (!p) continue;
    try {
      const auto got = cffs(p->info, p->w, p->r, rep.config.failure_mode).value;
      if (max_abs_diff(got, expected) > tol)
        note("failure score of " + id + " (" + std::string(to_string(rep.config.failure_mode)) +
             ") is " + to_string(got, 3) + ", reference " + to_string(expected, 3));
    } catch (const error& e) {
      note("failure score of " + id + " could not be computed: " + e.what());
    }
  }

  auto compare_ranks = [&](const std::map<std::string, double>& expected,
                           const std::map<std::string, it2_number>& tuples, const char* kind) {
    for (const auto& [id, value] : expected) {
      auto it = tuples.find(id);
      if (it == tuples.end()) continue;
      const double got = rank(it->second).rank;
      if (std::abs(got - value) > tol)
        note(std::string(kind) + " rank value of " + id + " computed from the reference tuple is " +
             format_real(got, 3) + ", reference " + format_real(value, 3));
    }
  };
  compare_ranks(ref.success_ranks, ref.success_scores, "success");
  compare_ranks(ref.failure_ranks, ref.failure_scores, "failure");

  auto compare_sets = [&](const std::vector<std::string>& expected, const std::vector<factor_profile>& got,
                          const char* kind) {
    if (expected.empty()) return;
    const std::set<std::string> want(expected.begin(), expected.end());
    const auto got_ids = ids_of(got);
    const std::set<std::string> have(got_ids.begin(), got_ids.end());
    for (const auto& id : want)
      if (!have.count(id))
        note("reference lists " + id + " as a critical " + kind + " factor; the " +
             std::string(to_string(rep.config.partition)) + " partition does not");
    for (const auto& id : have)
      if (!want.count(id))
        note("the " + std::string(to_string(rep.config.partition)) + " partition lists " + id +
             " as a critical " + kind + " factor; the reference does not");
  };
  compare_sets(ref.success_factors, rep.groups.success, "success");
  compare_sets(ref.failure_factors, rep.groups.failure, "failure");

  if (mismatches == 0) rep.notes.push_back(tag + "all compared values agree within " + format_real(tol));
}

}  // namespace detail

/// Runs ingest, aggregation, defuzzification, placement, scoring and ranking.
inline report run_pipeline(const pipeline_config& config, const std::filesystem::path& input) {
  report rep;
  rep.config = config;
  rep.input_name = input.filename().string();

  rep.scale = config.scale_path ? io::load_scale(*config.scale_path) : default_scale();

  io::input_kind kind;
  if (config.input_kind) {
    kind = *config.input_kind;
  } else {
    kind = io::with_file(input, [&] {
      std::istringstream in(io::read_file(input));
      return io::detect_input_kind(in);
    });
  }
  rep.source = kind;
  if (kind == io::input_kind::ratings) {
    const auto matrix = io::load_ratings(input);
    rep.experts = matrix.experts.size();
    rep.profiles = io::with_file(input, [&] { return aggregate(matrix, rep.scale); });
  } else {
    rep.profiles = io::load_aggregated(input);
  }

  defuzzify(rep.profiles);
  io::with_file(input, [&] {
    place_all(rep.profiles, config.thresholds);
    return 0;
  });
  rep.groups = partition(rep.profiles, config.thresholds, config.partition);

  for (const auto& p : rep.groups.success) rep.success_scores.push_back(csfs(p.info, p.w, p.r));
  for (const auto& p : rep.groups.failure) {
    try {
      rep.failure_scores.push_back(cffs(p.info, p.w, p.r, config.failure_mode));
    } catch (const error& e) {
      rep.notes.push_back("failure score of " + p.info.id + " omitted: " + e.what());
    }
  }
  rep.success_ranking = rank_order(rep.success_scores);
  rep.failure_ranking = rank_order(rep.failure_scores);
  rep.map_document = render_map(rep.profiles, config.thresholds, config.map_fmt);

  if (config.psychometrics_path) {
    const auto in = io::load_psychometrics(*config.psychometrics_path);
    rep.psychometrics = io::with_file(*config.psychometrics_path, [&] { return summarize_psychometrics(in); });
  }

  rep.notes.push_back(std::string("failure scores use ") +
                      (config.failure_mode == cffs_mode::as_computed ? "R / W (as_computed)"
                                                                     : "W * (1 - R) (as_written)"));
  rep.notes.push_back(std::string("critical factors selected by ") + std::string(to_string(config.partition)) +
                      " partition; " + std::to_string(rep.groups.balanced.size()) + " factor(s) balanced");
  if (config.reference_path) detail::compare_with_reference(rep, io::load_reference(*config.reference_path));
  return rep;
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

inline nlohmann::ordered_json it2_json(const it2_number& a) {
  auto trap = [](const trapezoid& t) {
    return nlohmann::ordered_json{{"points", {t.x[0], t.x[1], t.x[2], t.x[3]}}, {"heights", {t.h1, t.h2}}};
  };
  return {{"text", to_string(a, 3)}, {"upper", trap(a.upper)}, {"lower", trap(a.lower)}};
}

inline nlohmann::ordered_json breakdown_json(const rank_breakdown& b) {
  auto terms = [](const trapezoid_terms& t) {
    return nlohmann::ordered_json{{"means", t.m}, {"deviations", t.s}, {"heights", {t.h1, t.h2}}};
  };
  return {{"upper", terms(b.upper)}, {"lower", terms(b.lower)}, {"rank", b.rank}};
}

inline nlohmann::ordered_json ranking_json(const std::vector<ranked_factor>& rs) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rs) {
    nlohmann::ordered_json j{{"position", r.position},
                             {"id", r.score.info.id},
                             {"name", r.score.info.name},
                             {"rank", r.breakdown.rank},
                             {"breakdown", breakdown_json(r.breakdown)}};
    arr.push_back(std::move(j));
  }
  return arr;
}

inline nlohmann::ordered_json scores_json(const std::vector<fuzzy_score>& ss) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& s : ss) {
    nlohmann::ordered_json j{{"id", s.info.id}, {"kind", to_string(s.kind)}};
    if (s.mode) j["mode"] = to_string(*s.mode);
    j["value"] = it2_json(s.value);
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace detail

inline constexpr int report_schema_version = 1;

/// Structured report. Key order and content depend only on the inputs.
inline nlohmann::ordered_json to_json(const report& rep) {
  nlohmann::ordered_json j;
  j["schema_version"] = report_schema_version;
  j["input"] = {{"name", rep.input_name},
                {"kind", rep.source == io::input_kind::ratings ? "ratings" : "aggregated"},
                {"experts", rep.experts}};
  j["config"] = {{"thresholds", {rep.config.thresholds.t1, rep.config.thresholds.t2}},
                 {"partition_mode", to_string(rep.config.partition)},
                 {"cffs_mode", to_string(rep.config.failure_mode)},
                 {"scale", rep.config.scale_path ? "file" : "default"}};
  j["scale"] = io::scale_to_json(rep.scale)["terms"];

  auto aggregated = nlohmann::ordered_json::array();
  auto defuzzified = nlohmann::ordered_json::array();
  for (const auto& p : rep.profiles) {
    aggregated.push_back({{"id", p.info.id},
                          {"name", p.info.name},
                          {"dimension", p.info.dimension},
                          {"importance", detail::it2_json(p.w)},
                          {"performance", detail::it2_json(p.r)}});
    nlohmann::ordered_json d{{"id", p.info.id}, {"importance", p.e_w}, {"performance", p.e_r}};
    if (p.region) {
      d["importance_band"] = to_string(p.region->importance);
      d["performance_band"] = to_string(p.region->performance);
      d["zone"] = to_string(p.region->where);
    }
    defuzzified.push_back(std::move(d));
  }
  j["aggregated"] = std::move(aggregated);
  j["defuzzified"] = std::move(defuzzified);
  j["partition"] = {{"failure", detail::ids_of(rep.groups.failure)},
                    {"success", detail::ids_of(rep.groups.success)},
                    {"balanced", detail::ids_of(rep.groups.balanced)}};
  j["scores"] = {{"success", detail::scores_json(rep.success_scores)},
                 {"failure", detail::scores_json(rep.failure_scores)}};
  j["ranking"] = {{"success", detail::ranking_json(rep.success_ranking)},
                  {"failure", detail::ranking_json(rep.failure_ranking)}};
  j["map"] = map_to_json(rep.profiles, rep.config.thresholds);

  if (rep.psychometrics) {
    nlohmann::ordered_json ps;
    ps["cvr_threshold"] = rep.psychometrics->cvr_threshold;
    ps["alpha_threshold"] = rep.psychometrics->alpha_threshold;
    auto cv = nlohmann::ordered_json::array();
    for (const auto& r : rep.psychometrics->cvr)
      cv.push_back({{"id", r.id}, {"essential", r.essential}, {"panel", r.panel}, {"cvr", r.value}, {"passes", r.passes}});
    auto al = nlohmann::ordered_json::array();
    for (const auto& r : rep.psychometrics->alpha)
      al.push_back({{"dimension", r.dimension},
                    {"respondents", r.respondents},
                    {"items", r.items},
                    {"alpha", r.alpha},
                    {"passes", r.passes}});
    ps["cvr"] = std::move(cv);
    ps["alpha"] = std::move(al);
    j["psychometrics"] = std::move(ps);
  } else {
    j["psychometrics"] = nullptr;
  }
  j["notes"] = rep.notes;
  return j;
}

/// Delimited tables, keyed by file name.
inline std::vector<std::pair<std::string, std::string>> to_delimited(const report& rep) {
  const int d = rep.config.decimals;
  auto num = [d](double v) { return format_real(v, d); };
  std::vector<std::pair<std::string, std::string>> files;

  std::string agg = io::csv_line({"factor", "name", "dimension", "importance", "performance"});
  std::string def = io::csv_line({"factor", "importance", "performance", "importance_band",
                                  "performance_band", "zone"});
  for (const auto& p : rep.profiles) {
    agg += io::csv_line({p.info.id, p.info.name, p.info.dimension, to_string(p.w, d), to_string(p.r, d)});
    def += io::csv_line({p.info.id, num(p.e_w), num(p.e_r),
                         p.region ? std::string(to_string(p.region->importance)) : "",
                         p.region ? std::string(to_string(p.region->performance)) : "",
                         p.region ? std::string(to_string(p.region->where)) : ""});
  }
  files.emplace_back("aggregated.csv", std::move(agg));
  files.emplace_back("defuzzified.csv", std::move(def));

  auto scores = [&](const std::vector<fuzzy_score>& ss) {
    std::string s = io::csv_line({"factor", "kind", "mode", "score"});
    for (const auto& x : ss)
      s += io::csv_line({x.info.id, std::string(to_string(x.kind)),
                         x.mode ? std::string(to_string(*x.mode)) : "", to_string(x.value, d)});
    return s;
  };
  files.emplace_back("success_scores.csv", scores(rep.success_scores));
  files.emplace_back("failure_scores.csv", scores(rep.failure_scores));

  auto ranking = [&](const std::vector<ranked_factor>& rs) {
    std::vector<std::string> head{"position", "factor", "name", "rank"};
    for (const char* side : {"u", "l"}) {
      for (int p = 1; p <= 3; ++p) head.push_back("m" + std::to_string(p) + side);
      for (int q = 1; q <= 4; ++q) head.push_back("s" + std::to_string(q) + side);
      head.push_back(std::string("h1") + side);
      head.push_back(std::string("h2") + side);
    }
    std::string s = io::csv_line(head);
    for (const auto& r : rs) {
      std::vector<std::string> row{std::to_string(r.position), r.score.info.id, r.score.info.name,
                                   num(r.breakdown.rank)};
      for (const auto* t : {&r.breakdown.upper, &r.breakdown.lower}) {
        for (double v : t->m) row.push_back(num(v));
        for (double v : t->s) row.push_back(num(v));
        row.push_back(num(t->h1));
        row.push_back(num(t->h2));
      }
      s += io::csv_line(row);
    }
    return s;
  };
  files.emplace_back("success_ranking.csv", ranking(rep.success_ranking));
  files.emplace_back("failure_ranking.csv", ranking(rep.failure_ranking));

  if (rep.psychometrics) {
    std::string s = io::csv_line({"kind", "name", "value", "threshold", "passes"});
    for (const auto& r : rep.psychometrics->cvr)
      s += io::csv_line({"cvr", r.id, num(r.value), num(rep.psychometrics->cvr_threshold), r.passes ? "yes" : "no"});
    for (const auto& r : rep.psychometrics->alpha)
      s += io::csv_line({"alpha", r.dimension, num(r.alpha), num(rep.psychometrics->alpha_threshold),
                         r.passes ? "yes" : "no"});
    files.emplace_back("psychometrics.csv", std::move(s));
  }

  std::string notes = io::csv_line({"note"});
  for (const auto& n : rep.notes) notes += io::csv_line({n});
  files.emplace_back("notes.csv", std::move(notes));
  return files;
}

/// Writes the report in one format; returns the paths written.
inline std::vector<std::filesystem::path> emit(const report& rep, report_format format,
                                               const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw error(errc::io_failure, "cannot create output directory").at_file(out_dir.string());

  std::vector<std::filesystem::path> written;
  auto write = [&](const std::string& name, const std::string& content) {
    const auto path = out_dir / name;
    io::write_file_atomic(path, content);
    written.push_back(path);
  };
  switch (format) {
    case report_format::structured: write("report.json", to_json(rep).dump(2) + "\n"); break;
    case report_format::delimited:
      for (const auto& [name, content] : to_delimited(rep)) write(name, content);
      break;
    case report_format::map:
      write("map." + std::string(file_extension(rep.config.map_fmt)), rep.map_document);
      break;
    case report_format::svg_map:
      write("map.svg", render_map(rep.profiles, rep.config.thresholds, map_format::svg));
      break;
  }
  return written;
}

}  // namespace it2ipa
