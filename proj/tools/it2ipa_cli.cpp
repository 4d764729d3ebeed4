// it2ipa: command-line front end for the importance-performance pipeline.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "it2ipa/it2ipa.hpp"

namespace {

using namespace it2ipa;

void print_diagnostic(const error& e) {
  nlohmann::ordered_json d;
  d["error"] = to_string(e.code());
  d["file"] = e.file() ? nlohmann::ordered_json(*e.file()) : nlohmann::ordered_json(nullptr);
  d["row"] = e.row() ? nlohmann::ordered_json(*e.row()) : nlohmann::ordered_json(nullptr);
  d["message"] = e.what();
  std::cerr << d.dump() << '\n';
}

map_thresholds parse_thresholds(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos)
    throw error(errc::invalid_thresholds, "--thresholds expects 't1,t2'");
  try {
    return map_thresholds::make(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
  } catch (const std::logic_error&) {
    throw error(errc::invalid_thresholds, "--thresholds expects two numbers, got '" + s + "'");
  }
}

struct run_options {
  std::string input;
  std::string scale;
  std::string thresholds;  // empty: thirds
  std::string partition = "region";
  std::string cffs = "as_computed";
  std::string map_format = "svg";
  std::string out = "report";
  std::vector<std::string> formats;
  std::string input_kind = "auto";
  std::string psychometrics;
  std::string reference;
  int decimals = 3;
};

int run(const run_options& o) {
  pipeline_config cfg;
  if (!o.scale.empty()) cfg.scale_path = o.scale;
  if (!o.thresholds.empty()) cfg.thresholds = parse_thresholds(o.thresholds);
  cfg.partition = parse_partition_mode(o.partition);
  cfg.failure_mode = parse_cffs_mode(o.cffs);
  cfg.map_fmt = parse_map_format(o.map_format);
  cfg.out_dir = o.out;
  cfg.decimals = o.decimals;
  if (!o.formats.empty()) {
    cfg.formats.clear();
    for (const auto& f : o.formats) cfg.formats.push_back(parse_report_format(f));
  }
  if (o.input_kind == "ratings")
    cfg.input_kind = io::input_kind::ratings;
  else if (o.input_kind == "aggregated")
    cfg.input_kind = io::input_kind::aggregated;
  else if (o.input_kind != "auto")
    throw error(errc::unsupported_format, "unsupported input kind '" + o.input_kind + "'");
  if (!o.psychometrics.empty()) cfg.psychometrics_path = o.psychometrics;
  if (!o.reference.empty()) cfg.reference_path = o.reference;

  const report rep = run_pipeline(cfg, o.input);
  for (auto f : cfg.formats)
    for (const auto& p : emit(rep, f, cfg.out_dir)) std::cout << "wrote " << p.string() << '\n';

  std::cout << rep.profiles.size() << " factors; " << rep.groups.failure.size() << " failure, "
            << rep.groups.success.size() << " success, " << rep.groups.balanced.size() << " balanced\n";
  return 0;
}

int validate_scale_cmd(const std::string& path) {
  const auto scale = io::load_scale(path);  // throws InvalidScale with every violation
  for (const auto& t : scale.terms())
    std::cout << t.label << '\t' << to_string(t.value) << '\t' << format_real(dtrat(t.value), 4) << '\n';
  std::cout << "scale ok (" << scale.size() << " terms)\n";
  return 0;
}

int eval_cmd(const std::string& text) {
  const auto a = parse_it2(text);
  for (const auto& v : violations(a)) std::cout << "warning: " << v << '\n';
  const auto b = rank(a);
  nlohmann::ordered_json j;
  j["value"] = to_string(a);
  j["dtrat"] = dtrat(a);
  j["rank"] = b.rank;
  j["upper"] = {{"means", b.upper.m}, {"deviations", b.upper.s}};
  j["lower"] = {{"means", b.lower.m}, {"deviations", b.lower.s}};
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interval type-2 fuzzy importance-performance analysis"};
  app.require_subcommand(1);

  run_options ro;
  auto* run_cmd = app.add_subcommand("run", "Run the full pipeline on a ratings or pre-aggregated file");
  run_cmd->add_option("input", ro.input, "Ratings file or pre-aggregated file")->required();
  run_cmd->add_option("--scale", ro.scale, "Linguistic scale file (JSON); default is the built-in five-term scale");
  run_cmd->add_option("--thresholds", ro.thresholds, "Map cut points t1,t2 (default: thirds)");
  run_cmd->add_option("--partition-mode", ro.partition, "region | comparison")->capture_default_str();
  run_cmd->add_option("--cffs-mode", ro.cffs, "as_computed | as_written")->capture_default_str();
  run_cmd->add_option("--map-format", ro.map_format, "svg | text | structured")->capture_default_str();
  run_cmd->add_option("--out", ro.out, "Output directory")->capture_default_str();
  run_cmd->add_option("--format", ro.formats, "structured | delimited | map | svg-map (repeatable)");
  run_cmd->add_option("--input-kind", ro.input_kind, "auto | ratings | aggregated")->capture_default_str();
  run_cmd->add_option("--psychometrics", ro.psychometrics, "Psychometrics file (JSON)");
  run_cmd->add_option("--reference", ro.reference, "Reference values to compare against (JSON)");
  run_cmd->add_option("--decimals", ro.decimals, "Display rounding for delimited tables (-1: full)")
      ->capture_default_str();

  std::string scale_path;
  auto* vs_cmd = app.add_subcommand("validate-scale", "Check a linguistic scale file");
  vs_cmd->add_option("file", scale_path)->required();

  std::string number_text;
  auto* eval = app.add_subcommand("eval", "Defuzzify and rank one IT2 number given in canonical form");
  eval->add_option("number", number_text, "((a1,a2,a3,a4;h1,h2),(b1,b2,b3,b4;g1,g2))")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return run(ro);
    if (*vs_cmd) return validate_scale_cmd(scale_path);
    if (*eval) return eval_cmd(number_text);
  } catch (const error& e) {
    print_diagnostic(e);
    return 1;
  } catch (const std::exception& e) {
    print_diagnostic(error(errc::io_failure, e.what()));
    return 1;
  }
  return 0;
}
