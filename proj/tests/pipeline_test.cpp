#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "it2ipa/pipeline.hpp"
#include "test_support.hpp"

using namespace it2ipa;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("it2ipa_pipeline_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

pipeline_config fixture_config() {
  pipeline_config c;
  c.reference_path = data_path("published_reference.json");
  return c;
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + IT2IPA_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return status;
}

}  // namespace

TEST(Pipeline, FixtureReproducesPublishedCrispValues) {
  const auto rep = run_pipeline(fixture_config(), data_path("case_study_aggregated.csv"));
  const auto ref = published();
  ASSERT_EQ(rep.profiles.size(), 18u);
  EXPECT_EQ(rep.source, io::input_kind::aggregated);
  for (const auto& p : rep.profiles) {
    const auto& [w, r] = ref.defuzzified.at(p.info.id);
    EXPECT_NEAR(p.e_w, w, 1e-3) << p.info.id;
    EXPECT_NEAR(p.e_r, r, 1e-3) << p.info.id;
  }
  for (const auto& n : rep.notes) EXPECT_EQ(n.find("defuzzified"), std::string::npos) << n;
}

TEST(Pipeline, ComparisonModeMatchesPublishedScores) {
  auto c = fixture_config();
  c.partition = partition_mode::comparison;
  const auto rep = run_pipeline(c, data_path("case_study_aggregated.csv"));
  EXPECT_EQ(rep.groups.failure.size(), 12u);
  EXPECT_EQ(rep.groups.success.size(), 6u);
  EXPECT_EQ(rep.failure_scores.size(), 12u);
  for (const auto& n : rep.notes) {
    EXPECT_EQ(n.find("score of x_"), std::string::npos) << n;
  }
}

TEST(Pipeline, StructuredReportIsDeterministicAndComplete) {
  const auto a = to_json(run_pipeline(fixture_config(), data_path("case_study_aggregated.csv"))).dump(2);
  const auto b = to_json(run_pipeline(fixture_config(), data_path("case_study_aggregated.csv"))).dump(2);
  EXPECT_EQ(a, b);
  const auto j = nlohmann::json::parse(a);
  for (const char* key : {"schema_version", "input", "config", "scale", "aggregated", "defuzzified", "partition",
                          "scores", "ranking", "map", "psychometrics", "notes"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["defuzzified"].size(), 18u);
  EXPECT_FALSE(j["notes"].empty());
}

TEST(Pipeline, RawRatingsAggregate) {
  auto c = pipeline_config{};
  c.psychometrics_path = data_path("example_psychometrics.json");
  const auto rep = run_pipeline(c, data_path("example_ratings.csv"));
  EXPECT_EQ(rep.source, io::input_kind::ratings);
  EXPECT_EQ(rep.experts, 3u);
  ASSERT_EQ(rep.profiles.size(), 5u);
  ASSERT_TRUE(rep.psychometrics);
  EXPECT_FALSE(rep.psychometrics->cvr.empty());
  const auto in = io::load_psychometrics(data_path("example_psychometrics.json"));
  ASSERT_EQ(rep.psychometrics->alpha.size(), in.dimensions.size());
  for (std::size_t i = 0; i < in.dimensions.size(); ++i)
    EXPECT_NEAR(rep.psychometrics->alpha[i].alpha, oracle::cronbach_alpha(in.dimensions[i].second), 1e-9);
}

TEST(Pipeline, AsWrittenDisagreesWithReference) {
  auto c = fixture_config();
  c.failure_mode = cffs_mode::as_written;
  const auto rep = run_pipeline(c, data_path("case_study_aggregated.csv"));
  std::size_t tagged = 0;
  for (const auto& n : rep.notes)
    if (n.rfind("[published] failure score", 0) == 0) ++tagged;
  EXPECT_GT(tagged, 0u);
}

TEST(Emit, EveryFormatWritesItsFiles) {
  const auto dir = scratch("emit");
  auto c = fixture_config();
  c.map_fmt = map_format::text;
  const auto rep = run_pipeline(c, data_path("case_study_aggregated.csv"));

  EXPECT_EQ(emit(rep, report_format::structured, dir), std::vector<fs::path>{dir / "report.json"});
  EXPECT_EQ(emit(rep, report_format::map, dir), std::vector<fs::path>{dir / "map.txt"});
  EXPECT_EQ(emit(rep, report_format::svg_map, dir), std::vector<fs::path>{dir / "map.svg"});
  const auto tables = emit(rep, report_format::delimited, dir);
  EXPECT_EQ(tables.size(), 7u);
  for (const auto& p : tables) EXPECT_TRUE(fs::exists(p)) << p;
  EXPECT_EQ(io::read_file(dir / "map.txt"), rep.map_document);
  fs::remove_all(dir);
}

TEST(Emit, DelimitedAggregatedTableReparses) {
  auto c = fixture_config();
  c.decimals = -1;
  const auto rep = run_pipeline(c, data_path("example_ratings.csv"));
  const auto files = to_delimited(rep);
  std::istringstream in(files.front().second);
  ASSERT_EQ(files.front().first, "aggregated.csv");
  std::istringstream sniff(files.front().second);
  EXPECT_EQ(io::detect_input_kind(sniff), io::input_kind::aggregated);
  const auto back = io::parse_aggregated(in);
  ASSERT_EQ(back.size(), rep.profiles.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].info.id, rep.profiles[i].info.id);
    EXPECT_EQ(back[i].info.name, rep.profiles[i].info.name);
    EXPECT_EQ(back[i].w, rep.profiles[i].w);
    EXPECT_EQ(back[i].r, rep.profiles[i].r);
  }
}

TEST(Emit, ParseReportFormatNames) {
  EXPECT_EQ(parse_report_format("svg-map"), report_format::svg_map);
  EXPECT_EQ(parse_report_format("csv"), report_format::delimited);
  EXPECT_THROW((void)parse_report_format("xlsx"), error);
  EXPECT_EQ(parse_cffs_mode("as-written"), cffs_mode::as_written);
  EXPECT_THROW((void)parse_partition_mode("quadrant"), error);
}

TEST(Cli, EmptyRatingsFileReportsEmptyMatrix) {
  const auto dir = scratch("cli_empty");
  const auto empty = dir / "empty.csv";
  std::ofstream(empty).close();
  const int status = run_cli("run \"" + empty.string() + "\" --input-kind ratings --out \"" +
                                 (dir / "out").string() + "\"",
                             dir / "log.txt");
  EXPECT_NE(status, 0);
  const auto log = io::read_file(dir / "log.txt");
  const auto diag = nlohmann::json::parse(log.substr(0, log.find('\n')));
  EXPECT_EQ(diag["error"], "EmptyMatrix");
  EXPECT_EQ(diag["file"], empty.string());
  EXPECT_FALSE(fs::exists(dir / "out" / "report.json"));
  fs::remove_all(dir);
}

TEST(Cli, UnknownTermPointsAtRow) {
  const auto dir = scratch("cli_term");
  const auto input = dir / "r.csv";
  std::ofstream(input) << "factor,facet,E1\nf,importance,Low\nf,performance,Mediocre\n";
  EXPECT_NE(run_cli("run \"" + input.string() + "\" --out \"" + (dir / "out").string() + "\"", dir / "log.txt"), 0);
  const auto diag = nlohmann::json::parse(io::read_file(dir / "log.txt"));
  EXPECT_EQ(diag["error"], "UnknownTerm");
  EXPECT_EQ(diag["row"], 3);
  fs::remove_all(dir);
}

TEST(Cli, SvgMapFormatWritesOneFile) {
  const auto dir = scratch("cli_svg");
  ASSERT_EQ(run_cli("run \"" + data_path("case_study_aggregated.csv") + "\" --format svg-map --out \"" +
                        (dir / "out").string() + "\"",
                    dir / "log.txt"),
            0);
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir / "out")) {
    ++n;
    EXPECT_EQ(e.path().filename(), "map.svg");
  }
  EXPECT_EQ(n, 1u);
  fs::remove_all(dir);
}
