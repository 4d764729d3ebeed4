#include <sstream>

#include <gtest/gtest.h>

#include "it2ipa/io.hpp"
#include "test_support.hpp"

using namespace it2ipa;
using namespace testing_support;

namespace {

template <class F>
error capture(F&& f) {
  try {
    f();
  } catch (const error& e) {
    return e;
  }
  ADD_FAILURE() << "no error thrown";
  return error(errc::io_failure, "none");
}

rating_matrix ratings(const std::string& text) {
  std::istringstream in(text);
  return io::parse_ratings(in);
}

std::vector<factor_profile> aggregated(const std::string& text) {
  std::istringstream in(text);
  return io::parse_aggregated(in);
}

}  // namespace

TEST(Csv, QuotedFieldsAndEscapes) {
  const auto cells = io::split_csv_line(R"(a,"b,c","say ""hi""",,d)", 1);
  ASSERT_EQ(cells.size(), 5u);
  EXPECT_EQ(cells[1], "b,c");
  EXPECT_EQ(cells[2], "say \"hi\"");
  EXPECT_EQ(cells[3], "");
  EXPECT_EQ(io::csv_line({"a", "b,c", "q\""}), "a,\"b,c\",\"q\"\"\"\n");
  EXPECT_EQ(capture([] { (void)io::split_csv_line("\"open", 7); }).row(), 7u);
}

TEST(Csv, SkipsCommentsAndBlankLinesButKeepsLineNumbers) {
  std::istringstream in("# note\n\na,b\r\n  \n1,2\n");
  const auto rows = io::parse_csv(in);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].line, 3u);
  EXPECT_EQ(rows[1].line, 5u);
  EXPECT_EQ(rows[0].cells[1], "b");
}

TEST(Ratings, ParsesExampleFile) {
  const auto m = io::load_ratings(data_path("example_ratings.csv"));
  EXPECT_EQ(m.factors.size(), 5u);
  EXPECT_EQ(m.experts, (std::vector<std::string>{"E1", "E2", "E3"}));
  EXPECT_EQ(m.factors[0].name, "Trust");
  EXPECT_EQ(m.importance[0], (std::vector<std::string>{"Low", "Very High", "Very High"}));
  ASSERT_EQ(m.source_lines.size(), 5u);
  EXPECT_EQ(m.source_lines[0][0], 3u);
  EXPECT_EQ(m.source_lines[0][1], 4u);
}

TEST(Ratings, OptionalColumnsDefault) {
  const auto m = ratings("factor,facet,A\nf1,performance,Low\nf1,importance,High\n");
  EXPECT_EQ(m.factors[0].name, "f1");
  EXPECT_EQ(m.factors[0].dimension, "unspecified");
  EXPECT_EQ(m.importance[0][0], "High");
}

TEST(Ratings, Errors) {
  EXPECT_EQ(capture([] { (void)ratings(""); }).code(), errc::empty_matrix);
  EXPECT_EQ(capture([] { (void)ratings("# only a comment\n"); }).code(), errc::empty_matrix);
  EXPECT_EQ(capture([] { (void)ratings("factor,facet,A\n"); }).code(), errc::empty_matrix);
  EXPECT_EQ(capture([] { (void)ratings("factor,facet\nf,importance\n"); }).code(), errc::empty_matrix);
  EXPECT_EQ(capture([] { (void)ratings("factor,A\nf,Low\n"); }).code(), errc::parse_error);

  const auto dup = capture([] { (void)ratings("factor,facet,A\nf,importance,Low\nf,importance,Low\n"); });
  EXPECT_EQ(dup.code(), errc::parse_error);
  EXPECT_EQ(dup.row(), 3u);

  const auto missing = capture([] { (void)ratings("factor,facet,A\nf,importance,Low\n"); });
  EXPECT_NE(std::string(missing.what()).find("performance"), std::string::npos);

  const auto empty_cell = capture([] { (void)ratings("factor,facet,A,B\nf,importance,Low,\n"); });
  EXPECT_EQ(empty_cell.row(), 2u);
  EXPECT_EQ(capture([] { (void)ratings("factor,facet,A\nf,quality,Low\n"); }).row(), 2u);
  EXPECT_EQ(capture([] { (void)ratings("factor,facet,A\nf,importance,Low,Low\n"); }).row(), 2u);
}

TEST(Aggregated, ParsesFixture) {
  const auto ps = case_study();
  ASSERT_EQ(ps.size(), 18u);
  EXPECT_EQ(ps[0].info.id, "x_1");
  EXPECT_EQ(ps[0].info.dimension, "Organizational Culture");
  EXPECT_EQ(ps[17].info.dimension, "Leadership and Support of Senior Managers");
  EXPECT_TRUE(near(ps[0].w, std_number(0.333, 0.5, 0.5, 0.7, 0.417, 0.5, 0.5, 0.6), 0.0));
}

TEST(Aggregated, Errors) {
  const std::string head = "factor,importance,performance\n";
  const std::string good = "\"((0,0.1,0.1,0.3;1,1),(0.05,0.1,0.1,0.2;0.9,0.9))\"";
  EXPECT_EQ(capture([&] { (void)aggregated(head); }).code(), errc::empty_matrix);
  EXPECT_EQ(capture([&] { (void)aggregated("factor,importance\nf," + good + "\n"); }).code(), errc::parse_error);

  const auto bad_text = capture([&] { (void)aggregated(head + "f," + good + ",\"((0,1;1,1))\"\n"); });
  EXPECT_EQ(bad_text.code(), errc::parse_error);
  EXPECT_EQ(bad_text.row(), 2u);

  const auto invalid = capture(
      [&] { (void)aggregated(head + "f," + good + ",\"((0.3,0.2,0.4,0.5;1,1),(0.3,0.3,0.3,0.3;1,1))\"\n"); });
  EXPECT_EQ(invalid.code(), errc::invalid_number);
  EXPECT_EQ(invalid.row(), 2u);

  const auto dup = capture([&] { (void)aggregated(head + "f," + good + "," + good + "\nf," + good + "," + good + "\n"); });
  EXPECT_EQ(dup.row(), 3u);
}

TEST(InputKind, DetectedFromHeader) {
  auto kind = [](const std::string& text) {
    std::istringstream in(text);
    const auto k = io::detect_input_kind(in);
    std::string first;
    std::getline(in, first);
    EXPECT_EQ(first, text.substr(0, text.find('\n')));  // stream is rewound
    return k;
  };
  EXPECT_EQ(kind("factor,facet,E1\n"), io::input_kind::ratings);
  EXPECT_EQ(kind("# c\nfactor,Importance,Performance\n"), io::input_kind::aggregated);
  EXPECT_EQ(kind("factor,facet,importance\n"), io::input_kind::ratings);
  EXPECT_EQ(kind(""), io::input_kind::ratings);
}

TEST(Scale, RoundTripsThroughJson) {
  const auto s = default_scale();
  const auto back = io::parse_scale(io::scale_to_json(s));
  ASSERT_EQ(back.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(back.terms()[i].label, s.terms()[i].label);
    EXPECT_EQ(back.terms()[i].value, s.terms()[i].value);
  }
  const auto file = io::load_scale(data_path("default_scale.json"));
  EXPECT_EQ(file.size(), 5u);
}

TEST(Scale, InvalidDocuments) {
  using nlohmann::json;
  EXPECT_EQ(capture([] { (void)io::parse_scale(json::object()); }).code(), errc::parse_error);
  const json short_trap = json::parse(R"({"terms":[{"label":"A","upper":[0,0,0],"lower":[0,0,0,0,1,1]}]})");
  EXPECT_EQ(capture([&] { (void)io::parse_scale(short_trap); }).code(), errc::parse_error);
  const json decreasing = json::parse(R"({"terms":[
      {"label":"A","upper":[0.5,0.6,0.6,0.7,1,1],"lower":[0.55,0.6,0.6,0.65,0.9,0.9]},
      {"label":"B","upper":[0,0.1,0.1,0.2,1,1],"lower":[0.05,0.1,0.1,0.15,0.9,0.9]}]})");
  EXPECT_EQ(capture([&] { (void)io::parse_scale(decreasing); }).code(), errc::invalid_scale);
  const auto missing = capture([] { (void)io::load_scale(data_path("no_such_scale.json")); });
  EXPECT_EQ(missing.code(), errc::io_failure);
  ASSERT_TRUE(missing.file());
}

TEST(Psychometrics, ParsesExampleFile) {
  const auto p = io::load_psychometrics(data_path("example_psychometrics.json"));
  EXPECT_EQ(p.panel_size, 11);
  EXPECT_FALSE(p.components.empty());
  ASSERT_FALSE(p.dimensions.empty());
  EXPECT_EQ(p.dimensions[0].second.size(), 30u);
  EXPECT_DOUBLE_EQ(p.cvr_threshold, 0.59);
}

TEST(Psychometrics, ComponentsNeedAPanel) {
  const auto j = nlohmann::json::parse(R"({"components":[{"id":"c","essential":3}]})");
  EXPECT_EQ(capture([&] { (void)io::parse_psychometrics(j); }).code(), errc::invalid_counts);
}

TEST(Reference, ParsesPublishedFixture) {
  const auto r = published();
  EXPECT_EQ(r.label, "published");
  EXPECT_EQ(r.defuzzified.size(), 18u);
  EXPECT_EQ(r.success_scores.size(), 8u);
  EXPECT_EQ(r.failure_scores.size(), 7u);
  EXPECT_EQ(r.success_factors.size(), 8u);
  EXPECT_EQ(r.failure_factors.front(), "x_7");
  EXPECT_DOUBLE_EQ(r.failure_ranks.at("x_7"), 5.423);
}

TEST(WriteFile, AtomicReplace) {
  const auto dir = std::filesystem::temp_directory_path() / "it2ipa_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.txt";
  io::write_file_atomic(path, "first");
  io::write_file_atomic(path, "second");
  EXPECT_EQ(io::read_file(path), "second");
  EXPECT_FALSE(std::filesystem::exists(dir / "out.txt.tmp"));
  std::filesystem::remove_all(dir);
}
