#include <gtest/gtest.h>

#include "indefsl/io.hpp"

using namespace indefsl;

namespace {

ErrorKind kind_of(const std::string& text) {
  try {
    io::parse_problem_text(text);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "accepted: " << text;
  return ErrorKind::Usage;
}

}  // namespace

TEST(Parse, BandStructureAndClosedForms) {
  auto w = io::parse_problem_text(R"({"mu_r": [0.0, 1.0], "mu_l": [0.5], "xi": [0.7], "signs": [-1]})");
  EXPECT_EQ(w.kind, PairKind::FiniteZone);
  EXPECT_EQ(w.bands.signs[0], -1);
  EXPECT_EQ(io::parse_problem_text(R"({"kind": "const", "a": -2})").a, -2.0);
  auto e = io::parse_problem_text(R"({"kind": "example2", "xi": -0.75, "k2": 0.25})");
  EXPECT_EQ(e.kind, PairKind::Example2);
  EXPECT_EQ(e.k2, 0.25);
}

TEST(Parse, Malformed) {
  EXPECT_EQ(kind_of("{"), ErrorKind::MalformedInput);
  EXPECT_EQ(kind_of("[1, 2]"), ErrorKind::MalformedInput);
  EXPECT_EQ(kind_of(R"({"kind": "const"})"), ErrorKind::MalformedInput);
  EXPECT_EQ(kind_of(R"({"kind": "sine", "a": 1})"), ErrorKind::MalformedInput);
  EXPECT_EQ(kind_of(R"({"kind": "const", "a": 1, "mu_r": [0]})"), ErrorKind::MalformedInput);
  EXPECT_EQ(kind_of(R"({"mu_r": [0, 1], "mu_l": [0.5], "xi": ["x"], "signs": [1]})"), ErrorKind::MalformedInput);
  EXPECT_EQ(kind_of(R"({"mu_r": [0, 1], "mu_l": [0.5], "xi": [0.7], "signs": [1.5]})"), ErrorKind::MalformedInput);
  EXPECT_EQ(kind_of(R"({"mu_r": [0, 1], "mu_l": [0.5], "xi": [0.7]})"), ErrorKind::MalformedInput);
  EXPECT_EQ(kind_of(R"({"mu_r": [0, 1], "mu_l": [1.5], "xi": [0.7], "signs": [1]})"), ErrorKind::InvalidBands);
}

TEST(Serialize, BandRoundTrip) {
  BandStructure b{{-1.0, 0.5, 2.0}, {0.0, 1.0}, {0.2, 1.5}, {1, -1}};
  auto w = io::parse_problem(io::to_json(b));
  EXPECT_EQ(w.bands.mu_r, b.mu_r);
  EXPECT_EQ(w.bands.xi, b.xi);
  EXPECT_EQ(w.bands.signs, b.signs);
}

TEST(Serialize, VerdictFields) {
  auto v = classify_similarity(WeylPair::constant(-1.0));
  auto j = io::to_json(v);
  EXPECT_EQ(j["overall"], "NotSimilar");
  ASSERT_EQ(j["singularities"].size(), 1u);
  EXPECT_EQ(j["singularities"][0], 0.0);
  EXPECT_EQ(j["essential"][0][0], "-inf");
  EXPECT_TRUE(j["definitizable"].is_boolean());

  auto s = io::to_json(eigenvalues(WeylPair::example1(-0.75, 0.5)));
  ASSERT_EQ(s["eigenvalues"].size(), 2u);
  EXPECT_NEAR(s["eigenvalues"][1]["im"].get<double>(), 0.661438, 1e-6);
  EXPECT_EQ(s["eigenvalues"][1]["mult"], 1);
}

TEST(Serialize, CriteriaKeys) {
  CriteriaReport c;
  c.necessary = {"necessary_ratio", 1.5, "BOUNDED", cplx(2.0, 0.0), std::nullopt, {}};
  c.sufficient = {"sufficient_sum_ratio", std::numeric_limits<double>::infinity(), "UNBOUNDED", std::nullopt, std::nullopt, {}};
  c.muckenhoupt = {"muckenhoupt_pair", 0.5, "FINITE", std::nullopt, Interval{0.0, 1.0}, {}};
  c.dissipative = {"dissipative_part", 0.1, "BOUNDED-AWAY", std::nullopt, std::nullopt, {}};
  c.poisson = {"poisson_condition", 0.2, "FINITE", std::nullopt, std::nullopt, {"note"}};
  auto j = io::to_json(c);
  EXPECT_EQ(j.size(), 5u);
  EXPECT_EQ(j["necessary_ratio"]["witness"]["re"], 2.0);
  EXPECT_EQ(j["sufficient_sum_ratio"]["value"], "inf");
  EXPECT_EQ(j["muckenhoupt_pair"]["witness"][1], 1.0);
  EXPECT_TRUE(j["dissipative_part"]["witness"].is_null());
  EXPECT_EQ(j["poisson_condition"]["notes"][0], "note");
}

TEST(Profiles, Known) {
  EXPECT_EQ(tolerance_profile("default").singularities.m_hi, 7);
  EXPECT_GT(tolerance_profile("strict").criteria.real_points, tolerance_profile("default").criteria.real_points);
  EXPECT_THROW(tolerance_profile("loose"), Error);
}

TEST(Cells, SweepFormatting) {
  auto v = classify_similarity(WeylPair::example1(-0.75, 0.5));
  EXPECT_EQ(io::verdict_cell(v), "Norm");
  EXPECT_EQ(io::singularities_cell(v), "");
  EXPECT_EQ(io::eigenvalues_cell(v.spectrum), "0-0.6614378278i;0+0.6614378278i");
}
