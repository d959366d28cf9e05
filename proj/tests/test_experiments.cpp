#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "grgsimple/experiments.hpp"

namespace grgsimple {
namespace {

ExperimentSpec small_spec(ExperimentName name, std::vector<std::size_t> ns, std::size_t iterations) {
  ExperimentSpec spec;
  spec.name = name;
  spec.n_values = std::move(ns);
  spec.iterations = iterations;
  spec.threads = 1;
  return spec;
}

std::vector<const ResultRow*> of_type(const std::vector<ResultRow>& rows, RowType t) {
  std::vector<const ResultRow*> out;
  for (const auto& r : rows)
    if (r.row_type == t) out.push_back(&r);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out(1);
  for (char ch : line) {
    if (ch == ',') out.emplace_back();
    else out.back() += ch;
  }
  return out;
}

std::string csv_without_elapsed(const ExperimentSpec& spec, const std::vector<ResultRow>& rows) {
  std::vector<ResultRow> copy = rows;
  for (auto& r : copy) r.elapsed_s = 0.0;
  std::ostringstream os;
  write_csv(os, spec, copy);
  return os.str();
}

TEST(ExperimentNames, RoundTrip) {
  for (const auto& [value, text] : kExperimentNames) EXPECT_EQ(parse_experiment(to_string(value)), value);
  EXPECT_THROW(parse_experiment("nope"), ParameterError);
}

TEST(ExperimentSpec, Validation) {
  auto spec = small_spec(ExperimentName::ComplexityDense, {}, 1);
  EXPECT_THROW(spec.validate(), ParameterError);
  spec.n_values = {100, 100};
  EXPECT_THROW(spec.validate(), ParameterError);
  spec.n_values = {100};
  spec.iterations = 0;
  EXPECT_THROW(spec.validate(), ParameterError);
  spec.iterations = 1;
  spec.k = 0.5;
  EXPECT_THROW(spec.validate(), ParameterError);
  spec.k = 0.3;
  spec.seeds = "bogus";
  EXPECT_THROW(spec.validate(), ParameterError);
  spec.seeds.reset();
  EXPECT_NO_THROW(spec.validate());
}

TEST(Run, SmallestGridGivesOneTrialAndOneMean) {
  const auto spec = small_spec(ExperimentName::ComplexityDense, {100}, 1);
  const auto rows = run(spec);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].row_type, RowType::Trial);
  EXPECT_EQ(rows[1].row_type, RowType::Mean);
  EXPECT_EQ(rows[0].n, 100u);
  EXPECT_EQ(rows[0].graph_family, "grg");
  EXPECT_EQ(rows[0].boundary, "torus");
  EXPECT_EQ(rows[1].total_queries, rows[0].total_queries);
  EXPECT_EQ(rows[1].trial, 1u);
  EXPECT_EQ(rows[1].note, "trials=1");
  EXPECT_EQ(rows[0].total_queries, rows[0].phase1 + rows[0].phase2);
  EXPECT_EQ(rows[0].phase2, rows[0].candidate_count);
  EXPECT_DOUBLE_EQ(rows[0].r, std::pow(100.0, 0.3));
}

TEST(Run, MeanRowsAverageTrialRows) {
  const auto spec = small_spec(ExperimentName::ComplexityDense, {200, 400}, 4);
  const auto rows = run(spec);
  ASSERT_EQ(rows.size(), 10u);
  ASSERT_TRUE(of_type(rows, RowType::Error).empty());
  for (std::size_t block = 0; block < 2; ++block) {
    const ResultRow& mean = rows[block * 5 + 4];
    ASSERT_EQ(mean.row_type, RowType::Mean);
    double total = 0.0, edges = 0.0;
    std::vector<double> xs;
    for (std::size_t t = 0; t < 4; ++t) {
      const ResultRow& r = rows[block * 5 + t];
      EXPECT_EQ(r.trial, t);
      EXPECT_EQ(r.n, mean.n);
      total += r.total_queries;
      edges += r.edge_count;
      xs.push_back(r.total_queries);
    }
    EXPECT_EQ(mean.total_queries, total / 4);
    EXPECT_EQ(mean.edge_count, edges / 4);
    double m = total / 4, ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    EXPECT_NEAR(mean.stderr_total, std::sqrt(ss / 3.0 / 4.0), 1e-9 * m);
  }
}

TEST(Run, ParallelEqualsSerial) {
  auto spec = small_spec(ExperimentName::RrgCompareDense, {150, 300}, 3);
  const auto serial = run(spec);
  spec.threads = 3;
  const auto parallel = run(spec);
  EXPECT_EQ(csv_without_elapsed(spec, serial), csv_without_elapsed(spec, parallel));
}

TEST(Run, DeterministicForFixedSeed) {
  auto spec = small_spec(ExperimentName::NonEdgeSparse, {300}, 3);
  EXPECT_EQ(csv_without_elapsed(spec, run(spec)), csv_without_elapsed(spec, run(spec)));
  auto other = spec;
  other.base_rng_seed = 2;
  EXPECT_NE(csv_without_elapsed(spec, run(spec)), csv_without_elapsed(other, run(other)));
}

TEST(Run, SeedSweepContainsDenseDefaultSize) {
  auto spec = small_spec(ExperimentName::SeedSizeSweep, {2000}, 1);
  spec.seed_sizes = {4, 32};
  auto rows = run(spec);
  std::vector<std::string> labels;
  for (const auto* r : of_type(rows, RowType::Trial)) labels.push_back(r->seeds);
  EXPECT_EQ(labels, (std::vector<std::string>{"count:4", "count:32"}));

  spec.seed_sizes.clear();
  rows = run(spec);
  bool found = false;
  double previous = INFINITY;
  for (const auto* r : of_type(rows, RowType::Trial)) {
    found = found || r->seeds == "count:386";
    EXPECT_LE(r->candidate_count, previous);
    previous = r->candidate_count;
  }
  EXPECT_TRUE(found);
  EXPECT_EQ(of_type(rows, RowType::Mean).size(), of_type(rows, RowType::Trial).size());
}

TEST(Run, TorusVsSquareSharesPoints) {
  const auto rows = run(small_spec(ExperimentName::TorusVsSquare, {300}, 2));
  const auto trials = of_type(rows, RowType::Trial);
  ASSERT_EQ(trials.size(), 4u);
  EXPECT_EQ(trials[0]->boundary, "torus");
  EXPECT_EQ(trials[1]->boundary, "square");
  EXPECT_EQ(trials[0]->seeds, trials[1]->seeds);
  // Square distances dominate torus distances, so the square graph has no more edges.
  EXPECT_LE(trials[1]->edge_count, trials[0]->edge_count);
  EXPECT_EQ(of_type(rows, RowType::Mean).size(), 2u);
}

TEST(Run, RegularComparisonMatchesDegree) {
  const auto rows = run(small_spec(ExperimentName::RrgCompareSparse, {400}, 1));
  const auto trials = of_type(rows, RowType::Trial);
  ASSERT_EQ(trials.size(), 2u);
  EXPECT_EQ(trials[1]->graph_family, "rrg");
  EXPECT_EQ(trials[1]->boundary, "none");
  EXPECT_EQ(trials[1]->note, "degree=50");
  EXPECT_DOUBLE_EQ(trials[0]->r, std::sqrt(50.0 / std::numbers::pi));
}

TEST(Run, NonEdgeRowsCarryFractions) {
  const auto rows = run(small_spec(ExperimentName::NonEdgeDense, {500}, 2));
  for (const auto& r : rows) {
    ASSERT_EQ(r.row_type == RowType::Error, false) << r.note;
    ASSERT_TRUE(r.nonedge_fraction.has_value());
    EXPECT_GE(*r.nonedge_fraction, 0.0);
    EXPECT_LE(*r.nonedge_fraction, 1.0);
    EXPECT_EQ(r.phase2, 0.0);
  }
  EXPECT_EQ(rows[0].seeds, "count:" + std::to_string(static_cast<int>(std::ceil(std::log(500.0) * std::pow(500.0, 0.3)))));
}

TEST(Run, FailingCellBecomesErrorRow) {
  auto spec = small_spec(ExperimentName::ComplexityDense, {50}, 1);
  spec.radius = 0.01;
  spec.max_resamples = 3;
  const auto rows = run(spec);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].row_type, RowType::Error);
  EXPECT_NE(rows[0].note.find("connected"), std::string::npos);
}

TEST(MatchedDegree, Parity) {
  EXPECT_EQ(detail::matched_degree(10.4, 100), 10u);
  EXPECT_EQ(detail::matched_degree(11.0, 101), 12u);
  EXPECT_EQ(detail::matched_degree(10.6, 101), 10u);
  EXPECT_EQ(detail::matched_degree(0.2, 10), 1u);
  for (std::size_t n : {11u, 101u, 1001u})
    for (double m = 0.5; m < 30.0; m += 0.7) EXPECT_EQ((n * detail::matched_degree(m, n)) % 2, 0u) << n << ' ' << m;
}

TEST(Csv, HeaderAndRowShape) {
  const auto spec = small_spec(ExperimentName::NonEdgeSparse, {200}, 2);
  const auto rows = run(spec);
  std::ostringstream os;
  write_csv(os, spec, rows);
  std::istringstream in(os.str());
  std::string meta, header, line;
  std::getline(in, meta);
  std::getline(in, header);
  EXPECT_EQ(meta, "# schema=grgsimple-results/1 experiment=nonedge-sparse base_seed=1 iterations=2 k=0.3 n_grid=200");
  EXPECT_EQ(header, kCsvColumns);
  const auto columns = split(header);
  std::size_t count = 0;
  while (std::getline(in, line)) {
    const auto fields = split(line);
    ASSERT_EQ(fields.size(), columns.size()) << line;
    EXPECT_EQ(fields[0], "nonedge-sparse");
    EXPECT_EQ(fields[8], "optimal4");
    EXPECT_FALSE(fields[15].empty());
    ++count;
  }
  EXPECT_EQ(count, rows.size());
}

TEST(Csv, NumberFormatting) {
  EXPECT_EQ(detail::format_number(386), "386");
  EXPECT_EQ(detail::format_number(0.3), "0.3");
  EXPECT_EQ(detail::format_number(1.0 / 3.0), "0.3333333333333333");
  EXPECT_EQ(std::stod(detail::format_number(0.1 + 0.2)), 0.1 + 0.2);
}

TEST(Csv, QuotesFieldsWithCommas) {
  ResultRow r;
  r.note = "a,b";
  std::ostringstream os;
  write_csv_rows(os, "", {r});
  EXPECT_NE(os.str().find("\"a,b\""), std::string::npos);
}

ResultRow mean_row(std::size_t n, double total) {
  ResultRow r;
  r.row_type = RowType::Mean;
  r.n = n;
  r.total_queries = total;
  return r;
}

TEST(FitExponent, SyntheticPowerLaws) {
  std::vector<ResultRow> quad, lin;
  for (std::size_t n : {100u, 400u, 1600u, 6400u}) {
    const double nd = static_cast<double>(n);
    quad.push_back(mean_row(n, nd * nd));
    lin.push_back(mean_row(n, 7.5 * nd));
  }
  EXPECT_NEAR(fit_exponent(quad), 2.0, 1e-6);
  EXPECT_NEAR(fit_exponent(lin), 1.0, 1e-6);
  quad.resize(2);
  EXPECT_THROW(fit_exponent(quad), ParameterError);
  lin.push_back(mean_row(100, 1.0));
  EXPECT_THROW(fit_exponent(lin), ParameterError);
}

TEST(ReferenceCsv, Rows) {
  std::ostringstream os;
  write_reference_csv(os, {1000, 2000}, {0.3});
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n,k,curve_value");
  std::getline(in, line);
  const auto f = split(line);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[0], "1000");
  EXPECT_EQ(f[1], "0.3");
  EXPECT_NEAR(std::stod(f[2]), std::pow(1000.0, 1.6), 1e-6);
}

// Total queries sit between the edge count and a constant multiple of
// n^{2k+1} ln^2 n in the dense regime.
TEST(ComplexityDense, QueriesBetweenEdgesAndScaledCurve) {
  const auto rows = run(small_spec(ExperimentName::ComplexityDense, {500, 1000}, 2));
  for (const auto* m : of_type(rows, RowType::Mean)) {
    const double n = static_cast<double>(m->n);
    EXPECT_GE(m->total_queries, m->edge_count);
    EXPECT_LE(m->total_queries, 10.0 * std::pow(n, 1.6) * std::log(n) * std::log(n));
    EXPECT_DOUBLE_EQ(m->reference_curve, std::pow(n, 1.6));
  }
}

}  // namespace
}  // namespace grgsimple
