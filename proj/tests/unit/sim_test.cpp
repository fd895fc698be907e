#include <cmath>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "offload/cases.hpp"
#include "offload/errors.hpp"
#include "offload/sim.hpp"

using offload::ScenarioConfig;

namespace {

ScenarioConfig small_scenario() {
  ScenarioConfig sc;
  sc.antennas = {{4, 4}, {1, 1}};
  sc.gamma_db = {-20, 10, 40};
  sc.n_channels = 20;
  sc.seed = 99;
  return sc;
}

}  // namespace

TEST(SplitMix, KnownValues) {
  // Reference outputs of the SplitMix64 generator seeded with 0.
  std::uint64_t state = 0;
  const std::uint64_t want[] = {0xe220a8397b1dcdafULL, 0x6e789e6aa1b965f4ULL,
                                0x06c45d188009454fULL};
  for (std::uint64_t w : want) {
    EXPECT_EQ(offload::splitmix64(state), w);
    state += 0x9e3779b97f4a7c15ULL;
  }
}

TEST(SubstreamSeed, DependsOnEveryIndex) {
  const std::uint64_t a[] = {0, 0, 0};
  const std::uint64_t b[] = {0, 0, 1};
  const std::uint64_t c[] = {1, 0, 0};
  EXPECT_NE(offload::substream_seed(1, a), offload::substream_seed(1, b));
  EXPECT_NE(offload::substream_seed(1, a), offload::substream_seed(1, c));
  EXPECT_NE(offload::substream_seed(1, a), offload::substream_seed(2, a));
  EXPECT_EQ(offload::substream_seed(5, b), offload::substream_seed(5, b));
}

TEST(GaussianSource, UniformInHalfOpenUnitInterval) {
  offload::GaussianSource g(3);
  for (int i = 0; i < 100000; ++i) {
    const double u = g.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LE(u, 1.0);
  }
}

TEST(GaussianSource, MomentsOfStandardNormal) {
  offload::GaussianSource g(4);
  double s1 = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n / 2; ++i) {
    const auto [a, b] = g.standard_normal_pair();
    s1 += a + b;
    s2 += a * a + b * b;
  }
  EXPECT_NEAR(s1 / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.01);
}

TEST(GenChannel, ZeroGainGivesZeroMatrix) {
  offload::GaussianSource g(5);
  const auto h = offload::gen_channel(3, 2, 0.0, g);
  EXPECT_EQ(h.rows(), 3);
  EXPECT_EQ(h.cols(), 2);
  EXPECT_EQ(h.squaredNorm(), 0.0);
}

TEST(GenChannel, UnitMeanEntryPower) {
  offload::GaussianSource g(6);
  double sum = 0.0, re2 = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto h = offload::gen_channel(1, 1, 1.0, g);
    sum += std::norm(h(0, 0));
    re2 += h(0, 0).real() * h(0, 0).real();
  }
  EXPECT_NEAR(sum / n, 1.0, 0.02);
  EXPECT_NEAR(re2 / n, 0.5, 0.01);
}

TEST(GenChannel, ScalesWithGain) {
  offload::GaussianSource a(7), b(7);
  const auto h1 = offload::gen_channel(2, 2, 1.0, a);
  const auto h4 = offload::gen_channel(2, 2, 4.0, b);
  EXPECT_NEAR((h4 - 2.0 * h1).norm(), 0.0, 1e-14);
}

TEST(GenChannel, SameSeedSameBits) {
  offload::GaussianSource a(8), b(8);
  const auto h1 = offload::gen_channel(4, 4, 3.0, a);
  const auto h2 = offload::gen_channel(4, 4, 3.0, b);
  for (int i = 0; i < 16; ++i) EXPECT_EQ(h1(i / 4, i % 4), h2(i / 4, i % 4));
}

TEST(DrawChannelPair, ShapesAndIndependence) {
  const auto p = offload::draw_channel_pair(1, 0, 0, 0, {4, 2}, 10.0);
  EXPECT_EQ(p.h_ul.rows(), 2);
  EXPECT_EQ(p.h_ul.cols(), 4);
  EXPECT_EQ(p.h_dl.rows(), 4);
  EXPECT_EQ(p.h_dl.cols(), 2);
  EXPECT_NE(p.h_ul(0, 0), p.h_dl(0, 0));
  const auto q = offload::draw_channel_pair(1, 0, 0, 1, {4, 2}, 10.0);
  EXPECT_NE(p.h_ul(0, 0), q.h_ul(0, 0));
}

TEST(DbToLinear, Values) {
  EXPECT_DOUBLE_EQ(offload::db_to_linear(0.0), 1.0);
  EXPECT_NEAR(offload::db_to_linear(30.0), 1000.0, 1e-9);
  EXPECT_NEAR(offload::db_to_linear(-20.0), 0.01, 1e-15);
}

TEST(ScenarioConfig, Validation) {
  ScenarioConfig sc;
  EXPECT_NO_THROW(sc.validate());
  sc.n_channels = 0;
  EXPECT_THROW(sc.validate(), offload::InvalidInput);
  sc = {};
  sc.gamma_db = {0.0, std::numeric_limits<double>::infinity()};
  EXPECT_THROW(sc.validate(), offload::InvalidInput);
  sc = {};
  sc.antennas = {{0, 1}};
  EXPECT_THROW(sc.validate(), offload::InvalidInput);
}

TEST(GainSweep, RowsAreConsistent) {
  const auto sc = small_scenario();
  const auto rows = offload::run_gain_sweep(sc);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].config_id, "4x4");
  EXPECT_EQ(rows[3].config_id, "1x1");
  for (const auto& r : rows) {
    EXPECT_EQ(r.n_channels, sc.n_channels);
    EXPECT_EQ(r.n_errors, 0u);
    EXPECT_EQ(r.n_infeasible + r.n_no_offload + r.n_partial + r.n_total, r.n_channels);
    EXPECT_GE(r.energy_saving_pct, 0.0);
    EXPECT_LE(r.energy_saving_pct, 100.0);
    EXPECT_GE(r.offloaded_pct, 0.0);
    EXPECT_LE(r.offloaded_pct, 100.0);
    EXPECT_LE(r.latency_s, sc.profile.l_max + 1e-9);
    EXPECT_LE(r.r_ul_se, r.r_ul_max_se * (1.0 + 1e-12));
  }
  EXPECT_EQ(rows[0].offloaded_pct, 0.0);
  EXPECT_EQ(rows[0].energy_saving_pct, 0.0);
  EXPECT_EQ(rows[2].offloaded_pct, 100.0);
}

TEST(GainSweep, WorkerCountDoesNotChangeOutput) {
  auto sc = small_scenario();
  std::ostringstream a, b;
  sc.threads = 1;
  offload::write_sweep_csv(a, offload::run_gain_sweep(sc));
  sc.threads = 4;
  offload::write_sweep_csv(b, offload::run_gain_sweep(sc));
  EXPECT_EQ(a.str(), b.str());
}

TEST(LatencySweep, PartialBandThenBoundary) {
  ScenarioConfig sc;
  sc.antennas = {{4, 4}};
  sc.gamma_db = {25.0};
  sc.seed = 3;
  const auto pair = offload::draw_channel_pair(sc.seed, 0, 0, 0, {4, 4}, 25.0);
  const auto ch = offload::ChannelState::from_matrices(pair.h_ul, pair.h_dl, sc.w_ul, sc.w_dl);
  const auto p = offload::OffloadProblem::build(sc.profile, ch, sc.power_model);
  const double l_o = offload::min_latency(p).l_o;
  sc.l_max_values = {0.5 * l_o, l_o * 1.001, l_o * 1.05, 1e9};
  const auto rows = offload::run_latency_sweep(sc);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].n_infeasible, 1u);
  EXPECT_NEAR(rows[0].l_required, l_o, 1e-12 * l_o);
  EXPECT_EQ(rows[1].n_partial, 1u);
  EXPECT_TRUE(rows[3].offloaded_pct == 0.0 || rows[3].offloaded_pct == 100.0);
  const auto u = offload::unconstrained_decision(p);
  EXPECT_EQ(rows[3].offloaded_pct == 100.0,
            u.decision == offload::UnconstrainedDecision::AllRemote);
}

TEST(Curves, EnergyTimeShapes) {
  const auto pair = offload::draw_channel_pair(1, 0, 0, 0, {4, 4}, 25.0);
  const auto ch = offload::ChannelState::from_matrices(pair.h_ul, pair.h_dl, 1e7, 1e7);
  offload::PowerModelParams pm;
  const std::vector<double> s{1.2e7};
  const auto t = offload::linspace(0.05, 5.0, 200);
  const auto rows = offload::emit_energy_curve(ch, pm, s, t);
  ASSERT_EQ(rows.size(), 200u);
  // Baseline on: a single interior minimum.
  std::size_t argmin = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].energy < rows[argmin].energy) argmin = i;
  EXPECT_GT(argmin, 0u);
  EXPECT_LT(argmin, rows.size() - 1);
  for (std::size_t i = 1; i <= argmin; ++i) EXPECT_LT(rows[i].energy, rows[i - 1].energy);
  for (std::size_t i = argmin + 1; i < rows.size(); ++i)
    EXPECT_GT(rows[i].energy, rows[i - 1].energy);

  pm.k_tx1 = 0.0;
  const auto flat = offload::emit_energy_curve(ch, pm, s, t);
  for (std::size_t i = 1; i < flat.size(); ++i) EXPECT_LT(flat[i].energy, flat[i - 1].energy);
}

TEST(Curves, ActiveModesRiseToFour) {
  const auto pair = offload::draw_channel_pair(1, 0, 0, 0, {4, 4}, 25.0);
  const auto ch = offload::ChannelState::from_matrices(pair.h_ul, pair.h_dl, 1e7, 1e7);
  auto r = offload::linspace(0.01, 40.0, 400);
  for (double& v : r) v *= ch.w_ul();
  const auto rows = offload::emit_rate_curve(ch, offload::PowerModelParams{}, r);
  ASSERT_EQ(rows.size(), 400u);
  EXPECT_EQ(rows.front().k_active, 1u);
  EXPECT_EQ(rows.back().k_active, 4u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GE(rows[i].k_active, rows[i - 1].k_active);
  EXPECT_NEAR(rows[10].r_se, r[10] / ch.w_ul(), 1e-15);
}

TEST(Linspace, EndsAndDegenerateCounts) {
  EXPECT_TRUE(offload::linspace(0, 1, 0).empty());
  EXPECT_EQ(offload::linspace(2, 3, 1), std::vector<double>{2.0});
  const auto v = offload::linspace(0, 1, 5);
  EXPECT_EQ(v.front(), 0.0);
  EXPECT_EQ(v.back(), 1.0);
  EXPECT_DOUBLE_EQ(v[2], 0.5);
}

TEST(Format, TwelveSignificantDigits) {
  EXPECT_EQ(offload::format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(offload::format_number(4e7), "40000000");
  EXPECT_EQ(offload::format_number(std::numeric_limits<double>::quiet_NaN()), "");
  EXPECT_EQ(offload::format_number(std::numeric_limits<double>::infinity()), "inf");
}

TEST(Output, CsvHeaderAndJsonLines) {
  offload::SweepRow row;
  row.config_id = "4x2";
  row.n_mt = 4;
  row.n_fap = 2;
  row.latency_s = std::numeric_limits<double>::quiet_NaN();
  const std::vector<offload::SweepRow> rows{row};
  std::ostringstream csv, jl;
  offload::write_sweep_csv(csv, rows);
  offload::write_sweep_jsonl(jl, rows);
  const auto text = csv.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "config_id,n_mt,n_fap,gamma_db,l_max_s,n_channels,n_infeasible,n_errors,"
            "n_no_offload,n_partial,n_total,energy_saving_pct,latency_s,offloaded_pct,"
            "r_ul_bps_hz,r_ul_max_bps_hz,l_required_s");
  EXPECT_NE(jl.str().find("\"latency_s\":null"), std::string::npos);
  EXPECT_NE(jl.str().find("\"config_id\":\"4x2\""), std::string::npos);
  EXPECT_EQ(jl.str().back(), '\n');
}
