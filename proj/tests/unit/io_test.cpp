#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "offload/errors.hpp"
#include "offload/io.hpp"

TEST(ParseConfig, EmptyObjectKeepsDefaults) {
  const auto cfg = offload::parse_config("{}");
  EXPECT_EQ(cfg.scenario.profile.s_app, 4e7);
  EXPECT_EQ(cfg.scenario.power_model.k_tx2, 18.0);
  EXPECT_EQ(cfg.scenario.seed, 1u);
  EXPECT_EQ(cfg.scenario.n_channels, 200u);
  EXPECT_EQ(cfg.channel.gamma_db, 25.0);
}

TEST(ParseConfig, UnitsAndAliases) {
  const auto cfg = offload::parse_config(R"({
    "profile": {"s_app_mbytes": 5, "l_max_s": "inf", "tau_p1_s_per_bit": 2e-8},
    "power_model": {"k_rx2_w_per_mbps": 2.86, "p_tx_mt_max_w": 0.2},
    "channel": {"w_ul_hz": 5e6, "n_mt": 2, "n_fap": 3, "gamma_db": -3.5, "seed": 77},
    "curve": {"s_ul_mbytes": [1.5]}
  })");
  EXPECT_DOUBLE_EQ(cfg.scenario.profile.s_app, 4e7);
  EXPECT_TRUE(std::isinf(cfg.scenario.profile.l_max));
  EXPECT_EQ(cfg.scenario.profile.tau_p1, 2e-8);
  EXPECT_DOUBLE_EQ(cfg.scenario.power_model.k_rx2, 2.86e-6);
  EXPECT_EQ(cfg.scenario.power_model.p_tx_mt_max, 0.2);
  EXPECT_EQ(cfg.scenario.w_ul, 5e6);
  EXPECT_EQ(cfg.channel.antennas.n_mt, 2u);
  EXPECT_EQ(cfg.channel.antennas.n_fap, 3u);
  EXPECT_EQ(cfg.channel.gamma_db, -3.5);
  EXPECT_EQ(cfg.channel.seed, 77u);
  ASSERT_EQ(cfg.curve.s_ul_bits.size(), 1u);
  EXPECT_DOUBLE_EQ(cfg.curve.s_ul_bits[0], 1.2e7);
}

TEST(ParseConfig, Scenario) {
  const auto cfg = offload::parse_config(R"({
    "scenario": {"sweep": "latency", "antennas": [[4, 2], [1, 1]],
                 "gamma_db": [25], "l_max_s": [1, 2, null], "n_channels": 5,
                 "seed": 123, "threads": 3},
    "solver": {"epsilon": 1e-8, "max_iters": 50}
  })");
  const auto& sc = cfg.scenario;
  EXPECT_EQ(sc.sweep, offload::SweepKind::Latency);
  ASSERT_EQ(sc.antennas.size(), 2u);
  EXPECT_EQ(sc.antennas[0].label(), "4x2");
  EXPECT_EQ(sc.gamma_db, std::vector<double>{25.0});
  ASSERT_EQ(sc.l_max_values.size(), 3u);
  EXPECT_TRUE(std::isinf(sc.l_max_values[2]));
  EXPECT_EQ(sc.n_channels, 5u);
  EXPECT_EQ(sc.seed, 123u);
  EXPECT_EQ(sc.threads, 3u);
  EXPECT_EQ(sc.solver.epsilon, 1e-8);
  EXPECT_EQ(sc.solver.max_iters, 50);
}

TEST(ParseConfig, DefaultSeedOnlyWhenFileHasNone) {
  EXPECT_EQ(offload::parse_config("{}", 42).scenario.seed, 42u);
  EXPECT_EQ(offload::parse_config(R"({"scenario": {"seed": 7}})", 42).scenario.seed, 7u);
}

TEST(ParseConfig, RejectsBadInput) {
  const char* bad[] = {
      "not json",
      "[]",
      R"({"unknown": 1})",
      R"({"profile": {"s_app": 1}})",
      R"({"profile": {"s_app_bits": -1}})",
      R"({"profile": {"beta_ul": 0.5}})",
      R"({"profile": {"s_app_bits": 1, "s_app_mbytes": 1}})",
      R"({"power_model": {"k_tx2": 0}})",
      R"({"power_model": {"k_tx1_w": "lots"}})",
      R"({"scenario": {"sweep": "other"}})",
      R"({"scenario": {"n_channels": 0}})",
      R"({"scenario": {"n_channels": 2.5}})",
      R"({"scenario": {"antennas": [[4]]}})",
      R"({"scenario": {"antennas": [[0, 1]]}})",
      R"({"scenario": {"seed": -1}})",
      R"({"solver": {"epsilon": 2}})",
      R"({"channel": {"h_ul": [[[1, 0]]]}})",
      R"({"channel": {"h_ul": [[[1, 0]]], "h_dl": [[[1]]]}})",
      R"({"channel": {"n_mt": 0}})",
      R"({"curve": {"t_min_s": 0}})",
      R"({"curve": {"r_points": 0}})",
  };
  for (const char* text : bad) {
    EXPECT_THROW(offload::parse_config(text), offload::InvalidInput) << text;
  }
}

TEST(ParseComplexMatrix, RowMajorPairs) {
  const auto m = offload::parse_complex_matrix("[[[1, 2], [3, -4]], [[0, 0], [0.5, 1e-3]]]");
  ASSERT_EQ(m.rows(), 2);
  ASSERT_EQ(m.cols(), 2);
  EXPECT_EQ(m(0, 1), std::complex<double>(3, -4));
  EXPECT_EQ(m(1, 1), std::complex<double>(0.5, 1e-3));
  EXPECT_THROW(offload::parse_complex_matrix("[[[1, 2]], [[1, 2], [3, 4]]]"),
               offload::InvalidInput);
  EXPECT_THROW(offload::parse_complex_matrix("[]"), offload::InvalidInput);
}

TEST(BuildChannel, ExplicitMatricesAndSeededDraws) {
  auto cfg = offload::parse_config(R"({
    "channel": {"h_ul": [[[1, 0], [0, 0]]], "h_dl": [[[2, 0]], [[0, 0]]]}
  })");
  auto ch = offload::build_channel(cfg);
  EXPECT_EQ(ch.n_mt(), 2u);
  EXPECT_EQ(ch.n_fap(), 1u);
  EXPECT_DOUBLE_EQ(ch.eigs_ul()[0], 1.0);
  EXPECT_DOUBLE_EQ(ch.eigs_dl()[0], 4.0);

  cfg = offload::parse_config(R"({"channel": {"n_mt": 4, "n_fap": 2, "seed": 5}})");
  const auto a = offload::build_channel(cfg);
  const auto b = offload::build_channel(cfg);
  EXPECT_EQ(a.n_mt(), 4u);
  EXPECT_EQ(a.h_ul(), b.h_ul());
  cfg.channel.seed = 6;
  EXPECT_NE(offload::build_channel(cfg).h_ul(), a.h_ul());
}

TEST(Json, SolutionAndInfeasible) {
  offload::OffloadSolution sol;
  sol.decision = offload::Decision::Partial;
  sol.s_p1 = 1.0 / 3.0;
  sol.t_ul = std::numeric_limits<double>::infinity();
  const auto text = offload::solution_to_json(sol);
  EXPECT_NE(text.find("\"decision\": \"partial\""), std::string::npos);
  EXPECT_NE(text.find("0.333333333333"), std::string::npos);
  EXPECT_EQ(text.find("0.3333333333333"), std::string::npos);
  EXPECT_NE(text.find("\"t_ul_s\": \"inf\""), std::string::npos);
  const auto inf = offload::infeasible_to_json({1.5});
  EXPECT_NE(inf.find("\"feasible\": false"), std::string::npos);
  EXPECT_NE(inf.find("\"l_required_s\": 1.5"), std::string::npos);
}

TEST(Json, CaseReport) {
  offload::CaseReport r;
  r.total_offload_optimal = true;
  r.min_latency.l_o = 1.25;
  r.unconstrained.decision = offload::UnconstrainedDecision::AllRemote;
  const auto text = offload::case_report_to_json(r);
  EXPECT_NE(text.find("\"total_offload_optimal\": true"), std::string::npos);
  EXPECT_NE(text.find("\"l_o_s\": 1.25"), std::string::npos);
  EXPECT_NE(text.find("\"unconstrained_decision\": \"all_remote\""), std::string::npos);
}
