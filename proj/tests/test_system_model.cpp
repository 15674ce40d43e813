#include <gtest/gtest.h>

#include <algorithm>

#include "ehcr/error.hpp"
#include "ehcr/system_model.hpp"

using namespace ehcr;

namespace {

bool has_message(const std::vector<std::string>& report, const std::string& needle) {
  return std::any_of(report.begin(), report.end(),
                     [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST(SystemModel, TableOneDerived) {
  const SystemParams p = reference_table_params();
  EXPECT_EQ(transmit_packets(p), 9);
  const DerivedQuantities d = derive(p, 1e-4);
  EXPECT_EQ(d.transmit_packets, 9);
  EXPECT_DOUBLE_EQ(d.pu_rate, 1.6);
  EXPECT_DOUBLE_EQ(d.su_rate_blind, 0.8);
  EXPECT_NEAR(d.su_rate_sensing, 16.0 / (0.9e-3 * 2e4), 1e-14);
  EXPECT_EQ(d.time_bandwidth, 2);
  EXPECT_EQ(d.sample_count, 2);
  EXPECT_NEAR(d.sensing_energy, 0.02, 1e-15);
  EXPECT_EQ(d.sensing_packets, 1);
  EXPECT_NEAR(d.avg_sensing_snr, 4.0 * (0.8 / 9.0) / 0.02, 1e-12);
}

TEST(SystemModel, PacketCountsIgnoreRoundingNoise) {
  EXPECT_EQ(packets_for(0.3, 0.1), 3);
  EXPECT_EQ(packets_for(0.30000001, 0.1), 4);
  EXPECT_EQ(packets_for(0.0, 0.1), 0);
  EXPECT_EQ(packets_for(4e-6 * 2, 4e-5), 1);
}

TEST(SystemModel, TimeBandwidthMustBeIntegral) {
  const SystemParams p = reference_table_params();
  EXPECT_EQ(time_bandwidth_product(p, 3 * (1.0 / 2e4)), 3);
  EXPECT_EQ(time_bandwidth_product(p, 0.1 * 7 / 2e4 * 10), 7);
  EXPECT_THROW(time_bandwidth_product(p, 1.5e-4 + 1e-6), DomainError);
}

TEST(SystemModel, DeriveErrors) {
  SystemParams p = reference_table_params();
  EXPECT_THROW(derive(p, 1e-3), DomainError);
  EXPECT_THROW(derive(p, 0.0), DomainError);
  p.battery_capacity = 9;
  EXPECT_THROW(derive(p, 1e-4), ConfigError);
}

TEST(SystemModel, ValidateTableOne) {
  EXPECT_TRUE(validate(reference_table_params()).empty());
  EXPECT_TRUE(validate(testbench_params()).empty());
}

TEST(SystemModel, ValidateViolations) {
  SystemParams p = reference_table_params();
  p.pu_activity = 1.3;
  EXPECT_TRUE(has_message(validate(p), "rho out of [0,1]"));

  p = reference_table_params();
  p.battery_capacity = 5;
  EXPECT_TRUE(has_message(validate(p), "battery smaller than one transmission"));

  p = reference_table_params();
  p.links.s.distance = 0.0;
  p.noise_power = -1.0;
  const auto report = validate(p);
  EXPECT_TRUE(has_message(report, "links.s.distance"));
  EXPECT_TRUE(has_message(report, "sigma_n2"));
}

TEST(SystemModel, ZeroHarvestSourcesAreValid) {
  SystemParams p = testbench_params();
  p.nature_rate = 0.0;
  p.rf_efficiency = 0.0;
  EXPECT_TRUE(validate(p).empty());
}

TEST(SystemModel, MeanGainUsesPathLoss) {
  LinkParams l{0.8, 3.0};
  EXPECT_NEAR(l.mean_gain(), 0.8 / 9.0, 1e-16);
  l.path_loss_exponent = 3.0;
  EXPECT_NEAR(l.mean_gain(), 0.8 / 27.0, 1e-16);
}
