// Copyright 2026 The cit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cit/cit.h"

#include <cmath>
#include <cstdio>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace {

cit_distribution* Generate(const char* family, uint64_t n, uint64_t seed) {
  cit_generate_params p;
  cit_generate_params_init(&p);
  p.family = family;
  p.n = n;
  p.m = 3;
  p.epsilon = 0.3;
  p.seed = seed;
  cit_distribution* d = nullptr;
  EXPECT_EQ(cit_distribution_generate(&p, &d), CIT_OK) << cit_last_error();
  return d;
}

TEST(CApiTest, VersionAndNullArguments) {
  EXPECT_STREQ(cit_version(), "1.0.0");
  EXPECT_EQ(cit_distribution_load(nullptr, nullptr), CIT_ERR_INVALID_ARGUMENT);
  EXPECT_NE(std::string(cit_last_error()), "");
  cit_distribution_free(nullptr);
  cit_samples_free(nullptr);
  cit_verdict_free(nullptr);
}

TEST(CApiTest, GenerateSaveLoad) {
  cit_distribution* d = Generate("no_binary_r1", 40, 2);
  ASSERT_NE(d, nullptr);
  size_t l1 = 0, l2 = 0, n = 0;
  ASSERT_EQ(cit_distribution_dims(d, &l1, &l2, &n), CIT_OK);
  EXPECT_EQ(l1, 2u);
  EXPECT_EQ(n, 40u);
  double proxy = 0, cmi = 0;
  ASSERT_EQ(cit_distribution_ci_proxy(d, &proxy), CIT_OK);
  ASSERT_EQ(cit_distribution_cmi(d, &cmi), CIT_OK);
  EXPECT_GT(proxy, 0.0);
  char* meta = nullptr;
  ASSERT_EQ(cit_distribution_metadata_json(d, &meta), CIT_OK);
  const nlohmann::json j = nlohmann::json::parse(meta);
  cit_string_free(meta);
  EXPECT_EQ(j["family"], "no_binary_r1");
  EXPECT_DOUBLE_EQ(j["ci_proxy"].get<double>(), proxy);

  const std::string path = ::testing::TempDir() + "cit_capi_dist.txt";
  ASSERT_EQ(cit_distribution_save(d, path.c_str()), CIT_OK);
  cit_distribution* back = nullptr;
  ASSERT_EQ(cit_distribution_load(path.c_str(), &back), CIT_OK);
  double proxy_back = 0;
  ASSERT_EQ(cit_distribution_ci_proxy(back, &proxy_back), CIT_OK);
  EXPECT_DOUBLE_EQ(proxy_back, proxy);
  ASSERT_EQ(cit_distribution_metadata_json(back, &meta), CIT_OK);
  EXPECT_STREQ(meta, "{}");
  cit_string_free(meta);
  cit_distribution_free(back);
  cit_distribution_free(d);
  std::remove(path.c_str());
}

TEST(CApiTest, ErrorCodesMapThrough) {
  cit_generate_params p;
  cit_generate_params_init(&p);
  p.family = "not_a_family";
  cit_distribution* d = nullptr;
  EXPECT_EQ(cit_distribution_generate(&p, &d), CIT_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(d, nullptr);
  EXPECT_EQ(cit_distribution_load("/nonexistent/file", &d), CIT_ERR_IO);
  EXPECT_EQ(cit_power_run("/nonexistent/plan", nullptr, 0, nullptr), CIT_ERR_IO);
}

TEST(CApiTest, SamplesAndTester) {
  cit_distribution* d = Generate("random_ci", 10, 1);
  cit_samples* s = nullptr;
  ASSERT_EQ(cit_samples_draw_fixed(d, 200, 7, &s), CIT_OK);
  uint64_t count = 0;
  ASSERT_EQ(cit_samples_count(s, &count), CIT_OK);
  EXPECT_EQ(count, 200u);

  cit_tester_config cfg;
  cit_tester_config_init(&cfg);
  cfg.seed = 3;
  cit_verdict* v = nullptr;
  ASSERT_EQ(cit_test_samples(s, &cfg, &v), CIT_OK) << cit_last_error();
  EXPECT_EQ(cit_verdict_m_used(v), 200u);
  EXPECT_DOUBLE_EQ(cit_verdict_threshold(v), 2.0 * std::sqrt(10.0));
  double total = 0;
  for (size_t i = 0; i < cit_verdict_bin_count(v); ++i) {
    double a = 0;
    ASSERT_EQ(cit_verdict_bin(v, i, nullptr, nullptr, nullptr, &a), CIT_OK);
    total += a;
  }
  EXPECT_NEAR(total, cit_verdict_statistic(v), 1e-9);
  EXPECT_EQ(cit_verdict_bin(v, 1000, nullptr, nullptr, nullptr, nullptr),
            CIT_ERR_INVALID_ARGUMENT);
  char* js = nullptr;
  ASSERT_EQ(cit_verdict_to_json(v, &js), CIT_OK);
  const nlohmann::json j = nlohmann::json::parse(js);
  cit_string_free(js);
  EXPECT_EQ(j["mode"], "binary");
  EXPECT_EQ(j["accept"].get<bool>(), cit_verdict_accept(v) != 0);
  cit_verdict_free(v);

  cfg.has_m = 1;
  cfg.m = 500;
  EXPECT_EQ(cit_test_samples(s, &cfg, &v), CIT_ERR_INSUFFICIENT_SAMPLES);
  cit_samples_free(s);

  cfg.has_m = 0;
  ASSERT_EQ(cit_test_distribution(d, &cfg, &v), CIT_OK);
  cit_verdict_free(v);
  cit_distribution_free(d);
}

TEST(CApiTest, SampleComplexity) {
  uint64_t m = 0;
  ASSERT_EQ(cit_sample_complexity_binary(256, 2.0, 1.0, &m), CIT_ERR_INVALID_ARGUMENT);
  ASSERT_EQ(cit_sample_complexity_binary(256, 0.5, 2.0, &m), CIT_OK);
  EXPECT_GT(m, 0u);
  double full = 0, simplified = 0;
  ASSERT_EQ(cit_sample_complexity_general(100, 4, 4, 0.3, 2.0, &m, &full, &simplified),
            CIT_OK);
  EXPECT_EQ(m, static_cast<uint64_t>(std::ceil(full)));
}

TEST(CApiTest, CalibrateFamilyWithZeroSamples) {
  cit_generate_params p;
  cit_generate_params_init(&p);
  cit_tester_config cfg;
  cit_tester_config_init(&cfg);
  cfg.has_m = 1;
  cfg.m = 0;
  double tau = -1;
  ASSERT_EQ(cit_calibrate_family(&p, &cfg, 100, &tau), CIT_OK);
  EXPECT_EQ(tau, 1e-9);
  EXPECT_EQ(cit_calibrate_family(&p, &cfg, 10, &tau), CIT_ERR_INVALID_ARGUMENT);
}

TEST(CApiTest, PolyEstimateAndFlatten) {
  char* exact = nullptr;
  double value = 0;
  ASSERT_EQ(cit_poly_estimate("1 : 1 2", 2, 0, "1:2 2:1", &exact, &value), CIT_OK);
  EXPECT_STREQ(exact, "1/3");
  cit_string_free(exact);
  ASSERT_EQ(cit_poly_estimate("1 : 1", 2, 0, "1:1 2:1", &exact, &value), CIT_OK);
  EXPECT_STREQ(exact, "1/2");
  cit_string_free(exact);
  EXPECT_EQ(cit_poly_estimate("1 : 1 2", 2, 0, "1:1", &exact, &value),
            CIT_ERR_INSUFFICIENT_SAMPLES);
  EXPECT_EQ(cit_poly_estimate("1 : 9", 2, 0, "1:1", &exact, &value), CIT_ERR_PARSE);

  const uint32_t xs[] = {0, 0}, ys[] = {0, 0};
  char* csv = nullptr;
  ASSERT_EQ(cit_flatten_grid_csv(xs, ys, 2, 2, 3, 1, 1, &csv), CIT_OK);
  EXPECT_STREQ(csv, "3,1,1\n1,0,0\n");
  cit_string_free(csv);
}

}  // namespace
