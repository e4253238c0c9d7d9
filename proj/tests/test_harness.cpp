// Copyright 2026 The logdepth Authors
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

#include "oracles.hpp"

using namespace logdepth;

namespace {

SuiteConfig cfg(const std::string& suite, std::size_t trials, std::uint64_t seed = 7) {
  SuiteConfig c;
  c.suite = suite;
  c.trials = trials;
  c.seed = seed;
  return c;
}

TEST(Harness, UnknownSuiteListsValidNames) {
  try {
    run_suite(cfg("nope", 1));
    FAIL() << "expected Error";
  } catch (const Error& e) {
    const std::string msg = e.what();
    for (const auto& n : suite_names()) EXPECT_NE(msg.find(n), std::string::npos) << n;
  }
}

TEST(Harness, RegistryHasEverySuite) {
  const auto names = suite_names();
  for (const char* n : {"lemma1", "fvdg", "completeness", "slicing", "soundness", "failprob", "mult", "depth",
                        "amplify", "gadgets", "selection"}) {
    EXPECT_NE(std::find(names.begin(), names.end(), n), names.end()) << n;
  }
}

TEST(Harness, DensityCapAboveLimitIsRejected) {
  SuiteConfig c = cfg("lemma1", 1);
  c.max_density_qubits = kMaxDensityWidth + 1;
  EXPECT_THROW(run_suite(c), Error);
}

TEST(Harness, TinyCapIsReported) {
  SuiteConfig c = cfg("gadgets", 1);
  c.max_density_qubits = 1;
  EXPECT_THROW(run_suite(c), Error);
}

TEST(Harness, PayloadIsDeterministic) {
  for (const char* s : {"lemma1", "fvdg", "gadgets", "failprob"}) {
    const json a = report_payload(run_suite(cfg(s, 3, 99)));
    const json b = report_payload(run_suite(cfg(s, 3, 99)));
    EXPECT_EQ(a.dump(), b.dump()) << s;
    const json c = report_payload(run_suite(cfg(s, 3, 100)));
    if (std::string(s) != "gadgets") {
      EXPECT_NE(a.dump(), c.dump()) << s;
    }
  }
}

TEST(Harness, Lemma1PassesWithSeedSeven) {
  const auto rep = run_suite(cfg("lemma1", 20));
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.trials.size(), 20u);
  EXPECT_GE(rep.worst_slack(), -1e-9);
}

TEST(Harness, ReportShape) {
  const auto rep = run_suite(cfg("fvdg", 2));
  const json j = report_to_json(rep);
  ASSERT_TRUE(j.contains("payload"));
  ASSERT_TRUE(j.contains("wall_time_s"));
  const json& p = j["payload"];
  for (const char* k : {"suite", "statement", "constants", "seed", "tolerance", "trials", "summary", "pass"}) {
    EXPECT_TRUE(p.contains(k)) << k;
  }
  EXPECT_EQ(p["trials"].size(), 2u);
  EXPECT_FALSE(p.contains("wall_time_s"));
}

TEST(Harness, RandomCircuitIsValid) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    Rng rng(mix_seed(5, s));
    const std::size_t w = 1 + rng.below(5), h = 1 + rng.below(w), k = 1 + rng.below(w);
    const std::size_t n = rng.below(10);
    const Circuit c = random_circuit(w, h, k, n, rng);
    EXPECT_TRUE(validate(c).ok()) << validate(c).summary();
    EXPECT_EQ(c.inputs().size(), h);
    EXPECT_EQ(c.outputs().size(), k);
    EXPECT_EQ(c.gate_count(), n);
    EXPECT_TRUE(c.is_normalized());
  }
}

TEST(Harness, SmallSuitesPass) {
  for (const char* s : {"selection", "slicing", "gadgets", "failprob", "completeness"}) {
    const auto rep = run_suite(cfg(s, 3));
    EXPECT_TRUE(rep.pass) << s << " worst slack " << rep.worst_slack();
  }
}

TEST(Harness, DepthSuitePasses) {
  const auto rep = run_suite(cfg("depth", 0));
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.trials.size(), 10u);
}

}  // namespace
