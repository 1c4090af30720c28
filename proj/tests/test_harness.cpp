// Copyright 2026 The borncraft Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <numbers>

#include "borncraft/harness.hpp"

using namespace borncraft;

namespace {

std::string stable_dump(const ExperimentResult &r) { return to_json(r, false).dump(2); }

} // namespace

TEST(Wilson, KnownValues) {
    // 8 of 10 at z = 1.96: (0.4902, 0.9433) to four places.
    const auto ci = wilson_interval(8, 10);
    EXPECT_NEAR(ci.lo, 0.4901624, 1e-6);
    EXPECT_NEAR(ci.hi, 0.9433178, 1e-6);
    EXPECT_EQ(wilson_interval(10, 10).hi, 1.0);
    EXPECT_EQ(wilson_interval(0, 10).lo, 0.0);
    const auto empty = wilson_interval(0, 0);
    EXPECT_EQ(empty.lo, 0.0);
    EXPECT_EQ(empty.hi, 1.0);
}

TEST(Wilson, ContainsPointEstimate) {
    for (std::uint64_t n : {1u, 7u, 100u, 10000u}) {
        for (std::uint64_t s = 0; s <= n; s += std::max<std::uint64_t>(1, n / 13)) {
            const auto ci = wilson_interval(s, n);
            const double p = static_cast<double>(s) / static_cast<double>(n);
            EXPECT_LE(ci.lo, p);
            EXPECT_GE(ci.hi, p);
            EXPECT_GE(ci.lo, 0.0);
            EXPECT_LE(ci.hi, 1.0);
        }
    }
}

TEST(Grid, ExpansionOrderAndDefaults) {
    const auto pts = expand_grid("recovery-curve", nlohmann::json::parse(R"({"k": {"range": [8, 10]}, "m": [4, 8]})"));
    ASSERT_EQ(pts.size(), 6u);
    EXPECT_EQ(pts[0].dump(), R"({"k":8,"m":4,"n":16})");
    EXPECT_EQ(pts[1].dump(), R"({"k":8,"m":8,"n":16})");
    EXPECT_EQ(pts[5].dump(), R"({"k":10,"m":8,"n":16})");
}

TEST(Grid, Errors) {
    EXPECT_THROW(expand_grid("nope", nlohmann::json::object()), std::invalid_argument);
    EXPECT_THROW(expand_grid("t-noise", nlohmann::json::parse(R"({"x": 1})")), ParseError);
    EXPECT_THROW(expand_grid("t-noise", nlohmann::json::parse(R"({"k": []})")), ParseError);
    EXPECT_THROW(expand_grid("t-noise", nlohmann::json::parse(R"({"k": {"range": [3]}})")), ParseError);
    EXPECT_THROW(expand_grid("t-noise", nlohmann::json::parse("[1]")), ParseError);
    EXPECT_THROW(run({"t-noise", nlohmann::json::parse(R"({"k": 40})"), 1, 0}), Infeasible);
    EXPECT_THROW(run({"opnorm-tv", nlohmann::json::parse(R"({"n": 11})"), 1, 0}), Infeasible);
    EXPECT_THROW(run({"recovery-curve", nlohmann::json::parse(R"({"n": 4, "m": 5})"), 1, 0}), Infeasible);
    EXPECT_THROW(run({"sq-vs-sample", nlohmann::json::parse(R"({"learner": "magic"})"), 1, 0}), std::invalid_argument);
    EXPECT_THROW(run({"recovery-curve", nlohmann::json::parse(R"({"n": "x"})"), 1, 0}), ParseError);
}

TEST(Run, TrialCountsAndRates) {
    const auto r = run({"recovery-curve", nlohmann::json::parse(R"({"n": 10, "m": 3, "k": [2, 20]})"), 200, 5});
    ASSERT_EQ(r.points.size(), 2u);
    for (const auto &p : r.points) {
        EXPECT_EQ(p.trials, 200u);
        EXPECT_GE(p.success_rate, 0.0);
        EXPECT_LE(p.success_rate, 1.0);
        EXPECT_LE(p.ci.lo, p.success_rate);
        EXPECT_GE(p.ci.hi, p.success_rate);
        EXPECT_EQ(p.queries, static_cast<double>(p.params.at("k").get<int>()));
    }
    // Two samples give one direction: never enough for m = 3.
    EXPECT_EQ(r.points[0].successes, 0u);
    EXPECT_GT(r.points[0].mean_tv, 0.0);
    EXPECT_EQ(r.points[1].successes, 200u);
    EXPECT_EQ(r.points[1].mean_tv, 0.0);
}

TEST(Run, TNoiseIsExact) {
    const auto r = run({"t-noise", nlohmann::json::parse(R"({"k": [1, 6], "routed": [0, 1]})"), 20, 1});
    ASSERT_EQ(r.points.size(), 4u);
    for (const auto &p : r.points) {
        EXPECT_EQ(p.successes, p.trials);
        EXPECT_LE(p.extra.at("max_flip_error").get<double>(), 1e-12);
        EXPECT_DOUBLE_EQ(p.extra.at("eta").get<double>(), std::pow(std::sin(std::numbers::pi / 8), 2));
    }
}

TEST(Run, ParityTvExhaustiveCoversAllPairs) {
    const auto r = run({"parity-tv", nlohmann::json::parse(R"({"k": 5, "exhaustive": 1})"), 3, 0});
    ASSERT_EQ(r.points.size(), 1u);
    EXPECT_EQ(r.points[0].trials, 496u);
    EXPECT_EQ(r.points[0].successes, 496u);
    EXPECT_EQ(r.points[0].mean_tv, 0.5);
}

TEST(Run, SqVersusSample) {
    const auto r = run({"sq-vs-sample",
                        nlohmann::json::parse(R"({"k": 10, "budget": 64, "learner": ["sample", "sq"]})"), 300, 2});
    ASSERT_EQ(r.points.size(), 2u);
    const auto &sample = r.points[0];
    const auto &sq = r.points[1];
    EXPECT_EQ(sample.params.at("learner"), "sample");
    EXPECT_GT(sample.success_rate, 0.85);
    EXPECT_EQ(sample.queries, 15.0);
    EXPECT_LT(sq.success_rate, 0.15);
    EXPECT_LE(sq.queries, 64.0);
    EXPECT_DOUBLE_EQ(sq.extra.at("prefix_probability").get<double>(), 64.0 / 1024.0);
}

TEST(Run, OpnormBoundHolds) {
    const auto r = run({"opnorm-tv", nlohmann::json::parse(R"({"n": [1, 3, 5], "depth": 6})"), 40, 3});
    for (const auto &p : r.points) {
        EXPECT_EQ(p.successes, p.trials);
        EXPECT_LE(p.mean_tv, p.extra.at("mean_opnorm").get<double>());
    }
}

TEST(Reproducibility, ByteIdenticalAcrossRunsAndThreadCounts) {
    const ExperimentSpec spec{"recovery-curve", nlohmann::json::parse(R"({"n": 12, "m": [4, 6], "k": [6, 9]})"), 150,
                              42};
    const std::string serial = stable_dump(run(spec, {1}));
    EXPECT_EQ(stable_dump(run(spec, {1})), serial);
    EXPECT_EQ(stable_dump(run(spec, {4})), serial);
    EXPECT_EQ(stable_dump(run(spec, {7})), serial);

    ExperimentSpec other = spec;
    other.seed = 43;
    EXPECT_NE(stable_dump(run(other, {1})), serial);
}

TEST(Reproducibility, EveryExperimentIsDeterministic) {
    for (const auto &name : experiment_names()) {
        nlohmann::json grid = nlohmann::json::object();
        if (name == "sq-vs-sample") {
            grid = {{"k", 8}, {"budget", 20}, {"learner", {"sq", "sample"}}, {"mode", {"adversarial", "empirical"}}};
        } else if (name == "recovery-curve") {
            grid = {{"n", 8}, {"m", 4}, {"k", 6}};
        } else if (name == "t-noise") {
            grid = {{"k", 3}};
        }
        const ExperimentSpec spec{name, grid, 25, 9};
        EXPECT_EQ(stable_dump(run(spec, {1})), stable_dump(run(spec, {3}))) << name;
    }
}

TEST(Output, SchemaAndTimestamp) {
    const auto r = run({"parity-tv", nlohmann::json::parse(R"({"k": 3})"), 10, 5});
    const auto doc = to_json(r);
    EXPECT_EQ(doc.at("schema"), "result_v1");
    EXPECT_EQ(doc.at("experiment"), "parity-tv");
    EXPECT_EQ(doc.at("seed"), 5);
    EXPECT_EQ(doc.at("spec").at("trials"), 10);
    EXPECT_EQ(doc.at("tool_version"), kToolVersion);
    EXPECT_TRUE(doc.contains("timestamp"));
    EXPECT_FALSE(to_json(r, false).contains("timestamp"));
    const auto &pt = doc.at("points").at(0);
    for (const char *key : {"params", "success_rate", "ci_lo", "ci_hi", "mean_tv", "queries"}) {
        EXPECT_TRUE(pt.contains(key)) << key;
    }
}

TEST(Output, Csv) {
    const auto r = run({"parity-tv", nlohmann::json::parse(R"({"k": [2, 3]})"), 4, 5});
    const std::string csv = to_csv(r);
    EXPECT_EQ(csv.substr(0, csv.find('\n')),
              "experiment,seed,exhaustive,k,trials,successes,success_rate,ci_lo,ci_hi,mean_tv,queries");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
    EXPECT_NE(csv.find("parity-tv,5,0,2,4,4,1,"), std::string::npos);
}
