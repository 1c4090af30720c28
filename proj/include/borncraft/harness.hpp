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

/**
 * @file
 * Seeded Monte Carlo experiment runner.
 *
 * An experiment is a name, a parameter grid and a trial count. The grid is a
 * JSON object whose values are scalars, arrays of scalars, or inclusive
 * integer ranges written {"range": [lo, hi]}; points are the cartesian
 * product in key order. Trial t of point p draws all randomness from
 * Rng::stream(seed, {p, t}), so results do not depend on how trials are
 * scheduled across threads.
 *
 * Registered experiments and their parameters (defaults in brackets):
 *
 *   recovery-curve  n [16], m [8], k [12]
 *       closure learner on a fresh random affine subspace per trial.
 *   t-noise         k [6], routed [1]
 *       exact flip rate of the single-T parity circuit for a random secret.
 *   parity-tv       k [5], exhaustive [0]
 *       TV between two distinct noiseless parity distributions; with
 *       exhaustive = 1 every unordered pair is checked once and the trial
 *       count is C(2^k, 2).
 *   sq-vs-sample    k [16], learner ["sq"], budget [1000], tau [0.1],
 *                   mode ["adversarial"], delta [0.0625]
 *       correlation-query learner or closure learner against P_s.
 *   opnorm-tv       n [4], depth [8]
 *       random circuit C versus C followed by one random gate; success when
 *       TV(P_C, P_C') <= ||U - W||_op.
 */

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ctime>
#include <exception>
#include <functional>
#include <iomanip>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "borncraft/circuit.hpp"
#include "borncraft/dist.hpp"
#include "borncraft/errors.hpp"
#include "borncraft/learn.hpp"
#include "borncraft/oracle.hpp"
#include "borncraft/rng.hpp"
#include "borncraft/statevector.hpp"

namespace borncraft {

inline constexpr const char *kToolVersion = "borncraft 0.1.0";

/// Two-sided 95% normal quantile.
inline constexpr double kWilsonZ95 = 1.959963984540054;

struct Interval {
    double lo;
    double hi;
};

/// Wilson score interval for `successes` out of `trials`.
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kWilsonZ95) {
    if (trials == 0) {
        return {0.0, 1.0};
    }
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2 * n)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
    return {successes == 0 ? 0.0 : std::max(0.0, centre - half),
            successes == trials ? 1.0 : std::min(1.0, centre + half)};
}

struct ExperimentSpec {
    std::string name;
    nlohmann::json grid = nlohmann::json::object();
    std::uint64_t trials = 100;
    std::uint64_t seed = 0;
};

struct TrialOutcome {
    bool success = false;
    double tv = 0.0;
    std::uint64_t queries = 0;
    double aux = 0.0;
};

struct PointResult {
    nlohmann::json params;
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double success_rate = 0.0;
    Interval ci{0.0, 1.0};
    double mean_tv = 0.0;
    double queries = 0.0;
    nlohmann::json extra = nlohmann::json::object();
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<PointResult> points;
};

struct RunOptions {
    /// Worker threads; 0 selects the hardware concurrency.
    unsigned threads = 0;
};

namespace detail {

inline std::uint64_t choose2(std::uint64_t n) { return n * (n - 1) / 2; }

inline std::int64_t int_param(const nlohmann::json &p, const char *key) {
    const auto &v = p.at(key);
    if (!v.is_number_integer() && !(v.is_number_float() && std::floor(v.get<double>()) == v.get<double>())) {
        throw ParseError(std::string("parameter '") + key + "' must be an integer");
    }
    return v.is_number_integer() ? v.get<std::int64_t>() : static_cast<std::int64_t>(v.get<double>());
}

inline std::size_t count_param(const nlohmann::json &p, const char *key) {
    const auto v = int_param(p, key);
    if (v < 0) {
        throw ParseError(std::string("parameter '") + key + "' must be non-negative");
    }
    return static_cast<std::size_t>(v);
}

inline double real_param(const nlohmann::json &p, const char *key) {
    const auto &v = p.at(key);
    if (!v.is_number()) {
        throw ParseError(std::string("parameter '") + key + "' must be a number");
    }
    return v.get<double>();
}

inline std::string string_param(const nlohmann::json &p, const char *key) {
    const auto &v = p.at(key);
    if (!v.is_string()) {
        throw ParseError(std::string("parameter '") + key + "' must be a string");
    }
    return v.get<std::string>();
}

inline void infeasible(const std::string &msg) { throw Infeasible(msg); }

inline void bad(const std::string &msg) { throw std::invalid_argument(msg); }

/// A registered experiment: defaults, a feasibility check that also fixes
/// the number of trials at a point, and the per-trial body.
struct Experiment {
    nlohmann::json defaults;
    std::function<std::uint64_t(const nlohmann::json &, std::uint64_t)> trials_at;
    std::function<TrialOutcome(const nlohmann::json &, std::uint64_t, Rng &)> trial;
    std::function<void(const nlohmann::json &, PointResult &, const std::vector<TrialOutcome> &)> summarize;
};

inline TrialOutcome recovery_trial(const nlohmann::json &p, std::uint64_t, Rng &rng) {
    const std::size_t n = count_param(p, "n");
    const std::size_t m = count_param(p, "m");
    const std::size_t k = count_param(p, "k");
    std::vector<BitVec> basis;
    EchelonBasis eb(n);
    while (basis.size() < m) {
        BitVec v = rng.bits(n);
        if (eb.insert(v)) {
            basis.push_back(std::move(v));
        }
    }
    const Dist truth = Dist::affine_uniform(AffineSubspace(std::move(basis), rng.bits(n)));
    SampleOracle oracle(truth, Rng(rng()));
    const LearnedAffine learned = closure_learn_k(oracle, n, k);
    TrialOutcome out;
    out.success = learned.m == m;
    out.tv = tv(learned.to_dist(), truth);
    out.queries = oracle.queries();
    return out;
}

inline TrialOutcome t_noise_trial(const nlohmann::json &p, std::uint64_t, Rng &rng) {
    const std::size_t k = count_param(p, "k");
    const BitVec s = rng.bits(k);
    Circuit c = parity_circuit(s, true);
    if (int_param(p, "routed") != 0) {
        c = route_nearest_neighbor(c);
    }
    const DenseDist d = sv_distribution(c);
    const double eta = std::sin(std::numbers::pi / 8) * std::sin(std::numbers::pi / 8);
    const Dist target = Dist::noisy_parity(s, eta);
    double flip = 0.0;
    double diff = 0.0;
    for (std::size_t i = 0; i < d.probs.size(); ++i) {
        const BitVec z = BitVec::from_index(i, k + 1);
        if (z.get(k) != s.dot(z.slice(0, k))) {
            flip += d.probs[i];
        }
        diff += std::abs(d.probs[i] - target.eval(z));
    }
    TrialOutcome out;
    out.tv = 0.5 * diff;
    out.aux = flip;
    out.success = std::abs(flip - eta) <= 1e-12 && out.tv <= 1e-12;
    return out;
}

inline TrialOutcome parity_tv_trial(const nlohmann::json &p, std::uint64_t trial, Rng &rng) {
    const std::size_t k = count_param(p, "k");
    BitVec s(k);
    BitVec t(k);
    if (int_param(p, "exhaustive") != 0) {
        // Unrank trial as the pair (i, j), i < j, in row-major order.
        const std::uint64_t size = std::uint64_t{1} << k;
        std::uint64_t i = 0;
        std::uint64_t left = trial;
        while (left >= size - 1 - i) {
            left -= size - 1 - i;
            ++i;
        }
        s = BitVec::from_index(i, k);
        t = BitVec::from_index(i + 1 + left, k);
    } else {
        s = rng.bits(k);
        do {
            t = rng.bits(k);
        } while (t == s);
    }
    TrialOutcome out;
    out.tv = tv(Dist::parity(s), Dist::parity(t));
    out.success = out.tv == 0.5 && tv(Dist::parity(s), Dist::parity(s)) == 0.0;
    return out;
}

inline StatMode parse_mode(const std::string &mode) {
    if (mode == "exact") {
        return StatMode::exact;
    }
    if (mode == "empirical") {
        return StatMode::empirical;
    }
    if (mode == "adversarial") {
        return StatMode::adversarial;
    }
    bad("unknown statistical query mode '" + mode + "'");
    return StatMode::exact;
}

inline TrialOutcome sq_vs_sample_trial(const nlohmann::json &p, std::uint64_t, Rng &rng) {
    const std::size_t k = count_param(p, "k");
    const BitVec s = rng.bits(k);
    const Dist truth = Dist::parity(s);
    TrialOutcome out;
    if (string_param(p, "learner") == "sq") {
        StatOracleConfig cfg;
        cfg.tau = real_param(p, "tau");
        cfg.mode = parse_mode(string_param(p, "mode"));
        cfg.query_budget = std::max<std::uint64_t>(1, count_param(p, "budget"));
        cfg.seed = rng();
        StatOracle oracle(truth, cfg);
        Rng order = Rng(rng());
        const auto guess = sq_correlation_learner(oracle, k, count_param(p, "budget"), order);
        out.success = guess && *guess == s;
        // No hypothesis counts as maximally far.
        out.tv = guess ? tv(Dist::parity(*guess), truth) : 1.0;
        out.queries = oracle.queries();
    } else {
        SampleOracle oracle(truth, Rng(rng()));
        const LearnedAffine learned = closure_learn(oracle, k + 1, real_param(p, "delta"));
        out.success = learned.m == k;
        out.tv = tv(learned.to_dist(), truth);
        out.queries = oracle.queries();
    }
    return out;
}

inline TrialOutcome opnorm_tv_trial(const nlohmann::json &p, std::uint64_t, Rng &rng) {
    const std::size_t n = count_param(p, "n");
    const RandomCircuitOptions opts{false, true, true};
    const Circuit base = random_circuit(n, count_param(p, "depth"), rng, opts);
    Circuit extended = base;
    extended.append(random_circuit(n, 1, rng, opts).gates().front());
    const OpnormTv r = opnorm_tv_check(base, extended);
    TrialOutcome out;
    out.tv = r.tv;
    out.aux = r.opnorm;
    out.success = r.tv <= r.opnorm;
    return out;
}

inline const std::map<std::string, Experiment> &registry() {
    static const std::map<std::string, Experiment> reg = [] {
        std::map<std::string, Experiment> r;
        r["recovery-curve"] = Experiment{
            {{"n", 16}, {"m", 8}, {"k", 12}},
            [](const nlohmann::json &p, std::uint64_t trials) {
                const auto n = count_param(p, "n");
                const auto m = count_param(p, "m");
                const auto k = count_param(p, "k");
                if (n == 0 || n > 4096 || m > n || k == 0) {
                    infeasible("recovery-curve needs 1 <= n <= 4096, m <= n and k >= 1");
                }
                return trials;
            },
            recovery_trial,
            [](const nlohmann::json &p, PointResult &pr, const std::vector<TrialOutcome> &outs) {
                const auto m = static_cast<int>(count_param(p, "m"));
                const auto k = static_cast<int>(count_param(p, "k"));
                double worst = 0.0;
                for (const auto &o : outs) {
                    if (o.success) {
                        worst = std::max(worst, o.tv);
                    }
                }
                pr.extra["bound"] = std::max(0.0, 1.0 - std::ldexp(1.0, m - k));
                pr.extra["max_tv_on_success"] = worst;
            }};
        r["t-noise"] = Experiment{
            {{"k", 6}, {"routed", 1}},
            [](const nlohmann::json &p, std::uint64_t trials) {
                const auto k = count_param(p, "k");
                (void)int_param(p, "routed");
                if (k == 0 || k + 1 > kMaxStatevectorQubits) {
                    infeasible("t-noise needs 1 <= k <= " + std::to_string(kMaxStatevectorQubits - 1));
                }
                return trials;
            },
            t_noise_trial,
            [](const nlohmann::json &, PointResult &pr, const std::vector<TrialOutcome> &outs) {
                double max_err = 0.0;
                const double eta = std::sin(std::numbers::pi / 8) * std::sin(std::numbers::pi / 8);
                for (const auto &o : outs) {
                    max_err = std::max(max_err, std::abs(o.aux - eta));
                }
                pr.extra["eta"] = eta;
                pr.extra["max_flip_error"] = max_err;
            }};
        r["parity-tv"] = Experiment{
            {{"k", 5}, {"exhaustive", 0}},
            [](const nlohmann::json &p, std::uint64_t trials) -> std::uint64_t {
                const auto k = count_param(p, "k");
                if (k == 0 || k > 62) {
                    infeasible("parity-tv needs 1 <= k <= 62");
                }
                if (int_param(p, "exhaustive") != 0) {
                    if (k > 12) {
                        infeasible("parity-tv exhaustive mode needs k <= 12");
                    }
                    return choose2(std::uint64_t{1} << k);
                }
                return trials;
            },
            parity_tv_trial,
            [](const nlohmann::json &, PointResult &, const std::vector<TrialOutcome> &) {}};
        r["sq-vs-sample"] = Experiment{
            {{"k", 16}, {"learner", "sq"}, {"budget", 1000}, {"tau", 0.1}, {"mode", "adversarial"}, {"delta", 0.0625}},
            [](const nlohmann::json &p, std::uint64_t trials) {
                const auto k = count_param(p, "k");
                const auto learner = string_param(p, "learner");
                (void)count_param(p, "budget");
                const double tau = real_param(p, "tau");
                const double delta = real_param(p, "delta");
                (void)parse_mode(string_param(p, "mode"));
                if (learner != "sq" && learner != "sample") {
                    bad("sq-vs-sample: learner must be 'sq' or 'sample'");
                }
                if (!(tau > 0 && tau < 1) || !(delta > 0 && delta < 1)) {
                    bad("sq-vs-sample: tau and delta must lie in (0, 1)");
                }
                if (k == 0 || k > 62) {
                    infeasible("sq-vs-sample needs 1 <= k <= 62");
                }
                if (learner == "sq" && string_param(p, "mode") == "empirical" && k + 1 > kMaxDenseBits) {
                    infeasible("sq-vs-sample: empirical mode is limited to k < 20");
                }
                return trials;
            },
            sq_vs_sample_trial,
            [](const nlohmann::json &p, PointResult &pr, const std::vector<TrialOutcome> &) {
                if (string_param(p, "learner") == "sq") {
                    const auto k = static_cast<int>(count_param(p, "k"));
                    pr.extra["prefix_probability"] =
                        std::min(1.0, static_cast<double>(count_param(p, "budget")) * std::ldexp(1.0, -k));
                }
            }};
        r["opnorm-tv"] = Experiment{
            {{"n", 4}, {"depth", 8}},
            [](const nlohmann::json &p, std::uint64_t trials) {
                const auto n = count_param(p, "n");
                (void)count_param(p, "depth");
                if (n == 0 || n > kMaxUnitaryQubits) {
                    infeasible("opnorm-tv needs 1 <= n <= " + std::to_string(kMaxUnitaryQubits));
                }
                return trials;
            },
            opnorm_tv_trial,
            [](const nlohmann::json &, PointResult &pr, const std::vector<TrialOutcome> &outs) {
                double s = 0.0;
                for (const auto &o : outs) {
                    s += o.aux;
                }
                pr.extra["mean_opnorm"] = outs.empty() ? 0.0 : s / static_cast<double>(outs.size());
            }};
        return r;
    }();
    return reg;
}

inline std::vector<nlohmann::json> expand_values(const std::string &key, const nlohmann::json &v) {
    std::vector<nlohmann::json> out;
    if (v.is_array()) {
        if (v.empty()) {
            throw ParseError("grid entry '" + key + "' is an empty list");
        }
        for (const auto &x : v) {
            if (x.is_structured()) {
                throw ParseError("grid entry '" + key + "' must list scalars");
            }
            out.push_back(x);
        }
    } else if (v.is_object()) {
        if (!v.contains("range") || v.size() != 1 || !v["range"].is_array() || v["range"].size() != 2 ||
            !v["range"][0].is_number_integer() || !v["range"][1].is_number_integer()) {
            throw ParseError("grid entry '" + key + "' must be {\"range\": [lo, hi]}");
        }
        const auto lo = v["range"][0].get<std::int64_t>();
        const auto hi = v["range"][1].get<std::int64_t>();
        if (hi < lo || hi - lo > 100000) {
            throw ParseError("grid entry '" + key + "' has an invalid range");
        }
        for (auto i = lo; i <= hi; ++i) {
            out.emplace_back(i);
        }
    } else {
        out.push_back(v);
    }
    return out;
}

} // namespace detail

inline std::vector<std::string> experiment_names() {
    std::vector<std::string> out;
    for (const auto &[name, _] : detail::registry()) {
        out.push_back(name);
    }
    return out;
}

/// Parameter points of the grid, defaults filled in, in cartesian key order.
inline std::vector<nlohmann::json> expand_grid(const std::string &experiment, const nlohmann::json &grid) {
    const auto &reg = detail::registry();
    const auto it = reg.find(experiment);
    if (it == reg.end()) {
        throw std::invalid_argument("unknown experiment '" + experiment + "'");
    }
    if (!grid.is_object()) {
        throw ParseError("grid must be a JSON object");
    }
    for (const auto &[key, _] : grid.items()) {
        if (!it->second.defaults.contains(key)) {
            throw ParseError("experiment '" + experiment + "' has no parameter '" + key + "'");
        }
    }
    std::vector<nlohmann::json> points{nlohmann::json::object()};
    for (const auto &[key, def] : it->second.defaults.items()) {
        const auto values = detail::expand_values(key, grid.contains(key) ? grid.at(key) : def);
        std::vector<nlohmann::json> next;
        for (const auto &pt : points) {
            for (const auto &v : values) {
                nlohmann::json q = pt;
                q[key] = v;
                next.push_back(std::move(q));
            }
        }
        points = std::move(next);
    }
    return points;
}

inline ExperimentResult run(const ExperimentSpec &spec, const RunOptions &opts = {}) {
    const auto points = expand_grid(spec.name, spec.grid);
    const auto &exp = detail::registry().at(spec.name);
    std::vector<std::uint64_t> trial_counts;
    for (const auto &p : points) {
        trial_counts.push_back(exp.trials_at(p, spec.trials));
    }

    ExperimentResult result{spec, {}};
    unsigned threads = opts.threads != 0 ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    for (std::size_t pi = 0; pi < points.size(); ++pi) {
        const auto &params = points[pi];
        const std::uint64_t trials = trial_counts[pi];
        std::vector<TrialOutcome> outcomes(trials);
        std::atomic<std::uint64_t> next{0};
        std::exception_ptr error;
        std::mutex error_mu;
        auto worker = [&] {
            for (std::uint64_t t = next++; t < trials; t = next++) {
                try {
                    Rng rng = Rng::stream(spec.seed, {pi, t});
                    outcomes[t] = exp.trial(params, t, rng);
                } catch (...) {
                    std::lock_guard lock(error_mu);
                    if (!error) {
                        error = std::current_exception();
                    }
                    next = trials;
                }
            }
        };
        const unsigned used = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(trials, 1)));
        if (used <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < used; ++w) {
                pool.emplace_back(worker);
            }
            for (auto &th : pool) {
                th.join();
            }
        }
        if (error) {
            std::rethrow_exception(error);
        }

        PointResult pr;
        pr.params = params;
        pr.trials = trials;
        double tv_sum = 0.0;
        double query_sum = 0.0;
        for (const auto &o : outcomes) {
            pr.successes += o.success ? 1 : 0;
            tv_sum += o.tv;
            query_sum += static_cast<double>(o.queries);
        }
        if (trials > 0) {
            pr.success_rate = static_cast<double>(pr.successes) / static_cast<double>(trials);
            pr.mean_tv = tv_sum / static_cast<double>(trials);
            pr.queries = query_sum / static_cast<double>(trials);
        }
        pr.ci = wilson_interval(pr.successes, trials);
        exp.summarize(params, pr, outcomes);
        result.points.push_back(std::move(pr));
    }
    return result;
}

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

/// result_v1 document. The "timestamp" member is the only field that varies
/// between runs of the same spec and seed.
inline nlohmann::json to_json(const ExperimentResult &r, bool with_timestamp = true) {
    nlohmann::json doc;
    doc["schema"] = "result_v1";
    doc["experiment"] = r.spec.name;
    doc["spec"] = {{"grid", r.spec.grid}, {"trials", r.spec.trials}};
    doc["seed"] = r.spec.seed;
    doc["tool_version"] = kToolVersion;
    if (with_timestamp) {
        doc["timestamp"] = utc_timestamp();
    }
    doc["points"] = nlohmann::json::array();
    for (const auto &p : r.points) {
        nlohmann::json j;
        j["params"] = p.params;
        j["trials"] = p.trials;
        j["successes"] = p.successes;
        j["success_rate"] = p.success_rate;
        j["ci_lo"] = p.ci.lo;
        j["ci_hi"] = p.ci.hi;
        j["mean_tv"] = p.mean_tv;
        j["queries"] = p.queries;
        for (const auto &[k, v] : p.extra.items()) {
            j[k] = v;
        }
        doc["points"].push_back(std::move(j));
    }
    return doc;
}

inline std::string format_double(double v) {
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

/// One row per grid point; parameter columns first, in key order.
inline std::string to_csv(const ExperimentResult &r) {
    std::ostringstream out;
    std::vector<std::string> keys;
    if (!r.points.empty()) {
        for (const auto &[k, _] : r.points.front().params.items()) {
            keys.push_back(k);
        }
    }
    out << "experiment,seed";
    for (const auto &k : keys) {
        out << ',' << k;
    }
    out << ",trials,successes,success_rate,ci_lo,ci_hi,mean_tv,queries\n";
    for (const auto &p : r.points) {
        out << r.spec.name << ',' << r.spec.seed;
        for (const auto &k : keys) {
            const auto &v = p.params.at(k);
            out << ',' << (v.is_string() ? v.get<std::string>() : v.dump());
        }
        out << ',' << p.trials << ',' << p.successes << ',' << format_double(p.success_rate) << ','
            << format_double(p.ci.lo) << ',' << format_double(p.ci.hi) << ',' << format_double(p.mean_tv) << ','
            << format_double(p.queries) << '\n';
    }
    return out.str();
}

} // namespace borncraft
