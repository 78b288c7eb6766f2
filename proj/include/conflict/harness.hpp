#pragma once

// Experiment plumbing: a trial is prune → iterate → finish → verify on one
// seed. Trials are independent and may run on several threads; results are
// merged by trial index so reports do not depend on scheduling.

#include "conflict/finisher.hpp"
#include "conflict/instance_io.hpp"
#include "conflict/procedure.hpp"
#include "conflict/trajectory.hpp"

#include "json.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <iomanip>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace conflict {

using nlohmann::json;

struct ExperimentConfig {
    std::string input;                ///< instance file
    std::optional<double> delta;      ///< default: max(3, max degree)
    double epsilon = 1.0;
    std::uint64_t seed = 1;
    std::size_t trials = 1;
    std::vector<std::uint64_t> seeds; ///< explicit list; overrides seed/trials
    Mode mode = Mode::adaptive;
    std::size_t max_iters = 1000;
    std::optional<std::size_t> budget; ///< finisher resamples
    std::size_t jobs = 1;
    std::string report;               ///< JSON report path
    std::string stats;                ///< CSV stats path

    std::vector<std::uint64_t> trial_seeds() const
    {
        if (!seeds.empty())
            return seeds;
        std::vector<std::uint64_t> out(trials);
        for (std::size_t i = 0; i < trials; ++i)
            out[i] = seed + i;
        return out;
    }
};

inline Mode parse_mode(const std::string & s)
{
    if (s == "theory")
        return Mode::theory;
    if (s == "adaptive")
        return Mode::adaptive;
    throw ParameterError("mode must be 'theory' or 'adaptive', got '" + s + "'");
}

inline json to_json(const ExperimentConfig & c)
{
    json j;
    j["input"] = c.input;
    j["delta"] = c.delta ? json(*c.delta) : json(nullptr);
    j["epsilon"] = c.epsilon;
    j["seed"] = c.seed;
    j["trials"] = c.trials;
    j["seeds"] = c.seeds;
    j["mode"] = to_string(c.mode);
    j["max_iters"] = c.max_iters;
    j["budget"] = c.budget ? json(*c.budget) : json(nullptr);
    j["jobs"] = c.jobs;
    j["report"] = c.report;
    j["stats"] = c.stats;
    return j;
}

inline ExperimentConfig config_from_json(const json & j)
{
    if (!j.is_object())
        throw ParameterError("config must be a JSON object");
    static const std::vector<std::string> known{
        "input", "delta", "epsilon", "seed", "trials", "seeds", "mode", "max_iters", "budget", "jobs", "report", "stats"};
    for (const auto & [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ParameterError("unknown config key '" + key + "'");
    ExperimentConfig c;
    try {
        if (j.contains("input"))
            c.input = j["input"].get<std::string>();
        if (j.contains("delta") && !j["delta"].is_null())
            c.delta = j["delta"].get<double>();
        if (j.contains("epsilon"))
            c.epsilon = j["epsilon"].get<double>();
        if (j.contains("seed"))
            c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("trials"))
            c.trials = j["trials"].get<std::size_t>();
        if (j.contains("seeds"))
            c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
        if (j.contains("mode"))
            c.mode = parse_mode(j["mode"].get<std::string>());
        if (j.contains("max_iters"))
            c.max_iters = j["max_iters"].get<std::size_t>();
        if (j.contains("budget") && !j["budget"].is_null())
            c.budget = j["budget"].get<std::size_t>();
        if (j.contains("jobs"))
            c.jobs = j["jobs"].get<std::size_t>();
        if (j.contains("report"))
            c.report = j["report"].get<std::string>();
        if (j.contains("stats"))
            c.stats = j["stats"].get<std::string>();
    }
    catch (const json::exception & e) {
        throw ParameterError(std::string("bad config value: ") + e.what());
    }
    return c;
}

/// FNV-1a over the compact JSON dump.
inline std::uint64_t fnv1a(const std::string & text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string config_hash(const ExperimentConfig & c)
{
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << fnv1a(to_json(c).dump());
    return out.str();
}

struct StatsRow {
    std::uint64_t seed;
    std::size_t i;
    std::size_t min_list, max_t, activations, assignments, uncolourings, flips, clamps, stuck_count;
};

struct TrialResult {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    Outcome outcome = Outcome::stuck;
    std::string reason;
    std::size_t iterations = 0;
    std::size_t pruned = 0;
    std::vector<StatsRow> rows;

    bool finisher_ran = false;
    std::size_t finisher_ell = 0;
    std::size_t finisher_worst_t = 0;
    bool finisher_condition = false;
    std::size_t resamples = 0;
    std::size_t resample_budget = 0;

    std::optional<Colouring> colouring;
    bool verified = false;
    bool success = false;
};

inline TheoryParams params_for(const InstanceBundle & b, const ExperimentConfig & c)
{
    const double delta = c.delta.value_or(std::max<double>(3, static_cast<double>(b.graph.max_degree())));
    return compute_params(delta, c.epsilon);
}

inline TrialResult run_trial(
    std::shared_ptr<const InstanceBundle> bundle, const ExperimentConfig & c, std::size_t index, std::uint64_t seed)
{
    TrialResult t;
    t.index = index;
    t.seed = seed;
    const auto params = params_for(*bundle, c);
    ProcedureConfig pc;
    pc.mode = c.mode;
    pc.max_iters = c.max_iters;
    auto run = run_procedure(bundle, params, seed, pc);
    const auto & s = run.state;
    t.outcome = run.outcome;
    t.reason = run.reason;
    t.iterations = s.iteration;
    t.pruned = s.prune.removed;
    for (const auto & st : s.stats) {
        if (st.p_violation)
            continue;
        t.rows.push_back({seed, st.iteration, st.min_list, st.max_t, st.activations, st.assignments,
            st.uncolourings, st.flips, st.clamps, st.stuck_count});
    }
    if (run.outcome != Outcome::ready_for_finisher)
        return t;

    Colouring result = s.colouring;
    const auto live = uncoloured_mask(s.colouring);
    if (std::find(live.begin(), live.end(), true) != live.end()) {
        std::size_t ell = SIZE_MAX;
        for (VertexId v = 0; v < live.size(); ++v)
            if (live[v])
                ell = std::min(ell, s.lists.size_of(v));
        t.finisher_ell = ell;
        const auto condition = check_reed(s.graph(), s.lists, s.colouring, ell);
        t.finisher_worst_t = condition.worst_t;
        t.finisher_condition = condition.satisfied;
        if (!condition.satisfied) {
            t.reason = "finisher condition fails";
            return t;
        }
        FinisherOptions fo;
        fo.max_resamples = c.budget;
        const auto fin = resample_colouring(s.graph(), s.lists, s.colouring, ell, seed, fo);
        t.finisher_ran = true;
        t.resamples = fin.resamples;
        t.resample_budget = fin.budget;
        if (!fin.colouring) {
            t.reason = "finisher budget exhausted";
            return t;
        }
        result = *fin.colouring;
    }
    t.verified = result.complete() && verify_colouring(bundle->graph, result) && respects_lists(bundle->lists, result);
    t.success = t.verified;
    if (!t.verified)
        t.reason = "verification failed";
    t.colouring = std::move(result);
    return t;
}

inline std::vector<TrialResult> run_experiment(std::shared_ptr<const InstanceBundle> bundle, const ExperimentConfig & c)
{
    const auto seeds = c.trial_seeds();
    std::vector<TrialResult> results(seeds.size());
    const auto workers = std::max<std::size_t>(1, std::min(c.jobs, seeds.size()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            const auto i = next.fetch_add(1);
            if (i >= seeds.size())
                return;
            try {
                results[i] = run_trial(bundle, c, i, seeds[i]);
            }
            catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    if (workers == 1)
        work();
    else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto & th : pool)
            th.join();
    }
    if (failure)
        std::rethrow_exception(failure);
    return results;
}

inline void write_stats_csv(std::ostream & out, const std::vector<TrialResult> & results)
{
    out << "seed,i,min_list,max_t,activations,assignments,uncolourings,flips,clamps,stuck_count\n";
    for (const auto & t : results)
        for (const auto & r : t.rows)
            out << r.seed << ',' << r.i << ',' << r.min_list << ',' << r.max_t << ',' << r.activations << ','
                << r.assignments << ',' << r.uncolourings << ',' << r.flips << ',' << r.clamps << ',' << r.stuck_count
                << '\n';
}

struct Interval {
    double low, high;
};

/// 95% Wilson score interval.
inline Interval wilson_interval(std::size_t successes, std::size_t trials)
{
    if (trials == 0)
        return {0, 1};
    const double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double denom = 1 + z * z / n;
    const double centre = (p + z * z / (2 * n)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

inline json colouring_to_json(const Colouring & c)
{
    json arr = json::array();
    for (VertexId v = 0; v < c.n_vertices(); ++v)
        arr.push_back(c[v] ? json(*c[v]) : json(nullptr));
    return arr;
}

inline Colouring colouring_from_json(const json & arr)
{
    if (!arr.is_array())
        throw ParameterError("colouring must be a JSON array");
    Colouring c(arr.size());
    for (std::size_t v = 0; v < arr.size(); ++v) {
        if (arr[v].is_null())
            continue;
        if (!arr[v].is_number_integer())
            throw ParameterError("colouring entry " + std::to_string(v) + " is not an integer");
        c.assign(static_cast<VertexId>(v), arr[v].get<Colour>());
    }
    return c;
}

inline std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline json make_report(const InstanceBundle & b, const ExperimentConfig & c, const std::vector<TrialResult> & results,
    const std::string & timestamp)
{
    const auto params = params_for(b, c);
    json j;
    j["config"] = to_json(c);
    j["config_hash"] = config_hash(c);
    j["timestamp"] = timestamp;
    j["instance"] = {{"n_vertices", b.graph.n_vertices()}, {"n_constraints", b.graph.n_constraints()},
        {"max_degree", b.graph.max_degree()}, {"conflict_degree", conflict_degree(b.graph)}};
    std::size_t min_list = SIZE_MAX;
    for (VertexId v = 0; v < b.lists.n_vertices(); ++v)
        min_list = std::min(min_list, b.lists.size_of(v));
    if (min_list == SIZE_MAX)
        min_list = 0;
    j["params"] = {{"delta", params.delta}, {"epsilon", params.epsilon}, {"K", params.K}, {"beta", params.beta},
        {"L0", params.L0}, {"T0", params.T0},
        {"in_regime", check_regime(params.delta, params.epsilon, static_cast<double>(conflict_degree(b.graph)),
                          static_cast<double>(min_list))}};
    std::size_t successes = 0;
    json trials = json::array();
    for (const auto & t : results) {
        successes += t.success ? 1 : 0;
        json row;
        row["index"] = t.index;
        row["seed"] = t.seed;
        row["outcome"] = to_string(t.outcome);
        row["reason"] = t.reason;
        row["iterations"] = t.iterations;
        row["pruned"] = t.pruned;
        row["finisher"] = {{"ran", t.finisher_ran}, {"ell", t.finisher_ell}, {"worst_t", t.finisher_worst_t},
            {"condition", t.finisher_condition}, {"resamples", t.resamples}, {"budget", t.resample_budget}};
        row["verified"] = t.verified;
        row["success"] = t.success;
        row["colouring"] = t.success && t.colouring ? colouring_to_json(*t.colouring) : json(nullptr);
        trials.push_back(std::move(row));
    }
    j["trials"] = std::move(trials);
    const auto ci = wilson_interval(successes, results.size());
    j["summary"] = {{"trials", results.size()}, {"successes", successes},
        {"success_rate", results.empty() ? 0.0 : static_cast<double>(successes) / static_cast<double>(results.size())},
        {"ci95", {ci.low, ci.high}}};
    return j;
}

} // namespace conflict
