// conflict-colour: generate instances, run trials, print trajectories,
// call the oracle and verify colourings.
//
// Exit codes: 0 success, 1 verify found an invalid colouring,
// 2 uncolourable by oracle, 3 stuck / exhausted, 4 input error.

#include "conflict/finisher.hpp"
#include "conflict/harness.hpp"
#include "conflict/instance_io.hpp"
#include "conflict/instances.hpp"
#include "conflict/trajectory.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

using namespace conflict;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid = 1;
constexpr int exit_uncolourable = 2;
constexpr int exit_stuck = 3;
constexpr int exit_input = 4;

void setup_logging()
{
    auto logger = spdlog::stderr_color_mt("conflict");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char * env = std::getenv("CONFLICT_COLOR_LOG"))
        spdlog::set_level(spdlog::level::from_str(env));
}

void describe(const InstanceBundle & b)
{
    std::size_t lo = SIZE_MAX, hi = 0;
    for (VertexId v = 0; v < b.lists.n_vertices(); ++v) {
        lo = std::min(lo, b.lists.size_of(v));
        hi = std::max(hi, b.lists.size_of(v));
    }
    if (lo == SIZE_MAX)
        lo = 0;
    std::cout << "vertices " << b.graph.n_vertices() << "\n"
              << "constraints " << b.graph.n_constraints() << "\n"
              << "max_degree " << b.graph.max_degree() << "\n"
              << "conflict_degree " << conflict_degree(b.graph) << "\n"
              << "list_sizes " << lo << ".." << hi << "\n"
              << "girth_ok " << (validate_girth(b.graph) ? "yes" : "no") << "\n";
}

struct GenOptions {
    std::string generator;
    std::string input;
    std::string output;
    std::size_t ell = 2;
    std::optional<std::size_t> delta;
    std::size_t levels = 1;
    std::size_t k = 3;
    std::optional<std::size_t> n;
    std::uint64_t seed = 1;
    std::size_t universe = 0;
    std::optional<std::size_t> list_size;
    std::size_t budget = 5'000'000;
};

int cmd_gen(const GenOptions & o)
{
    InstanceBundle b;
    if (o.generator == "example1") {
        b = gen_example1(o.ell, o.delta.value_or(o.ell * o.ell));
    }
    else if (o.generator == "blowup") {
        if (o.input.empty())
            throw ParameterError("blowup needs --input");
        const auto base = load_instance(o.input);
        try {
            auto [built, trace] = blowup_iterate(base, o.levels, o.budget);
            b = std::move(built);
            for (std::size_t i = 0; i < trace.size(); ++i) {
                const auto & lv = trace[i];
                const double exponent = lv.ell > 1
                    ? std::log(static_cast<double>(lv.conflict_degree)) / std::log(static_cast<double>(lv.ell))
                    : 0.0;
                std::cout << "level " << i << " ell " << lv.ell << " delta " << lv.max_degree << " D "
                          << lv.conflict_degree << " log_ell(D) " << exponent << "\n";
            }
        }
        catch (const BlowupBudgetError & e) {
            for (std::size_t i = 0; i < e.partial_trace().size(); ++i) {
                const auto & lv = e.partial_trace()[i];
                std::cout << "level " << i << " ell " << lv.ell << " delta " << lv.max_degree << " D "
                          << lv.conflict_degree << "\n";
            }
            spdlog::error("{}", e.what());
            return exit_stuck;
        }
    }
    else if (o.generator == "kreduce") {
        if (o.input.empty())
            throw ParameterError("kreduce needs --input");
        b = reduce_k_colouring(underlying_simple(load_instance(o.input).graph), o.k);
    }
    else if (o.generator == "adaptlift") {
        SimpleGraph g;
        if (!o.input.empty())
            g = underlying_simple(load_instance(o.input).graph);
        else {
            if (!o.n || !o.delta)
                throw ParameterError("adaptlift needs --input or both --n and --delta");
            g = gen_high_girth_regular(*o.n, *o.delta, o.seed);
        }
        std::size_t max_deg = 0;
        {
            std::vector<std::size_t> deg(g.n_vertices, 0);
            for (auto [u, v] : g.edges) {
                max_deg = std::max(max_deg, ++deg[u]);
                max_deg = std::max(max_deg, ++deg[v]);
            }
        }
        const auto list_size = o.list_size.value_or(std::max<std::size_t>(1, 3 * max_deg));
        const auto universe = o.universe ? o.universe : list_size;
        b = random_adaptable(g, universe, list_size, o.seed);
        b.meta["seed"] = std::to_string(o.seed);
    }
    else if (o.generator == "regular") {
        if (!o.n || !o.delta)
            throw ParameterError("regular needs --n and --delta");
        const auto g = gen_high_girth_regular(*o.n, *o.delta, o.seed);
        b = skeleton_bundle(g, o.list_size.value_or(3 * *o.delta));
        b.meta["generator"] = "regular";
        b.meta["seed"] = std::to_string(o.seed);
    }
    else
        throw ParameterError("unknown generator '" + o.generator + "'");

    if (o.output.empty())
        write_instance(std::cout, b);
    else {
        save_instance(o.output, b);
        describe(b);
    }
    return exit_ok;
}

struct RunFlags {
    std::string config;
    std::string input;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> jobs;
    std::optional<std::string> mode;
    std::optional<std::size_t> max_iters;
    std::optional<std::size_t> budget;
    std::optional<double> epsilon;
    std::optional<double> delta;
    std::string output;
    std::string stats;
};

int cmd_run(const RunFlags & f)
{
    ExperimentConfig c;
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in)
            throw std::runtime_error("cannot open config '" + f.config + "'");
        json j;
        try {
            in >> j;
        }
        catch (const json::exception & e) {
            throw ParameterError(std::string("config is not valid JSON: ") + e.what());
        }
        c = config_from_json(j);
    }
    if (!f.input.empty())
        c.input = f.input;
    if (f.seed)
        c.seed = *f.seed;
    if (f.trials)
        c.trials = *f.trials;
    if (f.jobs)
        c.jobs = *f.jobs;
    if (f.mode)
        c.mode = parse_mode(*f.mode);
    if (f.max_iters)
        c.max_iters = *f.max_iters;
    if (f.budget)
        c.budget = *f.budget;
    if (f.epsilon)
        c.epsilon = *f.epsilon;
    if (f.delta)
        c.delta = *f.delta;
    if (!f.output.empty())
        c.report = f.output;
    if (!f.stats.empty())
        c.stats = f.stats;
    if (c.input.empty())
        throw ParameterError("run needs an instance (--input or config 'input')");

    auto bundle = std::make_shared<const InstanceBundle>(load_instance(c.input));
    if (!validate_girth(bundle->graph))
        throw StructuralError("instance has a 3- or 4-cycle in its underlying graph");
    spdlog::info("running {} trial(s) on {} ({} vertices)", c.trial_seeds().size(), c.input,
        bundle->graph.n_vertices());

    const auto results = run_experiment(bundle, c);
    const auto report = make_report(*bundle, c, results, utc_timestamp());
    if (!c.report.empty()) {
        std::ofstream out(c.report);
        out << report.dump(2) << '\n';
        if (!out)
            throw std::runtime_error("cannot write report '" + c.report + "'");
    }
    if (!c.stats.empty()) {
        std::ofstream out(c.stats, std::ios::binary);
        write_stats_csv(out, results);
        if (!out)
            throw std::runtime_error("cannot write stats '" + c.stats + "'");
    }
    const auto & summary = report["summary"];
    std::cout << "trials " << summary["trials"] << " successes " << summary["successes"] << " rate "
              << summary["success_rate"] << " ci95 [" << summary["ci95"][0] << ", " << summary["ci95"][1] << "]\n";
    for (const auto & t : results)
        if (!t.success)
            spdlog::info("trial {} seed {}: {} {}", t.index, t.seed, to_string(t.outcome), t.reason);
    return summary["successes"].get<std::size_t>() == results.size() ? exit_ok : exit_stuck;
}

int cmd_trajectory(double delta, double epsilon, const std::string & output, bool bounds)
{
    const auto p = compute_params(delta, epsilon);
    const auto traj = run_trajectory(p);
    if (output.empty())
        write_trajectory_csv(std::cout, traj);
    else {
        std::ofstream out(output);
        write_trajectory_csv(out, traj);
        if (!out)
            throw std::runtime_error("cannot write '" + output + "'");
    }
    std::cerr << "outcome " << to_string(traj.outcome) << " rows " << traj.rows.size();
    if (traj.i_star)
        std::cerr << " i_star " << *traj.i_star;
    std::cerr << " i_hat " << format_double(traj.i_hat) << "\n";
    if (bounds) {
        const auto r = check_recurrence_bounds(traj, p);
        auto show = [](const char * name, bool ok, std::optional<std::size_t> row) {
            std::cerr << name << ' ' << (ok ? "ok" : "violated");
            if (row)
                std::cerr << " at row " << *row;
            std::cerr << '\n';
        };
        show("ratio_decreasing", r.ratio_decreasing, r.first_ratio_violation);
        show("keep_bounds", r.keep_bounds, r.first_keep_violation);
        show("keep_lower_at_least_half", r.keep_lower_at_least_half, std::nullopt);
        show("primed_close", r.primed_close, r.first_primed_violation);
        show("stop_within_i_hat", r.stop_within_i_hat, std::nullopt);
    }
    return exit_ok;
}

int cmd_oracle(const std::string & input, double budget)
{
    const auto b = load_instance(input);
    std::optional<Colouring> found;
    try {
        found = brute_force(b, budget);
    }
    catch (const ResourceError & e) {
        std::cout << "UNKNOWN\n";
        spdlog::error("{}", e.what());
        return exit_stuck;
    }
    if (!found) {
        std::cout << "UNCOLOURABLE\n";
        return exit_uncolourable;
    }
    std::cout << "COLOURABLE\n" << colouring_to_json(*found).dump() << '\n';
    return exit_ok;
}

int cmd_verify(const std::string & input, const std::string & colouring_path)
{
    const auto b = load_instance(input);
    std::ifstream in(colouring_path);
    if (!in)
        throw std::runtime_error("cannot open '" + colouring_path + "'");
    json j;
    try {
        in >> j;
    }
    catch (const json::exception & e) {
        throw ParameterError(std::string("colouring file is not valid JSON: ") + e.what());
    }
    std::vector<std::pair<std::string, Colouring>> checks;
    if (j.is_array())
        checks.emplace_back("colouring", colouring_from_json(j));
    else if (j.is_object() && j.contains("trials")) {
        for (const auto & t : j["trials"])
            if (t.value("success", false))
                checks.emplace_back("trial " + std::to_string(t["index"].get<std::size_t>()),
                    colouring_from_json(t["colouring"]));
    }
    else
        throw ParameterError("expected a colouring array or a run report");

    bool all = true;
    for (const auto & [name, c] : checks) {
        const bool ok = c.n_vertices() == b.graph.n_vertices() && c.complete() && verify_colouring(b.graph, c)
            && respects_lists(b.lists, c);
        std::cout << name << ' ' << (ok ? "VALID" : "INVALID") << '\n';
        all = all && ok;
    }
    return all ? exit_ok : exit_invalid;
}

} // namespace

int main(int argc, char ** argv)
{
    setup_logging();
    CLI::App app{"conflict-colour: conflict list colouring experiments"};
    app.require_subcommand(1);

    GenOptions gen;
    auto * g = app.add_subcommand("gen", "generate an instance");
    g->add_option("generator", gen.generator, "example1 | blowup | kreduce | adaptlift | regular")->required();
    g->add_option("--input", gen.input, "base instance");
    g->add_option("--output", gen.output, "instance file to write (stdout if absent)");
    g->add_option("--ell", gen.ell, "list size for example1");
    g->add_option("--delta", gen.delta, "target max degree");
    g->add_option("--levels", gen.levels, "blow-up levels");
    g->add_option("--k", gen.k, "colours for kreduce");
    g->add_option("--n", gen.n, "vertex count");
    g->add_option("--seed", gen.seed, "generator seed");
    g->add_option("--universe", gen.universe, "colour universe for adaptlift");
    g->add_option("--list-size", gen.list_size, "list size");
    g->add_option("--budget", gen.budget, "constraint budget for blowup");

    RunFlags run;
    auto * r = app.add_subcommand("run", "run seeded trials");
    r->add_option("--config", run.config, "experiment config (JSON)");
    r->add_option("--input", run.input, "instance file");
    r->add_option("--seed", run.seed, "first seed");
    r->add_option("--trials", run.trials, "number of trials (seeds seed, seed+1, ...)");
    r->add_option("--jobs", run.jobs, "worker threads");
    r->add_option("--mode", run.mode, "theory | adaptive");
    r->add_option("--max-iters", run.max_iters, "iteration cap");
    r->add_option("--budget", run.budget, "finisher resample budget");
    r->add_option("--epsilon", run.epsilon, "epsilon");
    r->add_option("--delta", run.delta, "delta used for the constants");
    r->add_option("--output", run.output, "JSON report path");
    r->add_option("--stats", run.stats, "CSV stats path");

    double t_delta = 1e6, t_eps = 1.0;
    std::string t_out;
    bool t_bounds = false;
    auto * t = app.add_subcommand("trajectory", "print the L/T trajectory as CSV");
    t->add_option("--delta", t_delta, "delta")->required();
    t->add_option("--epsilon", t_eps, "epsilon")->required();
    t->add_option("--output", t_out, "CSV path (stdout if absent)");
    t->add_flag("--bounds", t_bounds, "also check the recurrence bounds");

    std::string o_input;
    double o_budget = 1e7;
    auto * o = app.add_subcommand("oracle", "exhaustive colourability check");
    o->add_option("--input", o_input, "instance file")->required();
    o->add_option("--budget", o_budget, "largest search space allowed");

    std::string v_input, v_colouring;
    auto * v = app.add_subcommand("verify", "check a colouring or every success in a report");
    v->add_option("--input", v_input, "instance file")->required();
    v->add_option("--colouring", v_colouring, "colouring JSON array or run report")->required();

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp & e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError & e) {
        app.exit(e);
        return exit_input;
    }

    try {
        if (*g)
            return cmd_gen(gen);
        if (*r)
            return cmd_run(run);
        if (*t)
            return cmd_trajectory(t_delta, t_eps, t_out, t_bounds);
        if (*o)
            return cmd_oracle(o_input, o_budget);
        if (*v)
            return cmd_verify(v_input, v_colouring);
    }
    catch (const ParseError & e) {
        spdlog::error("parse error, {}", e.what());
        return exit_input;
    }
    catch (const GenerationError & e) {
        spdlog::error("{}", e.what());
        return exit_stuck;
    }
    catch (const std::exception & e) {
        spdlog::error("{}", e.what());
        return exit_input;
    }
    return exit_input;
}
