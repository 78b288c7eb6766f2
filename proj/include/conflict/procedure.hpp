#pragma once

// The wasteful colouring procedure on a concrete instance.
//
// One iteration, with a = K / ln Δ and lists first cut down to the target
// size m:
//   1. truncate every live list to m colours (uniformly random subset);
//   2. activate each live vertex with probability a;
//   3. give each activated vertex a uniform colour from its list;
//   4. for every activated v coloured c and every neighbour u that was
//      uncoloured when the iteration began, drop c' from L(u) for each
//      (c, c') ∈ 𝒯(v, u);
//   5. uncolour both endpoints of any constraint violated by two colours
//      assigned in this iteration;
//   6. remove each surviving (v, c) with probability 1 − Keep_i / Keep_i(v, c),
//      so that every colour survives the iteration with probability Keep_i.
//
// All samples of steps 2-3 are drawn before any list is touched. Removals
// made in step 4 stand even if their source is uncoloured in step 5.

#include "conflict/errors.hpp"
#include "conflict/graph.hpp"
#include "conflict/instances.hpp"
#include "conflict/rng.hpp"
#include "conflict/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace conflict {

enum class Mode { theory, adaptive };

inline const char * to_string(Mode m) { return m == Mode::theory ? "theory" : "adaptive"; }

/// Test hooks. `activation_probability` replaces a only in step 2; the Keep
/// quantities still use K / ln Δ.
struct ProcedureHooks {
    std::optional<double> activation_probability;
    bool disable_flips = false;
};

enum class RemovalCause : std::uint8_t { truncation, conflict, flip };

struct Removal {
    Colour colour;
    RemovalCause cause;
    std::vector<VertexId> sources; ///< assigning neighbours, for conflict removals
};

struct VertexRecord {
    bool live = false; ///< uncoloured with a non-empty list when the iteration began
    bool activated = false;
    std::optional<Colour> assigned;
    bool retained = false;
    std::size_t size_before = 0;
    std::size_t size_after = 0;
    std::vector<Removal> removals;

    std::size_t removed_by(RemovalCause cause) const
    {
        return static_cast<std::size_t>(
            std::count_if(removals.begin(), removals.end(), [cause](const Removal & r) { return r.cause == cause; }));
    }
};

struct IterationStats {
    std::size_t iteration = 0;
    double target_L = 0; ///< L_i used for truncation and Keep_i
    double target_T = 0; ///< T_i used for Keep_i
    std::size_t list_target = 0; ///< m = ⌊L_i⌋
    double keep = 1; ///< Keep_i
    bool p_violation = false;
    bool proper = true;

    std::vector<VertexRecord> vertices;
    ListAssignment truncated_lists; ///< lists after step 1

    std::size_t activations = 0;
    std::size_t assignments = 0;
    std::size_t uncolourings = 0;
    std::size_t flips = 0;
    std::size_t clamps = 0;
    std::size_t nonpositive_keep = 0;
    std::size_t stuck_count = 0;
    std::size_t min_list = 0; ///< over uncoloured, non-stuck vertices afterwards
    std::size_t max_t = 0;
};

struct PruneReport {
    double threshold = 0;
    std::size_t removed = 0;
    std::vector<std::size_t> removed_per_vertex;
    std::vector<VertexId> emptied;
    bool removal_bound_holds = true; ///< every vertex lost at most L_0 colours
};

struct ProcedureState {
    std::shared_ptr<const InstanceBundle> bundle;
    Colouring colouring;
    ListAssignment lists;
    std::vector<bool> stuck;
    std::size_t iteration = 0;
    TheoryParams params;
    std::uint64_t seed = 0;
    Mode mode = Mode::adaptive;
    std::optional<Trajectory> trajectory;
    ProcedureHooks hooks;
    PruneReport prune;
    std::vector<IterationStats> stats;

    const MultiGraph & graph() const { return bundle->graph; }

    std::vector<bool> live_mask() const
    {
        std::vector<bool> live(colouring.n_vertices());
        for (VertexId v = 0; v < live.size(); ++v)
            live[v] = !colouring.coloured(v) && !stuck[v];
        return live;
    }
};

inline ProcedureState make_state(
    std::shared_ptr<const InstanceBundle> bundle, const TheoryParams & params, std::uint64_t seed, Mode mode)
{
    ProcedureState s;
    const auto n = bundle->graph.n_vertices();
    s.colouring = Colouring(n);
    s.lists = bundle->lists;
    s.stuck.assign(n, false);
    for (VertexId v = 0; v < n; ++v)
        s.stuck[v] = s.lists.size_of(v) == 0;
    s.params = params;
    s.seed = seed;
    s.mode = mode;
    if (mode == Mode::theory)
        s.trajectory = run_trajectory(params);
    s.bundle = std::move(bundle);
    return s;
}

/// Remove every (v, c) with t_0(v, c) above T_0. Decisions are taken on the
/// initial lists for all vertices at once.
inline PruneReport prune_bad_colours(ProcedureState & s)
{
    if (s.iteration != 0)
        throw PreconditionError("pruning only happens before the first iteration");
    const auto & g = s.graph();
    const auto n = g.n_vertices();
    PruneReport report;
    report.threshold = s.params.prune_threshold();
    report.removed_per_vertex.assign(n, 0);
    const auto live = s.live_mask();

    std::vector<std::vector<Colour>> doomed(n);
    for (VertexId v = 0; v < n; ++v) {
        const auto profile = t_profile(g, s.lists, live, v);
        for (std::size_t k = 0; k < profile.size(); ++k)
            if (static_cast<double>(profile[k]) > report.threshold)
                doomed[v].push_back(s.lists[v][k]);
    }
    for (VertexId v = 0; v < n; ++v) {
        for (auto c : doomed[v])
            s.lists.remove(v, c);
        report.removed_per_vertex[v] = doomed[v].size();
        report.removed += doomed[v].size();
        if (static_cast<double>(doomed[v].size()) > s.params.L0)
            report.removal_bound_holds = false;
        if (s.lists.size_of(v) == 0 && !s.stuck[v]) {
            s.stuck[v] = true;
            report.emptied.push_back(v);
        }
    }
    s.prune = report;
    return report;
}

struct KeepValue {
    double value = 1;
    bool nonpositive = false; ///< some factor was ≤ 0; value clamped to 0
};

/// Keep_i(v, c) = Π_u (1 − a · t(v, u, c) / list_size) over live neighbours u.
inline KeepValue keep_vc(const MultiGraph & g, const ListAssignment & lists, const std::vector<bool> & live,
    VertexId v, Colour c, double activation, double list_size)
{
    KeepValue out;
    for (const auto & nb : g.neighbours(v)) {
        if (!live[nb.vertex])
            continue;
        std::size_t t = 0;
        for (const auto k : g.constraints_of_pair(nb.pair, v))
            if (k.from_colour == c && lists.contains(nb.vertex, k.to_colour))
                ++t;
        if (t == 0)
            continue;
        const double factor = 1.0 - activation * static_cast<double>(t) / list_size;
        if (factor <= 0) {
            out.nonpositive = true;
            out.value = 0;
            return out;
        }
        out.value *= factor;
    }
    return out;
}

namespace detail {

/// Keep_i(v, c) for every c of lists[v], aligned with lists[v].
inline std::vector<KeepValue> keep_profile(const MultiGraph & g, const ListAssignment & lists,
    const std::vector<bool> & live, VertexId v, double activation, double list_size)
{
    const auto & own = lists[v];
    std::vector<KeepValue> out(own.size());
    std::vector<std::size_t> counts(own.size());
    for (const auto & nb : g.neighbours(v)) {
        if (!live[nb.vertex])
            continue;
        std::fill(counts.begin(), counts.end(), 0);
        for (const auto k : g.constraints_of_pair(nb.pair, v)) {
            auto it = std::lower_bound(own.begin(), own.end(), k.from_colour);
            if (it != own.end() && *it == k.from_colour && lists.contains(nb.vertex, k.to_colour))
                ++counts[static_cast<std::size_t>(it - own.begin())];
        }
        for (std::size_t i = 0; i < own.size(); ++i) {
            if (counts[i] == 0 || out[i].nonpositive)
                continue;
            const double factor = 1.0 - activation * static_cast<double>(counts[i]) / list_size;
            if (factor <= 0) {
                out[i].nonpositive = true;
                out[i].value = 0;
            }
            else
                out[i].value *= factor;
        }
    }
    return out;
}

inline std::size_t min_live_list(const ProcedureState & s, const std::vector<bool> & live)
{
    std::size_t best = SIZE_MAX;
    for (VertexId v = 0; v < live.size(); ++v)
        if (live[v])
            best = std::min(best, s.lists.size_of(v));
    return best == SIZE_MAX ? 0 : best;
}

} // namespace detail

/// Run one iteration; the returned stats are also appended to s.stats.
inline const IterationStats & run_iteration(ProcedureState & s)
{
    const auto & g = s.graph();
    const auto n = g.n_vertices();
    const auto live = s.live_mask();
    const double keep_activation = s.params.activation_probability();
    const double activation = s.hooks.activation_probability.value_or(keep_activation);

    IterationStats st;
    st.iteration = s.iteration;
    st.vertices.resize(n);
    for (VertexId v = 0; v < n; ++v) {
        st.vertices[v].live = live[v];
        st.vertices[v].size_before = s.lists.size_of(v);
    }

    if (s.mode == Mode::theory) {
        if (!s.trajectory || s.iteration >= s.trajectory->rows.size())
            throw PreconditionError("no trajectory row for iteration " + std::to_string(s.iteration));
        const auto & row = s.trajectory->rows[s.iteration];
        st.target_L = row.L;
        st.target_T = row.T;
        for (VertexId v = 0; v < n; ++v) {
            if (live[v] && static_cast<double>(s.lists.size_of(v)) < row.L * (1.0 - 1e-12)) {
                st.p_violation = true;
                break;
            }
        }
        if (st.p_violation || !(row.L >= 1.0)) {
            st.p_violation = true;
            st.truncated_lists = s.lists;
            s.stats.push_back(std::move(st));
            return s.stats.back();
        }
    }
    else
        st.target_L = static_cast<double>(detail::min_live_list(s, live));

    st.list_target = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(st.target_L + 1e-9)));
    const auto m = st.list_target;

    // 1. truncation
    Rng truncation_rng(derive_seed(s.seed, Stream::truncation, s.iteration));
    for (VertexId v = 0; v < n; ++v) {
        if (!live[v] || s.lists.size_of(v) <= m)
            continue;
        auto pool = s.lists[v];
        truncation_rng.shuffle(pool.begin(), pool.end());
        for (std::size_t k = m; k < pool.size(); ++k)
            st.vertices[v].removals.push_back({pool[k], RemovalCause::truncation, {}});
        pool.resize(m);
        s.lists.set(v, std::move(pool));
    }
    st.truncated_lists = s.lists;

    if (s.mode == Mode::adaptive) {
        st.target_T = static_cast<double>(max_t(g, s.lists, live));
        st.keep = st.target_T == 0 ? 1.0 : keep_i(static_cast<double>(m), st.target_T, s.params);
    }
    else
        st.keep = keep_i(st.target_L, st.target_T, s.params);

    // 2-3. activation and colour draws
    Rng activation_rng(derive_seed(s.seed, Stream::activation, s.iteration));
    Rng colour_rng(derive_seed(s.seed, Stream::colour, s.iteration));
    std::vector<std::optional<Colour>> drawn(n);
    for (VertexId v = 0; v < n; ++v) {
        if (!live[v])
            continue;
        if (activation_rng.bernoulli(activation)) {
            st.vertices[v].activated = true;
            ++st.activations;
        }
    }
    for (VertexId v = 0; v < n; ++v) {
        if (!st.vertices[v].activated)
            continue;
        const auto & list = s.lists[v];
        drawn[v] = list[colour_rng.uniform_below(list.size())];
        st.vertices[v].assigned = drawn[v];
        ++st.assignments;
    }

    // 4. conflict removals, gathered first then applied
    std::vector<std::map<Colour, std::vector<VertexId>>> conflict_sources(n);
    for (VertexId v = 0; v < n; ++v) {
        if (!drawn[v])
            continue;
        for (const auto & nb : g.neighbours(v)) {
            const auto u = nb.vertex;
            if (!live[u])
                continue;
            for (const auto k : g.constraints_of_pair(nb.pair, v)) {
                if (k.from_colour != *drawn[v] || !st.truncated_lists.contains(u, k.to_colour))
                    continue;
                auto & sources = conflict_sources[u][k.to_colour];
                if (sources.empty() || sources.back() != v)
                    sources.push_back(v);
            }
        }
    }
    for (VertexId u = 0; u < n; ++u) {
        for (auto & [c, sources] : conflict_sources[u]) {
            s.lists.remove(u, c);
            st.vertices[u].removals.push_back({c, RemovalCause::conflict, std::move(sources)});
        }
    }

    // 5. uncolour both ends of constraints violated within this iteration
    std::vector<bool> uncolour(n, false);
    for (const auto & block : g.pairs()) {
        const auto & a = drawn[block.low];
        const auto & b = drawn[block.high];
        if (!a || !b)
            continue;
        for (const auto & c : block.constraints) {
            if (c.from_colour == *a && c.to_colour == *b) {
                uncolour[block.low] = uncolour[block.high] = true;
                break;
            }
        }
    }
    for (VertexId v = 0; v < n; ++v) {
        if (!drawn[v])
            continue;
        if (uncolour[v])
            ++st.uncolourings;
        else {
            st.vertices[v].retained = true;
            s.colouring.assign(v, *drawn[v]);
        }
    }

    // 6. equalizing coin flips
    Rng flip_rng(derive_seed(s.seed, Stream::flip, s.iteration));
    for (VertexId v = 0; v < n; ++v) {
        if (!live[v])
            continue;
        const auto profile = detail::keep_profile(
            g, st.truncated_lists, live, v, keep_activation, static_cast<double>(m));
        const auto & truncated = st.truncated_lists[v];
        const auto current = s.lists[v];
        for (auto c : current) {
            const auto idx = static_cast<std::size_t>(
                std::lower_bound(truncated.begin(), truncated.end(), c) - truncated.begin());
            const auto & kv = profile[idx];
            double eq = 0;
            if (kv.nonpositive)
                ++st.nonpositive_keep;
            else {
                eq = 1.0 - st.keep / kv.value;
                if (eq < 0) {
                    ++st.clamps;
                    eq = 0;
                }
                eq = std::min(eq, 1.0);
            }
            const double draw = flip_rng.uniform01();
            if (!s.hooks.disable_flips && draw < eq) {
                s.lists.remove(v, c);
                st.vertices[v].removals.push_back({c, RemovalCause::flip, {}});
                ++st.flips;
            }
        }
    }

    // bookkeeping
    for (VertexId v = 0; v < n; ++v) {
        st.vertices[v].size_after = s.lists.size_of(v);
        if (live[v] && !s.colouring.coloured(v) && s.lists.size_of(v) == 0)
            s.stuck[v] = true;
    }
    const auto after = s.live_mask();
    st.stuck_count = static_cast<std::size_t>(std::count(s.stuck.begin(), s.stuck.end(), true));
    st.min_list = detail::min_live_list(s, after);
    st.max_t = max_t(g, s.lists, after);
    st.proper = verify_colouring(g, s.colouring);
    ++s.iteration;
    s.stats.push_back(std::move(st));
    return s.stats.back();
}

/// t'_{i+1}(v, c) for every v live at the start of the iteration and c in its
/// truncated list. A constraint (c, c') towards u counts unless u retained a
/// colour, or c' left u's list through a flip or through a conflict with a
/// neighbour other than v.
inline std::map<std::pair<VertexId, Colour>, std::size_t> measure_t_prime(
    const MultiGraph & g, const IterationStats & st)
{
    const auto n = g.n_vertices();
    std::vector<std::map<Colour, const Removal *>> removed(n);
    for (VertexId u = 0; u < n; ++u)
        for (const auto & r : st.vertices[u].removals)
            removed[u][r.colour] = &r;

    std::map<std::pair<VertexId, Colour>, std::size_t> out;
    for (VertexId v = 0; v < n; ++v) {
        if (!st.vertices[v].live)
            continue;
        for (auto c : st.truncated_lists[v]) {
            std::size_t total = 0;
            for (const auto & nb : g.neighbours(v)) {
                const auto u = nb.vertex;
                if (!st.vertices[u].live || st.vertices[u].retained)
                    continue;
                for (const auto k : g.constraints_of_pair(nb.pair, v)) {
                    if (k.from_colour != c || !st.truncated_lists.contains(u, k.to_colour))
                        continue;
                    auto found = removed[u].find(k.to_colour);
                    if (found != removed[u].end()) {
                        const auto & r = *found->second;
                        if (r.cause == RemovalCause::flip)
                            continue;
                        if (r.cause == RemovalCause::conflict
                            && std::any_of(r.sources.begin(), r.sources.end(), [v](VertexId w) { return w != v; }))
                            continue;
                    }
                    ++total;
                }
            }
            out[{v, c}] = total;
        }
    }
    return out;
}

enum class Outcome { ready_for_finisher, stuck, max_iters };

inline const char * to_string(Outcome o)
{
    switch (o) {
    case Outcome::ready_for_finisher: return "ready-for-finisher";
    case Outcome::stuck: return "stuck";
    case Outcome::max_iters: return "max-iters";
    }
    return "?";
}

struct ProcedureConfig {
    Mode mode = Mode::adaptive;
    std::size_t max_iters = 1000;
    ProcedureHooks hooks;
};

struct ProcedureResult {
    ProcedureState state;
    Outcome outcome = Outcome::stuck;
    std::string reason;
};

/// Prune, then iterate until ready for the finisher, stuck, or out of
/// iterations. Ready means: theory mode reached the trajectory's stopping
/// index; adaptive mode measures max t(v, c) ≤ min ℓ(v) / 8. In both modes a
/// state with no live constraint left is ready.
inline ProcedureResult run_procedure(
    std::shared_ptr<const InstanceBundle> bundle, const TheoryParams & params, std::uint64_t seed,
    const ProcedureConfig & config = {})
{
    ProcedureResult result{make_state(std::move(bundle), params, seed, config.mode), Outcome::stuck, {}};
    auto & s = result.state;
    s.hooks = config.hooks;
    const auto & g = s.graph();

    const auto prune = prune_bad_colours(s);
    if (!prune.emptied.empty()) {
        result.reason = "pruning emptied " + std::to_string(prune.emptied.size()) + " list(s)";
        return result;
    }

    for (;;) {
        if (std::find(s.stuck.begin(), s.stuck.end(), true) != s.stuck.end()) {
            result.outcome = Outcome::stuck;
            result.reason = "empty list at an uncoloured vertex";
            return result;
        }
        const auto live = s.live_mask();
        const auto worst = max_t(g, s.lists, live);
        const auto shortest = detail::min_live_list(s, live);
        if (worst == 0) {
            result.outcome = Outcome::ready_for_finisher;
            return result;
        }
        if (s.mode == Mode::adaptive && static_cast<double>(worst) <= static_cast<double>(shortest) / 8.0) {
            result.outcome = Outcome::ready_for_finisher;
            return result;
        }
        if (s.mode == Mode::theory) {
            const auto & traj = *s.trajectory;
            if (traj.i_star && s.iteration == *traj.i_star) {
                result.outcome = Outcome::ready_for_finisher;
                return result;
            }
            if (s.iteration + 1 >= traj.rows.size()) {
                result.outcome = Outcome::stuck;
                result.reason = std::string("trajectory ended in ") + to_string(traj.outcome);
                return result;
            }
        }
        if (s.iteration >= config.max_iters) {
            result.outcome = Outcome::max_iters;
            return result;
        }
        const auto & st = run_iteration(s);
        if (st.p_violation) {
            result.outcome = Outcome::stuck;
            result.reason = "property P violated at iteration " + std::to_string(st.iteration);
            return result;
        }
    }
}

} // namespace conflict
