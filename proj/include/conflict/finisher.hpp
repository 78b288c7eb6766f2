#pragma once

// Completing a partial colouring once every remaining colour has few
// conflicts, plus the exhaustive oracle used to check everything else.

#include "conflict/errors.hpp"
#include "conflict/graph.hpp"
#include "conflict/instances.hpp"
#include "conflict/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

namespace conflict {

struct ReedCondition {
    std::size_t ell = 0;
    std::size_t worst_t = 0;
    double lll_p = 0; ///< 1/ℓ²
    double lll_d = 0; ///< ℓ²/4
    /// Largest Σ_c t(u, c) + Σ_c t(v, c) over adjacent uncoloured u, v: the
    /// number of bad events sharing an endpoint with a given one.
    std::size_t measured_d = 0;
    bool satisfied = false; ///< worst_t ≤ ℓ/8

    bool accounting_holds() const { return 4.0 * lll_p * static_cast<double>(measured_d) <= 1.0; }
};

/// Only uncoloured vertices and constraints between them are considered.
inline ReedCondition check_reed(
    const MultiGraph & g, const ListAssignment & lists, const Colouring & partial, std::size_t ell)
{
    if (ell == 0)
        throw ParameterError("ell must be positive");
    const auto live = uncoloured_mask(partial);
    ReedCondition r;
    r.ell = ell;
    r.lll_p = 1.0 / static_cast<double>(ell * ell);
    r.lll_d = static_cast<double>(ell * ell) / 4.0;
    std::vector<std::size_t> load(g.n_vertices(), 0);
    for (VertexId v = 0; v < g.n_vertices(); ++v) {
        if (!live[v])
            continue;
        if (lists.size_of(v) < ell)
            throw PreconditionError("list of vertex " + std::to_string(v) + " is smaller than ell");
        for (auto t : t_profile(g, lists, live, v)) {
            r.worst_t = std::max(r.worst_t, t);
            load[v] += t;
        }
    }
    for (const auto & block : g.pairs())
        if (live[block.low] && live[block.high])
            r.measured_d = std::max(r.measured_d, load[block.low] + load[block.high]);
    r.satisfied = static_cast<double>(r.worst_t) <= static_cast<double>(ell) / 8.0;
    return r;
}

inline ReedCondition check_reed(const MultiGraph & g, const ListAssignment & lists, std::size_t ell)
{
    return check_reed(g, lists, Colouring(g.n_vertices()), ell);
}

struct FinisherOptions {
    std::optional<std::size_t> max_resamples; ///< default 100 · constraints · ℓ
    bool override_condition = false;
};

struct FinisherResult {
    std::optional<Colouring> colouring;
    std::size_t resamples = 0;
    std::size_t budget = 0;
    ReedCondition condition;           ///< on the lists as given
    ReedCondition truncated_condition; ///< on the lists cut to ℓ
};

/// Truncate uncoloured lists to ℓ, colour uniformly, then keep resampling
/// the free endpoints of the lowest violated constraint (by (u, v), then
/// constraint index) until none is left or the budget runs out.
inline FinisherResult resample_colouring(const MultiGraph & g, const ListAssignment & lists,
    const Colouring & partial, std::size_t ell, std::uint64_t seed, const FinisherOptions & options = {})
{
    FinisherResult result;
    result.condition = check_reed(g, lists, partial, ell);
    if (!result.condition.satisfied && !options.override_condition)
        throw PreconditionError("finisher condition fails: worst t " + std::to_string(result.condition.worst_t)
            + " exceeds ell/8 with ell " + std::to_string(ell));

    const auto n = g.n_vertices();
    const auto free = uncoloured_mask(partial);
    Rng rng(derive_seed(seed, Stream::finisher));

    ListAssignment cut(n);
    for (VertexId v = 0; v < n; ++v) {
        if (!free[v])
            continue;
        auto pool = lists[v];
        rng.shuffle(pool.begin(), pool.end());
        pool.resize(ell);
        cut.set(v, std::move(pool));
    }
    result.truncated_condition = check_reed(g, cut, partial, ell);
    result.budget = options.max_resamples.value_or(100 * std::max<std::size_t>(1, g.n_constraints()) * ell);

    std::vector<Colour> sigma(n, 0);
    for (VertexId v = 0; v < n; ++v)
        sigma[v] = free[v] ? cut[v][rng.uniform_below(ell)] : *partial[v];

    const auto & blocks = g.pairs();
    std::vector<std::size_t> order(blocks.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::pair(blocks[a].low, blocks[a].high) < std::pair(blocks[b].low, blocks[b].high);
    });
    std::vector<std::size_t> rank(blocks.size());
    for (std::size_t r = 0; r < order.size(); ++r)
        rank[order[r]] = r;

    for (const auto & block : blocks) {
        if (free[block.low] || free[block.high])
            continue;
        for (const auto & c : block.constraints)
            if (c.from_colour == sigma[block.low] && c.to_colour == sigma[block.high])
                throw PreconditionError("partial colouring is not proper");
    }

    std::set<std::pair<std::size_t, std::size_t>> violated;
    auto recheck = [&](std::size_t pair) {
        const auto r = rank[pair];
        violated.erase(violated.lower_bound({r, 0}), violated.lower_bound({r + 1, 0}));
        const auto & block = blocks[pair];
        if (!free[block.low] && !free[block.high])
            return;
        for (std::size_t k = 0; k < block.constraints.size(); ++k) {
            const auto & c = block.constraints[k];
            if (c.from_colour == sigma[block.low] && c.to_colour == sigma[block.high])
                violated.insert({r, k});
        }
    };
    for (std::size_t p = 0; p < blocks.size(); ++p)
        recheck(p);

    auto resample = [&](VertexId v) {
        sigma[v] = cut[v][rng.uniform_below(ell)];
        for (const auto & nb : g.neighbours(v))
            recheck(nb.pair);
    };

    while (!violated.empty()) {
        if (result.resamples >= result.budget)
            return result;
        ++result.resamples;
        const auto & block = blocks[order[violated.begin()->first]];
        const auto u = block.low, v = block.high;
        if (free[u])
            resample(u);
        if (free[v])
            resample(v);
    }

    Colouring out(n);
    for (VertexId v = 0; v < n; ++v)
        out.assign(v, sigma[v]);
    if (!verify_colouring(g, out))
        throw std::logic_error("finisher produced an improper colouring");
    result.colouring = std::move(out);
    return result;
}

/// Lexicographically first proper list colouring, or nullopt if none exists.
/// Throws ResourceError when Π|L(v)| exceeds the budget.
inline std::optional<Colouring> brute_force(
    const MultiGraph & g, const ListAssignment & lists, double budget = 1e7)
{
    const auto n = g.n_vertices();
    double space = 1;
    for (VertexId v = 0; v < n; ++v)
        space *= static_cast<double>(lists.size_of(v));
    if (space == 0)
        return std::nullopt;
    if (space > budget)
        throw ResourceError("search space " + std::to_string(space) + " exceeds budget");

    std::vector<std::size_t> choice(n, 0);
    Colouring sigma(n);
    auto consistent = [&](VertexId v) {
        for (const auto & nb : g.neighbours(v)) {
            if (nb.vertex >= v)
                continue;
            const auto theirs = *sigma[nb.vertex];
            for (const auto k : g.constraints_of_pair(nb.pair, v))
                if (k.from_colour == *sigma[v] && k.to_colour == theirs)
                    return false;
        }
        return true;
    };

    std::size_t depth = 0;
    while (depth < n) {
        const auto v = static_cast<VertexId>(depth);
        bool placed = false;
        while (choice[v] < lists.size_of(v)) {
            sigma.assign(v, lists[v][choice[v]++]);
            if (consistent(v)) {
                placed = true;
                break;
            }
        }
        if (placed) {
            ++depth;
            continue;
        }
        sigma.clear(v);
        choice[v] = 0;
        if (depth == 0)
            return std::nullopt;
        --depth;
    }
    return sigma;
}

inline std::optional<Colouring> brute_force(const InstanceBundle & b, double budget = 1e7)
{
    return brute_force(b.graph, b.lists, budget);
}

} // namespace conflict
