#pragma once

// Instance generators and reductions, including the two adversarial
// constructions: the two-vertex gadget carrying every colour pair, and the
// iterated blow-up that squares list sizes while multiplying conflict degree.

#include "conflict/errors.hpp"
#include "conflict/graph.hpp"
#include "conflict/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace conflict {

struct InstanceBundle {
    MultiGraph graph;
    ListAssignment lists;
    /// Colours 1..colour_universe are the live universe. Colours outside it
    /// may appear in constraints that can never fire (padding).
    std::size_t colour_universe = 0;
    std::map<std::string, std::string> meta;

    friend bool operator==(const InstanceBundle &, const InstanceBundle &) = default;
};

struct SimpleGraph {
    std::size_t n_vertices = 0;
    std::vector<std::pair<VertexId, VertexId>> edges;
};

struct LabelledEdge {
    VertexId u;
    VertexId v;
    Colour label;
};

struct BlowupLevel {
    std::size_t ell;
    std::size_t max_degree;
    std::size_t conflict_degree;

    friend bool operator==(const BlowupLevel &, const BlowupLevel &) = default;
};

using BlowupTrace = std::vector<BlowupLevel>;

class BlowupBudgetError : public ResourceError {
  public:
    BlowupBudgetError(const std::string & what, BlowupTrace partial) :
        ResourceError(what), partial_(std::move(partial))
    {
    }
    const BlowupTrace & partial_trace() const { return partial_; }

  private:
    BlowupTrace partial_;
};

namespace detail {

inline std::string encode_trace(const BlowupTrace & trace)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (i)
            out << ';';
        out << trace[i].ell << ',' << trace[i].max_degree << ',' << trace[i].conflict_degree;
    }
    return out.str();
}

inline BlowupTrace decode_trace(const std::string & text)
{
    BlowupTrace trace;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ';')) {
        BlowupLevel level{};
        char comma1 = 0, comma2 = 0;
        std::istringstream fields(item);
        if (!(fields >> level.ell >> comma1 >> level.max_degree >> comma2 >> level.conflict_degree)
            || comma1 != ',' || comma2 != ',')
            throw ParameterError("malformed blowup trace entry '" + item + "'");
        trace.push_back(level);
    }
    return trace;
}

inline std::vector<std::vector<VertexId>> simple_adjacency(const SimpleGraph & g)
{
    std::vector<std::vector<VertexId>> adj(g.n_vertices);
    for (auto [a, b] : g.edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    return adj;
}

} // namespace detail

inline BlowupLevel measure_level(const InstanceBundle & b)
{
    const std::size_t ell = b.lists.n_vertices() ? b.lists.size_of(0) : 0;
    return {ell, b.graph.max_degree(), conflict_degree(b.graph)};
}

inline BlowupTrace blowup_trace_of(const InstanceBundle & b)
{
    auto found = b.meta.find("blowup.trace");
    if (found == b.meta.end())
        return {};
    return detail::decode_trace(found->second);
}

inline SimpleGraph underlying_simple(const MultiGraph & g)
{
    SimpleGraph s{g.n_vertices(), {}};
    for (const auto & block : g.pairs())
        s.edges.emplace_back(block.low, block.high);
    std::sort(s.edges.begin(), s.edges.end());
    return s;
}

/// Two vertices joined by all ℓ² ordered pairs over [ℓ]; uncolourable with
/// lists [ℓ]. A disjoint star raises the maximum degree to target_delta; its
/// edges carry the inert constraint (0, 0), which no list contains.
inline InstanceBundle gen_example1(std::size_t ell, std::size_t target_delta)
{
    if (ell < 1)
        throw ParameterError("example1 needs ell >= 1");
    if (target_delta < ell * ell)
        throw ParameterError("example1 needs target_delta >= ell^2 (" + std::to_string(ell * ell) + "), got "
            + std::to_string(target_delta));

    InstanceBundle b;
    b.graph = MultiGraph(2);
    for (std::size_t i = 1; i <= ell; ++i)
        for (std::size_t j = 1; j <= ell; ++j)
            b.graph.add_constraint(0, 1, {static_cast<Colour>(i), static_cast<Colour>(j)});

    if (target_delta > ell * ell) {
        const auto hub = b.graph.add_vertex();
        for (std::size_t k = 0; k < target_delta; ++k)
            b.graph.add_constraint(hub, b.graph.add_vertex(), {0, 0});
    }

    b.lists = ListAssignment::uniform(b.graph.n_vertices(), ell);
    b.colour_universe = ell;
    b.meta["generator"] = "example1";
    b.meta["ell"] = std::to_string(ell);
    b.meta["target_delta"] = std::to_string(target_delta);
    return b;
}

/// One blow-up level: universe [ℓ] becomes [ℓ²] split into ℓ contiguous
/// blocks, and every constraint (i, j) becomes the ℓ² pairs of block_i × block_j.
inline InstanceBundle blowup(const InstanceBundle & b)
{
    const auto n = b.graph.n_vertices();
    if (n == 0)
        throw ParameterError("blowup of an empty instance");
    const std::size_t ell = b.lists.size_of(0);
    if (ell == 0)
        throw ParameterError("blowup needs non-empty lists");
    const auto expected = ListAssignment::uniform(1, ell)[0];
    for (VertexId v = 0; v < n; ++v) {
        if (b.lists.size_of(v) != ell)
            throw ParameterError("blowup needs equal list sizes; vertex " + std::to_string(v) + " has "
                + std::to_string(b.lists.size_of(v)) + ", vertex 0 has " + std::to_string(ell));
        if (b.lists[v] != expected)
            throw ParameterError("blowup needs every list to be [1.." + std::to_string(ell) + "]");
    }

    const auto block_start = [ell](Colour i) { return static_cast<Colour>((i - 1) * static_cast<Colour>(ell) + 1); };

    InstanceBundle out;
    out.graph = MultiGraph(n);
    for (const auto & pair : b.graph.pairs()) {
        for (const auto & c : pair.constraints) {
            if (c.from_colour < 1 || c.to_colour < 1 || c.from_colour > static_cast<Colour>(ell)
                || c.to_colour > static_cast<Colour>(ell))
                throw ParameterError("blowup needs every constraint colour inside [1.." + std::to_string(ell) + "]");
            const auto from0 = block_start(c.from_colour);
            const auto to0 = block_start(c.to_colour);
            for (std::size_t x = 0; x < ell; ++x)
                for (std::size_t y = 0; y < ell; ++y)
                    out.graph.add_constraint(pair.low, pair.high,
                        {from0 + static_cast<Colour>(x), to0 + static_cast<Colour>(y)});
        }
    }
    out.lists = ListAssignment::uniform(n, ell * ell);
    out.colour_universe = ell * ell;
    out.meta = b.meta;

    auto trace = blowup_trace_of(b);
    if (trace.empty())
        trace.push_back(measure_level(b));
    trace.push_back(measure_level(out));
    out.meta["blowup.trace"] = detail::encode_trace(trace);
    out.meta["blowup.levels"] = std::to_string(trace.size() - 1);
    return out;
}

/// k-fold blow-up with a budget on the number of constraints produced. The
/// trace is measured from the built graphs, not computed from the recurrences.
inline std::pair<InstanceBundle, BlowupTrace> blowup_iterate(
    const InstanceBundle & b, std::size_t k, std::size_t constraint_budget = 5'000'000)
{
    InstanceBundle current = b;
    BlowupTrace trace{measure_level(b)};
    for (std::size_t level = 0; level < k; ++level) {
        const auto ell = current.lists.n_vertices() ? current.lists.size_of(0) : 0;
        const double projected = static_cast<double>(current.graph.n_constraints()) * static_cast<double>(ell)
            * static_cast<double>(ell);
        if (projected > static_cast<double>(constraint_budget))
            throw BlowupBudgetError("blowup level " + std::to_string(level + 1) + " would need "
                    + std::to_string(static_cast<std::uint64_t>(projected)) + " constraints (budget "
                    + std::to_string(constraint_budget) + ")",
                trace);
        current = blowup(current);
        trace.push_back(measure_level(current));
    }
    return {std::move(current), std::move(trace)};
}

/// f(α) = 1 − 2^(−⌊log_√2 α⌋ − 1). log_√2 α values within 1e-12 of an
/// integer are snapped to it, so that exact powers of √2 evaluate exactly.
inline double f_alpha(double alpha)
{
    if (!(alpha >= 1.0))
        throw ParameterError("f_alpha needs alpha >= 1");
    const double log_root2 = 2.0 * std::log2(alpha);
    const double nearest = std::round(log_root2);
    const double floor_value = std::abs(log_root2 - nearest) < 1e-12 ? nearest : std::floor(log_root2);
    return 1.0 - std::ldexp(1.0, -static_cast<int>(floor_value) - 1);
}

/// Ordinary k-colouring as conflict colouring: every simple edge becomes the
/// k constraints (j, j), lists are [k].
inline InstanceBundle reduce_k_colouring(const SimpleGraph & simple, std::size_t k)
{
    if (k < 1)
        throw ParameterError("kreduce needs k >= 1");
    InstanceBundle b;
    b.graph = MultiGraph(simple.n_vertices);
    for (auto [u, v] : simple.edges)
        for (std::size_t j = 1; j <= k; ++j)
            b.graph.add_constraint(u, v, {static_cast<Colour>(j), static_cast<Colour>(j)});
    b.lists = ListAssignment::uniform(simple.n_vertices, k);
    b.colour_universe = k;
    b.meta["generator"] = "kreduce";
    b.meta["k"] = std::to_string(k);
    return b;
}

/// Adaptable colouring as conflict colouring: label c becomes (c, c).
inline InstanceBundle adaptable_lift(std::size_t n_vertices, const std::vector<LabelledEdge> & edges, ListAssignment lists)
{
    if (lists.n_vertices() != n_vertices)
        throw ParameterError("adaptable_lift: list assignment covers " + std::to_string(lists.n_vertices())
            + " vertices, graph has " + std::to_string(n_vertices));
    InstanceBundle b;
    b.graph = MultiGraph(n_vertices);
    Colour universe = 0;
    for (const auto & e : edges) {
        b.graph.add_constraint(e.u, e.v, {e.label, e.label});
        universe = std::max(universe, e.label);
    }
    for (VertexId v = 0; v < n_vertices; ++v)
        if (!lists[v].empty())
            universe = std::max(universe, lists[v].back());
    b.lists = std::move(lists);
    b.colour_universe = static_cast<std::size_t>(std::max<Colour>(universe, 0));
    b.meta["generator"] = "adaptlift";
    return b;
}

namespace detail {

// Local search state for the configuration-model repair. Edges may
// temporarily be loops or parallel; the score counts those defects plus
// cycles of length 3 and 4 in the underlying simple graph.
class RegularRepair {
  public:
    RegularRepair(std::size_t n, std::vector<std::pair<VertexId, VertexId>> edges) : adj_(n), edges_(std::move(edges))
    {
        for (auto [a, b] : edges_)
            link(a, b);
    }

    const std::vector<std::pair<VertexId, VertexId>> & edges() const { return edges_; }

    std::vector<std::size_t> bad_edges() const
    {
        std::vector<std::size_t> bad;
        for (std::size_t e = 0; e < edges_.size(); ++e)
            if (edge_is_bad(edges_[e].first, edges_[e].second))
                bad.push_back(e);
        return bad;
    }

    /// Try the double-edge swap (a,b),(c,d) -> (a,c),(b,d) or (a,d),(b,c);
    /// keep it only if the score does not increase.
    bool try_swap(std::size_t e1, std::size_t e2, bool cross)
    {
        auto [a, b] = edges_[e1];
        auto [c, d] = edges_[e2];
        if (cross)
            std::swap(c, d);
        const std::array<VertexId, 4> touched{a, b, c, d};
        const std::vector<std::pair<VertexId, VertexId>> pairs{{a, b}, {c, d}, {a, c}, {b, d}};

        const auto before = local_score(touched, pairs);
        unlink(a, b);
        unlink(c, d);
        link(a, c);
        link(b, d);
        const auto after = local_score(touched, pairs);
        if (after <= before) {
            edges_[e1] = {a, c};
            edges_[e2] = {b, d};
            return true;
        }
        unlink(a, c);
        unlink(b, d);
        link(a, b);
        link(c, d);
        return false;
    }

  private:
    void link(VertexId a, VertexId b)
    {
        adj_[a].push_back(b);
        if (a != b)
            adj_[b].push_back(a);
    }

    void unlink(VertexId a, VertexId b)
    {
        auto drop = [this](VertexId x, VertexId y) {
            auto & l = adj_[x];
            l.erase(std::find(l.begin(), l.end(), y));
        };
        drop(a, b);
        if (a != b)
            drop(b, a);
    }

    std::size_t multiplicity(VertexId a, VertexId b) const
    {
        return static_cast<std::size_t>(std::count(adj_[a].begin(), adj_[a].end(), b));
    }

    bool is_adjacent(VertexId a, VertexId b) const
    {
        return a != b && std::find(adj_[a].begin(), adj_[a].end(), b) != adj_[a].end();
    }

    std::vector<VertexId> distinct_neighbours(VertexId v) const
    {
        std::vector<VertexId> out;
        for (auto w : adj_[v])
            if (w != v)
                out.push_back(w);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    bool edge_is_bad(VertexId a, VertexId b) const
    {
        if (a == b || multiplicity(a, b) > 1)
            return true;
        const auto na = distinct_neighbours(a);
        const auto nb = distinct_neighbours(b);
        for (auto x : na) {
            if (x == b)
                continue;
            if (std::binary_search(nb.begin(), nb.end(), x))
                return true;
            for (auto y : nb)
                if (y != a && y != x && is_adjacent(x, y))
                    return true;
        }
        return false;
    }

    static std::array<VertexId, 4> canonical(std::array<VertexId, 4> cycle, std::size_t len)
    {
        std::size_t start = 0;
        for (std::size_t i = 1; i < len; ++i)
            if (cycle[i] < cycle[start])
                start = i;
        std::array<VertexId, 4> fwd{UINT32_MAX, UINT32_MAX, UINT32_MAX, UINT32_MAX};
        std::array<VertexId, 4> bwd = fwd;
        for (std::size_t i = 0; i < len; ++i) {
            fwd[i] = cycle[(start + i) % len];
            bwd[i] = cycle[(start + len - i) % len];
        }
        return std::min(fwd, bwd);
    }

    std::size_t local_score(
        const std::array<VertexId, 4> & touched, const std::vector<std::pair<VertexId, VertexId>> & pairs) const
    {
        std::set<std::array<VertexId, 4>> cycles;
        for (auto s : touched) {
            const auto ns = distinct_neighbours(s);
            for (std::size_t i = 0; i < ns.size(); ++i) {
                for (std::size_t j = 0; j < ns.size(); ++j) {
                    if (i == j)
                        continue;
                    const auto x = ns[i], y = ns[j];
                    if (i < j && is_adjacent(x, y))
                        cycles.insert(canonical({s, x, y, 0}, 3));
                    for (auto z : distinct_neighbours(x))
                        if (z != s && z != y && is_adjacent(z, y))
                            cycles.insert(canonical({s, x, z, y}, 4));
                }
            }
        }
        std::set<std::pair<VertexId, VertexId>> distinct;
        for (auto [x, y] : pairs)
            distinct.insert(std::minmax(x, y));
        std::size_t defects = 0;
        for (auto [x, y] : distinct) {
            const auto m = multiplicity(x, y);
            defects += x == y ? m : (m > 0 ? m - 1 : 0);
        }
        return cycles.size() + defects;
    }

    std::vector<std::vector<VertexId>> adj_;
    std::vector<std::pair<VertexId, VertexId>> edges_;
};

} // namespace detail

/// A simple delta-regular graph without 3- or 4-cycles: configuration-model
/// pairing, then double-edge swaps that never increase the number of defects
/// and short cycles, 100·n swap attempts per restart.
inline SimpleGraph gen_high_girth_regular(std::size_t n, std::size_t delta, std::uint64_t seed, std::size_t restarts = 10)
{
    if ((n * delta) % 2 != 0)
        throw ParameterError("regular graph needs n * delta even");
    if (delta >= n && delta > 0)
        throw ParameterError("regular graph needs delta < n");

    Rng rng(derive_seed(seed, Stream::generator));
    for (std::size_t attempt = 0; attempt < restarts; ++attempt) {
        std::vector<VertexId> stubs;
        stubs.reserve(n * delta);
        for (VertexId v = 0; v < n; ++v)
            for (std::size_t k = 0; k < delta; ++k)
                stubs.push_back(v);
        rng.shuffle(stubs.begin(), stubs.end());
        std::vector<std::pair<VertexId, VertexId>> edges;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2)
            edges.emplace_back(stubs[i], stubs[i + 1]);

        detail::RegularRepair repair(n, std::move(edges));
        auto bad = repair.bad_edges();
        const std::size_t budget = 100 * n;
        for (std::size_t swaps = 0; swaps < budget && !bad.empty(); ++swaps) {
            const auto e1 = bad[rng.uniform_below(bad.size())];
            auto e2 = static_cast<std::size_t>(rng.uniform_below(repair.edges().size()));
            if (e2 == e1)
                continue;
            if (repair.try_swap(e1, e2, rng.bernoulli(0.5)))
                bad = repair.bad_edges();
        }
        if (bad.empty()) {
            SimpleGraph g{n, {}};
            for (auto [a, b] : repair.edges())
                g.edges.emplace_back(std::minmax(a, b));
            std::sort(g.edges.begin(), g.edges.end());
            return g;
        }
    }
    throw GenerationError("no C3/C4-free " + std::to_string(delta) + "-regular graph on " + std::to_string(n)
        + " vertices found within " + std::to_string(restarts) + " restarts");
}

/// Skeleton bundle for a simple graph: each edge carries the inert
/// constraint (0, 0); lists are [list_size].
inline InstanceBundle skeleton_bundle(const SimpleGraph & g, std::size_t list_size)
{
    InstanceBundle b;
    b.graph = MultiGraph(g.n_vertices);
    for (auto [u, v] : g.edges)
        b.graph.add_constraint(u, v, {0, 0});
    b.lists = ListAssignment::uniform(g.n_vertices, list_size);
    b.colour_universe = list_size;
    return b;
}

/// Random adaptable instance on a given simple graph: labels uniform from
/// [universe], each list a uniform list_size-subset of [universe].
inline InstanceBundle random_adaptable(const SimpleGraph & g, std::size_t universe, std::size_t list_size, std::uint64_t seed)
{
    if (list_size > universe || list_size == 0)
        throw ParameterError("random_adaptable needs 1 <= list_size <= universe");
    Rng rng(derive_seed(seed, Stream::generator, 1));
    std::vector<LabelledEdge> labelled;
    for (auto [u, v] : g.edges)
        labelled.push_back({u, v, static_cast<Colour>(rng.uniform_below(universe) + 1)});
    std::vector<Colour> all(universe);
    for (std::size_t c = 0; c < universe; ++c)
        all[c] = static_cast<Colour>(c + 1);
    ListAssignment lists(g.n_vertices);
    for (VertexId v = 0; v < g.n_vertices; ++v) {
        auto pool = all;
        rng.shuffle(pool.begin(), pool.end());
        pool.resize(list_size);
        lists.set(v, pool);
    }
    auto b = adaptable_lift(g.n_vertices, labelled, std::move(lists));
    b.colour_universe = universe;
    return b;
}

} // namespace conflict
