#pragma once

// Slow, independent re-implementations used to cross-check the library.

#include "conflict/graph.hpp"
#include "conflict/instances.hpp"
#include "conflict/trajectory.hpp"

#include <cmath>
#include <map>
#include <queue>
#include <vector>

namespace oracle {

using namespace conflict;

/// D by scanning every ordered pair and every first colour.
inline std::size_t conflict_degree(const MultiGraph & g)
{
    std::size_t best = 0;
    for (VertexId u = 0; u < g.n_vertices(); ++u) {
        for (VertexId v = 0; v < g.n_vertices(); ++v) {
            if (u == v || !g.adjacent(u, v))
                continue;
            std::map<Colour, std::size_t> count;
            for (const auto c : g.constraints(u, v))
                best = std::max(best, ++count[c.from_colour]);
        }
    }
    return best;
}

/// t(v, c) straight from the definition, over every other vertex.
inline std::size_t t_direct(
    const MultiGraph & g, const ListAssignment & lists, const std::vector<bool> & live, VertexId v, Colour c)
{
    std::size_t total = 0;
    for (VertexId u = 0; u < g.n_vertices(); ++u) {
        if (u == v || !live[u] || !g.adjacent(u, v))
            continue;
        for (const auto k : g.constraints(v, u))
            if (k.from_colour == c && lists.contains(u, k.to_colour))
                ++total;
    }
    return total;
}

inline bool simple_k_colourable(const SimpleGraph & g, std::size_t k)
{
    const auto adj = detail::simple_adjacency(g);
    std::vector<std::size_t> colour(g.n_vertices, 0);
    auto place = [&](auto && self, std::size_t v) -> bool {
        if (v == g.n_vertices)
            return true;
        for (std::size_t c = 1; c <= k; ++c) {
            bool ok = true;
            for (auto u : adj[v])
                if (u < v && colour[u] == c)
                    ok = false;
            if (!ok)
                continue;
            colour[v] = c;
            if (self(self, v + 1))
                return true;
        }
        colour[v] = 0;
        return false;
    };
    return place(place, 0);
}

inline bool bipartite(const SimpleGraph & g)
{
    const auto adj = detail::simple_adjacency(g);
    std::vector<int> side(g.n_vertices, -1);
    for (std::size_t s = 0; s < g.n_vertices; ++s) {
        if (side[s] >= 0)
            continue;
        side[s] = 0;
        std::queue<std::size_t> q;
        q.push(s);
        while (!q.empty()) {
            const auto v = q.front();
            q.pop();
            for (auto u : adj[v]) {
                if (side[u] < 0) {
                    side[u] = 1 - side[v];
                    q.push(u);
                }
                else if (side[u] == side[v])
                    return false;
            }
        }
    }
    return true;
}

/// Shortest cycle length of a simple graph, 0 if acyclic.
inline std::size_t girth(const SimpleGraph & g)
{
    const auto adj = detail::simple_adjacency(g);
    std::size_t best = 0;
    for (std::size_t s = 0; s < g.n_vertices; ++s) {
        std::vector<long> dist(g.n_vertices, -1), parent(g.n_vertices, -1);
        dist[s] = 0;
        std::queue<std::size_t> q;
        q.push(s);
        while (!q.empty()) {
            const auto v = q.front();
            q.pop();
            for (auto u : adj[v]) {
                if (dist[u] < 0) {
                    dist[u] = dist[v] + 1;
                    parent[u] = static_cast<long>(v);
                    q.push(u);
                }
                else if (parent[v] != static_cast<long>(u)) {
                    const auto len = static_cast<std::size_t>(dist[u] + dist[v] + 1);
                    if (best == 0 || len < best)
                        best = len;
                }
            }
        }
    }
    return best;
}

struct Row {
    double L, T, Lp, Tp, keep;
};

/// The recurrences evaluated with std::pow directly.
inline std::vector<Row> recompute(const TheoryParams & p, std::size_t rows)
{
    const double x = p.epsilon * std::exp(-p.epsilon);
    std::vector<Row> out;
    double L = p.L0, T = p.T0, Lp = p.L0, Tp = p.T0;
    for (std::size_t i = 0; i < rows; ++i) {
        const double keep = std::pow(1.0 - p.K * (1.0 + x / 30.0) / (L * p.log_delta), T);
        out.push_back({L, T, Lp, Tp, keep});
        const double a = p.K / p.log_delta;
        const double nL = L * keep - std::pow(L, 1.0 - p.beta / 2.0);
        const double nT = T * (1.0 - a * keep) * keep + std::pow(T, 1.0 - p.beta / 2.0);
        Lp *= keep;
        Tp *= (1.0 - a * keep) * keep;
        L = nL;
        T = nT;
    }
    return out;
}

/// Petersen graph: outer 5-cycle, inner pentagram, spokes.
inline SimpleGraph petersen()
{
    SimpleGraph g;
    g.n_vertices = 10;
    for (VertexId i = 0; i < 5; ++i) {
        g.edges.push_back({i, static_cast<VertexId>((i + 1) % 5)});
        g.edges.push_back({i, static_cast<VertexId>(i + 5)});
        g.edges.push_back({static_cast<VertexId>(i + 5), static_cast<VertexId>((i + 2) % 5 + 5)});
    }
    return g;
}

inline SimpleGraph cycle(std::size_t n)
{
    SimpleGraph g;
    g.n_vertices = n;
    for (std::size_t i = 0; i < n; ++i)
        g.edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>((i + 1) % n)});
    return g;
}

} // namespace oracle
