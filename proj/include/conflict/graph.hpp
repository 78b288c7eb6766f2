#pragma once

// Multigraphs whose edges are ordered colour-pair constraints.
//
// An edge between u and v carrying (c, c') forbids u = c together with
// v = c'. Parallel edges are separate constraints and each contributes to the
// degree of both endpoints. Constraints for a vertex pair are stored once,
// oriented from the lower to the higher vertex index; the opposite view is
// produced on the fly by swapping components.

#include "conflict/errors.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace conflict {

using VertexId = std::uint32_t;
using Colour = std::int64_t;

struct Constraint {
    Colour from_colour; ///< disallowed for the first endpoint
    Colour to_colour;   ///< disallowed for the second endpoint

    Constraint reversed() const { return {to_colour, from_colour}; }

    friend bool operator==(const Constraint &, const Constraint &) = default;
};

/// The constraints between an ordered vertex pair (u, v), presented so that
/// `from_colour` always refers to u.
class OrientedConstraints {
  public:
    class iterator {
      public:
        using iterator_category = std::forward_iterator_tag;
        using value_type = Constraint;
        using difference_type = std::ptrdiff_t;
        using pointer = void;
        using reference = Constraint;

        iterator() = default;
        iterator(const Constraint * p, bool reversed) : p_(p), reversed_(reversed) {}

        Constraint operator*() const { return reversed_ ? p_->reversed() : *p_; }
        iterator & operator++()
        {
            ++p_;
            return *this;
        }
        iterator operator++(int)
        {
            auto old = *this;
            ++p_;
            return old;
        }
        friend bool operator==(const iterator & a, const iterator & b) { return a.p_ == b.p_; }

      private:
        const Constraint * p_ = nullptr;
        bool reversed_ = false;
    };

    OrientedConstraints() = default;
    OrientedConstraints(std::span<const Constraint> stored, bool reversed) : stored_(stored), reversed_(reversed) {}

    iterator begin() const { return {stored_.data(), reversed_}; }
    iterator end() const { return {stored_.data() + stored_.size(), reversed_}; }
    std::size_t size() const { return stored_.size(); }
    bool empty() const { return stored_.empty(); }
    Constraint operator[](std::size_t i) const { return reversed_ ? stored_[i].reversed() : stored_[i]; }

  private:
    std::span<const Constraint> stored_;
    bool reversed_ = false;
};

class MultiGraph {
  public:
    struct Neighbour {
        VertexId vertex;
        std::size_t pair; ///< index into pairs()
    };

    struct PairBlock {
        VertexId low;
        VertexId high;
        std::vector<Constraint> constraints; ///< oriented low -> high

        friend bool operator==(const PairBlock &, const PairBlock &) = default;
    };

    MultiGraph() = default;
    explicit MultiGraph(std::size_t n_vertices) : adjacency_(n_vertices), degree_(n_vertices, 0) {}

    std::size_t n_vertices() const { return adjacency_.size(); }

    VertexId add_vertex()
    {
        adjacency_.emplace_back();
        degree_.push_back(0);
        return static_cast<VertexId>(adjacency_.size() - 1);
    }

    /// Append constraint c, oriented from u to v.
    void add_constraint(VertexId u, VertexId v, Constraint c)
    {
        if (u >= n_vertices() || v >= n_vertices())
            throw StructuralError("constraint endpoint out of range: (" + std::to_string(u) + ", "
                + std::to_string(v) + ") with " + std::to_string(n_vertices()) + " vertices");
        if (u == v)
            throw StructuralError("self-loop constraint on vertex " + std::to_string(u));

        const bool swap = u > v;
        const VertexId low = swap ? v : u;
        const VertexId high = swap ? u : v;
        const auto key = pair_key(low, high);

        auto found = pair_index_.find(key);
        std::size_t index;
        if (found == pair_index_.end()) {
            index = pairs_.size();
            pairs_.push_back(PairBlock{low, high, {}});
            pair_index_.emplace(key, index);
            adjacency_[low].push_back(Neighbour{high, index});
            adjacency_[high].push_back(Neighbour{low, index});
        }
        else
            index = found->second;

        pairs_[index].constraints.push_back(swap ? c.reversed() : c);
        ++degree_[u];
        ++degree_[v];
        ++n_constraints_;
    }

    /// 𝒯(u, v): the constraints between u and v, first component for u.
    OrientedConstraints constraints(VertexId u, VertexId v) const
    {
        const bool swap = u > v;
        auto found = pair_index_.find(swap ? pair_key(v, u) : pair_key(u, v));
        if (found == pair_index_.end())
            return {};
        return {pairs_[found->second].constraints, swap};
    }

    /// Constraints of a stored pair seen from endpoint `from`.
    OrientedConstraints constraints_of_pair(std::size_t pair, VertexId from) const
    {
        const auto & block = pairs_[pair];
        return {block.constraints, from != block.low};
    }

    std::span<const Neighbour> neighbours(VertexId v) const { return adjacency_[v]; }
    std::span<const PairBlock> pairs() const { return pairs_; }

    bool adjacent(VertexId u, VertexId v) const
    {
        if (u == v)
            return false;
        return pair_index_.contains(u < v ? pair_key(u, v) : pair_key(v, u));
    }

    std::size_t degree(VertexId v) const { return degree_[v]; }

    std::size_t max_degree() const
    {
        std::size_t best = 0;
        for (auto d : degree_)
            best = std::max(best, d);
        return best;
    }

    std::size_t n_constraints() const { return n_constraints_; }

    friend bool operator==(const MultiGraph & a, const MultiGraph & b)
    {
        return a.n_vertices() == b.n_vertices() && a.pairs_ == b.pairs_;
    }

  private:
    static std::uint64_t pair_key(VertexId low, VertexId high)
    {
        return (static_cast<std::uint64_t>(low) << 32U) | static_cast<std::uint64_t>(high);
    }

    std::vector<std::vector<Neighbour>> adjacency_;
    std::vector<std::size_t> degree_;
    std::vector<PairBlock> pairs_;
    std::unordered_map<std::uint64_t, std::size_t> pair_index_;
    std::size_t n_constraints_ = 0;
};

/// Per-vertex candidate colours, kept sorted and duplicate-free.
class ListAssignment {
  public:
    ListAssignment() = default;
    explicit ListAssignment(std::size_t n_vertices) : lists_(n_vertices) {}
    explicit ListAssignment(std::vector<std::vector<Colour>> lists) : lists_(std::move(lists))
    {
        for (auto & l : lists_)
            normalise(l);
    }

    /// Every vertex gets {1, ..., size}.
    static ListAssignment uniform(std::size_t n_vertices, std::size_t size)
    {
        std::vector<Colour> range(size);
        for (std::size_t c = 0; c < size; ++c)
            range[c] = static_cast<Colour>(c + 1);
        return ListAssignment(std::vector<std::vector<Colour>>(n_vertices, range));
    }

    std::size_t n_vertices() const { return lists_.size(); }
    const std::vector<Colour> & operator[](VertexId v) const { return lists_[v]; }
    std::size_t size_of(VertexId v) const { return lists_[v].size(); }

    bool contains(VertexId v, Colour c) const { return std::binary_search(lists_[v].begin(), lists_[v].end(), c); }

    bool remove(VertexId v, Colour c)
    {
        auto & l = lists_[v];
        auto it = std::lower_bound(l.begin(), l.end(), c);
        if (it == l.end() || *it != c)
            return false;
        l.erase(it);
        return true;
    }

    void set(VertexId v, std::vector<Colour> colours)
    {
        normalise(colours);
        lists_[v] = std::move(colours);
    }

    void add_vertex(std::vector<Colour> colours = {})
    {
        normalise(colours);
        lists_.push_back(std::move(colours));
    }

    friend bool operator==(const ListAssignment &, const ListAssignment &) = default;

  private:
    static void normalise(std::vector<Colour> & l)
    {
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
    }

    std::vector<std::vector<Colour>> lists_;
};

/// σ: a possibly partial vertex colouring.
class Colouring {
  public:
    Colouring() = default;
    explicit Colouring(std::size_t n_vertices) : assignment_(n_vertices) {}

    std::size_t n_vertices() const { return assignment_.size(); }
    const std::optional<Colour> & operator[](VertexId v) const { return assignment_[v]; }
    bool coloured(VertexId v) const { return assignment_[v].has_value(); }
    void assign(VertexId v, Colour c) { assignment_[v] = c; }
    void clear(VertexId v) { assignment_[v].reset(); }

    bool complete() const
    {
        return std::all_of(assignment_.begin(), assignment_.end(), [](const auto & a) { return a.has_value(); });
    }

    std::size_t n_coloured() const
    {
        return static_cast<std::size_t>(
            std::count_if(assignment_.begin(), assignment_.end(), [](const auto & a) { return a.has_value(); }));
    }

    friend bool operator==(const Colouring &, const Colouring &) = default;

  private:
    std::vector<std::optional<Colour>> assignment_;
};

/// D(τ): the largest number of constraints between an ordered pair (u, v)
/// sharing the same first component.
inline std::size_t conflict_degree(const MultiGraph & g)
{
    std::size_t best = 0;
    std::unordered_map<Colour, std::size_t> from_counts, to_counts;
    for (const auto & block : g.pairs()) {
        from_counts.clear();
        to_counts.clear();
        for (const auto & c : block.constraints) {
            best = std::max(best, ++from_counts[c.from_colour]);
            best = std::max(best, ++to_counts[c.to_colour]);
        }
    }
    return best;
}

/// True iff the underlying simple graph has no cycle of length 3 or 4.
/// Parallel edges collapse to one simple edge and are not cycles here.
inline bool validate_girth(const MultiGraph & g)
{
    const auto n = g.n_vertices();
    std::vector<std::size_t> mark(n, SIZE_MAX);
    for (VertexId v = 0; v < n; ++v) {
        // any vertex at distance two from v reached twice closes a 4-cycle;
        // a neighbour of a neighbour that is itself a neighbour closes a triangle
        for (const auto & nb : g.neighbours(v))
            mark[nb.vertex] = v;
        std::unordered_set<VertexId> seen_at_two;
        for (const auto & nb : g.neighbours(v)) {
            for (const auto & nb2 : g.neighbours(nb.vertex)) {
                const auto w = nb2.vertex;
                if (w == v)
                    continue;
                if (mark[w] == v)
                    return false;
                if (!seen_at_two.insert(w).second)
                    return false;
            }
        }
    }
    return true;
}

/// Vertices the t-counts treat as live neighbours: uncoloured ones.
inline std::vector<bool> uncoloured_mask(const Colouring & colouring)
{
    std::vector<bool> mask(colouring.n_vertices());
    for (VertexId v = 0; v < colouring.n_vertices(); ++v)
        mask[v] = !colouring.coloured(v);
    return mask;
}

/// t(v, u, c): constraints (c, c') ∈ 𝒯(v, u) with c' still in u's list, or 0
/// when u is coloured.
inline std::size_t t_count(const MultiGraph & g, const ListAssignment & lists, const Colouring & colouring,
    VertexId v, VertexId u, Colour c)
{
    if (colouring.coloured(u))
        return 0;
    std::size_t count = 0;
    for (const auto k : g.constraints(v, u))
        if (k.from_colour == c && lists.contains(u, k.to_colour))
            ++count;
    return count;
}

/// t(v, c) = Σ_u t(v, u, c).
inline std::size_t t_total(
    const MultiGraph & g, const ListAssignment & lists, const Colouring & colouring, VertexId v, Colour c)
{
    std::size_t total = 0;
    for (const auto & nb : g.neighbours(v))
        total += t_count(g, lists, colouring, v, nb.vertex, c);
    return total;
}

/// t(v, c) for every c in lists[v] at once, aligned with lists[v]. `live`
/// selects which neighbours count as uncoloured.
inline std::vector<std::size_t> t_profile(
    const MultiGraph & g, const ListAssignment & lists, const std::vector<bool> & live, VertexId v)
{
    const auto & own = lists[v];
    std::vector<std::size_t> profile(own.size(), 0);
    for (const auto & nb : g.neighbours(v)) {
        if (!live[nb.vertex])
            continue;
        for (const auto k : g.constraints_of_pair(nb.pair, v)) {
            auto it = std::lower_bound(own.begin(), own.end(), k.from_colour);
            if (it == own.end() || *it != k.from_colour)
                continue;
            if (lists.contains(nb.vertex, k.to_colour))
                ++profile[static_cast<std::size_t>(it - own.begin())];
        }
    }
    return profile;
}

/// Largest t(v, c) over live v and c in lists[v].
inline std::size_t max_t(const MultiGraph & g, const ListAssignment & lists, const std::vector<bool> & live)
{
    std::size_t best = 0;
    for (VertexId v = 0; v < g.n_vertices(); ++v) {
        if (!live[v])
            continue;
        for (auto t : t_profile(g, lists, live, v))
            best = std::max(best, t);
    }
    return best;
}

/// True iff no constraint has both endpoints coloured with exactly its pair.
/// Unassigned vertices impose nothing.
inline bool verify_colouring(const MultiGraph & g, const Colouring & colouring)
{
    for (const auto & block : g.pairs()) {
        const auto & a = colouring[block.low];
        const auto & b = colouring[block.high];
        if (!a || !b)
            continue;
        for (const auto & c : block.constraints)
            if (c.from_colour == *a && c.to_colour == *b)
                return false;
    }
    return true;
}

/// Every assigned colour comes from its vertex's list.
inline bool respects_lists(const ListAssignment & lists, const Colouring & colouring)
{
    for (VertexId v = 0; v < colouring.n_vertices(); ++v)
        if (colouring[v] && !lists.contains(v, *colouring[v]))
            return false;
    return true;
}

} // namespace conflict
