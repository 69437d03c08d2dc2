#ifndef MIXFAIR_ENVY_GRAPH_HPP
#define MIXFAIR_ENVY_GRAPH_HPP

#include "mixfair/allocation.hpp"
#include "mixfair/fairness.hpp"
#include "mixfair/scalar.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <vector>

namespace mixfair {

enum class EdgeKind : unsigned char
{
    None,
    Envy, ///< u_i(A_i) < u_i(A_j) − slack
    Eq,   ///< u_i(A_j) − slack ≤ u_i(A_i) ≤ u_i(A_j)
};

/// Envy graph with slack eps (eps = 0 is the plain envy graph).  Snapshot of
/// one allocation; rebuild after every change.
class EnvyGraph
{
public:
    EnvyGraph() = default;

    /// `value[i][j]` = u_i(A_j).
    EnvyGraph(const std::vector<std::vector<Scalar>>& value, Scalar slack)
        : slack_(std::move(slack)), n_(value.size()), kind_(n_, std::vector<EdgeKind>(n_, EdgeKind::None))
    {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                if (i == j) continue;
                const Scalar& own = value[i][i];
                const Scalar& other = value[i][j];
                if (own < other - slack_) kind_[i][j] = EdgeKind::Envy;
                else if (own <= other) kind_[i][j] = EdgeKind::Eq;
            }
        }
    }

    /// Direct construction from an edge table (for tests and oracles).
    EnvyGraph(std::vector<std::vector<EdgeKind>> kinds, Scalar slack = 0)
        : slack_(std::move(slack)), n_(kinds.size()), kind_(std::move(kinds))
    {}

    std::size_t size() const { return n_; }
    const Scalar& slack() const { return slack_; }
    EdgeKind edge(AgentIndex i, AgentIndex j) const { return kind_[i][j]; }
    bool has_edge(AgentIndex i, AgentIndex j) const { return kind_[i][j] != EdgeKind::None; }

    std::size_t envy_edge_count() const
    {
        std::size_t c = 0;
        for (const auto& row : kind_)
            c += static_cast<std::size_t>(std::count(row.begin(), row.end(), EdgeKind::Envy));
        return c;
    }

    /// Vertices reachable from `from` (including it) over any edge.
    std::vector<bool> reachable_from(AgentIndex from) const
    {
        std::vector<bool> seen(n_, false);
        std::deque<AgentIndex> queue{from};
        seen[from] = true;
        while (!queue.empty()) {
            const AgentIndex u = queue.front();
            queue.pop_front();
            for (std::size_t v = 0; v < n_; ++v) {
                if (!seen[v] && has_edge(u, v)) {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        return seen;
    }

    bool operator==(const EnvyGraph&) const = default;

private:
    Scalar slack_;
    std::size_t n_ = 0;
    std::vector<std::vector<EdgeKind>> kind_;
};

inline EnvyGraph build_envy_graph(const Instance& inst, const Allocation& alloc, const Scalar& eps,
                                  QueryCounter* counter = nullptr)
{
    if (sgn(eps) < 0) throw PreconditionError("envy graph slack must be non-negative");
    return EnvyGraph(compute_value_matrix(inst, alloc, counter).value, eps);
}

/// Unique maximal addable set: N minus everything reachable from the head
/// of some envy edge.  Sorted; empty when no addable set exists.
inline std::vector<AgentIndex> maximal_addable_set(const EnvyGraph& g)
{
    const std::size_t n = g.size();
    std::vector<bool> blocked(n, false);
    std::vector<bool> expanded(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (g.edge(i, j) != EdgeKind::Envy || expanded[j]) continue;
            expanded[j] = true;
            const auto reach = g.reachable_from(j);
            for (std::size_t v = 0; v < n; ++v)
                if (reach[v]) blocked[v] = true;
        }
    }
    std::vector<AgentIndex> out;
    for (std::size_t v = 0; v < n; ++v)
        if (!blocked[v]) out.push_back(v);
    return out;
}

/// Shortest cycle through the first envy edge (row-major order) that lies on
/// any cycle.  cycle[t] points to cycle[t+1]; the last points to the first.
inline std::optional<std::vector<AgentIndex>> find_envy_cycle(const EnvyGraph& g)
{
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (g.edge(i, j) != EdgeKind::Envy) continue;
            // BFS j ⇒ i for the shortest return path.
            std::vector<std::optional<AgentIndex>> parent(n);
            std::vector<bool> seen(n, false);
            std::deque<AgentIndex> queue{j};
            seen[j] = true;
            while (!queue.empty() && !seen[i]) {
                const AgentIndex u = queue.front();
                queue.pop_front();
                for (std::size_t v = 0; v < n; ++v) {
                    if (!seen[v] && g.has_edge(u, v)) {
                        seen[v] = true;
                        parent[v] = u;
                        queue.push_back(v);
                    }
                }
            }
            if (!seen[i]) continue;
            std::vector<AgentIndex> back; // i, ..., j
            for (AgentIndex v = i; v != j; v = *parent[v]) back.push_back(v);
            back.push_back(j);
            // back = i ← ... ← j reversed; the cycle is i → j → ... → i.
            std::vector<AgentIndex> cycle{i};
            for (auto it = back.rbegin(); it != back.rend(); ++it)
                if (*it != i) cycle.push_back(*it);
            return cycle;
        }
    }
    return std::nullopt;
}

/// Each agent on the cycle takes the bundle of the agent it points to.
inline Allocation eliminate_envy_cycle(Allocation alloc, const std::vector<AgentIndex>& cycle)
{
    if (cycle.size() < 2) return alloc;
    Bundle first = std::move(alloc.bundles[cycle.front()]);
    for (std::size_t t = 0; t + 1 < cycle.size(); ++t)
        alloc.bundles[cycle[t]] = std::move(alloc.bundles[cycle[t + 1]]);
    alloc.bundles[cycle.back()] = std::move(first);
    return alloc;
}

} // namespace mixfair

#endif // MIXFAIR_ENVY_GRAPH_HPP
