#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "walkpart/common.hpp"
#include "walkpart/graph.hpp"
#include "walkpart/rng.hpp"

namespace walkpart {

enum class Algorithm { Bfs, Ldfs, Balance, VertexCut, RandomHash };

inline const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Bfs: return "bfs";
        case Algorithm::Ldfs: return "ldfs";
        case Algorithm::Balance: return "balance";
        case Algorithm::VertexCut: return "vertexcut";
        case Algorithm::RandomHash: return "random";
    }
    return "?";
}

inline std::optional<Algorithm> parse_algorithm(const std::string& name) {
    if (name == "bfs") return Algorithm::Bfs;
    if (name == "ldfs") return Algorithm::Ldfs;
    if (name == "balance") return Algorithm::Balance;
    if (name == "vertexcut") return Algorithm::VertexCut;
    if (name == "random") return Algorithm::RandomHash;
    return std::nullopt;
}

struct PartitionConfig {
    Algorithm algorithm = Algorithm::Bfs;
    std::uint32_t k = 2;
    std::uint64_t seed = 0;
};

using Edge = std::pair<VertexId, VertexId>;  // canonical: first < second

struct Partition {
    std::vector<VertexId> members;  // sorted; replicas appear in several partitions
    std::vector<Edge> owned_edges;  // sorted canonical pairs
};

// The k partitions plus replica bookkeeping. Every edge of the graph is
// owned by exactly one partition; a vertex with replication(v) >= 2 is a
// cut vertex present in several member lists.
struct PartitionSet {
    std::uint32_t k = 0;
    std::vector<Partition> parts;
    std::vector<std::vector<PartitionId>> memberships;  // per vertex, ascending
    std::vector<std::uint32_t> replication;             // NR(v)

    std::string algorithm;
    std::uint64_t seed = 0;
    double build_time_s = 0.0;
    std::uint32_t leftover_components = 0;

    std::uint64_t member_total() const {  // N = sum of N_i
        std::uint64_t t = 0;
        for (const auto& p : parts) t += p.members.size();
        return t;
    }
    std::uint64_t owned_total() const {
        std::uint64_t t = 0;
        for (const auto& p : parts) t += p.owned_edges.size();
        return t;
    }
    bool is_member(PartitionId i, VertexId v) const {
        const auto& ms = memberships[v];
        return std::find(ms.begin(), ms.end(), i) != ms.end();
    }
    bool has_replicas() const {
        for (auto r : replication)
            if (r >= 2) return true;
        return false;
    }
};

// Scans vertices in descending degree (ties by ascending id) and keeps
// any vertex not adjacent to an already chosen seed. Fails when the greedy
// scan cannot reach k seeds, e.g. on complete graphs.
inline std::vector<VertexId> select_seeds(const Graph& g, std::uint32_t k) {
    if (k < 2) throw ValidationError("seed selection requires k >= 2");
    const VertexId n = g.vertex_count();
    std::vector<VertexId> order(n);
    for (VertexId v = 0; v < n; ++v) order[v] = v;
    std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) {
        if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
        return a < b;
    });
    std::vector<char> forbidden(n, 0);
    std::vector<VertexId> seeds;
    for (VertexId v : order) {
        if (forbidden[v]) continue;
        seeds.push_back(v);
        if (seeds.size() == k) return seeds;
        forbidden[v] = 1;
        for (VertexId u : g.neighbors(v)) forbidden[u] = 1;
    }
    throw ValidationError("found only " + std::to_string(seeds.size()) + " of " +
                          std::to_string(k) + " pairwise non-adjacent seeds");
}

namespace detail {

// Max-heap entry ordered by degree descending, vertex id ascending.
struct DegreeOrder {
    std::uint32_t degree;
    VertexId vertex;
    bool operator<(const DegreeOrder& o) const {
        if (degree != o.degree) return degree < o.degree;
        return vertex > o.vertex;
    }
};

inline std::uint64_t edge_key(VertexId u, VertexId v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

// Unreachable vertices are handed to the currently smallest partition one
// whole component at a time, in ascending order of smallest contained id.
inline std::uint32_t assign_leftovers(const Graph& g, std::vector<std::int32_t>& home,
                                      std::uint32_t k) {
    const VertexId n = g.vertex_count();
    std::vector<std::uint64_t> sizes(k, 0);
    for (VertexId v = 0; v < n; ++v)
        if (home[v] >= 0) ++sizes[static_cast<std::uint32_t>(home[v])];
    std::uint32_t components = 0;
    std::vector<VertexId> stack, comp;
    std::vector<char> seen(n, 0);
    for (VertexId s = 0; s < n; ++s) {
        if (home[s] >= 0 || seen[s]) continue;
        ++components;
        comp.clear();
        stack.push_back(s);
        seen[s] = 1;
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (VertexId u : g.neighbors(v)) {
                if (home[u] < 0 && !seen[u]) {
                    seen[u] = 1;
                    stack.push_back(u);
                }
            }
        }
        std::uint32_t target = 0;
        for (std::uint32_t i = 1; i < k; ++i)
            if (sizes[i] < sizes[target]) target = i;
        for (VertexId v : comp) home[v] = static_cast<std::int32_t>(target);
        sizes[target] += comp.size();
    }
    return components;
}

// Shared finish for the single-membership algorithms: an edge inside one
// partition is owned there, a cross edge by the lower-indexed endpoint
// partition.
inline PartitionSet from_home(const Graph& g, const std::vector<std::int32_t>& home,
                              std::uint32_t k) {
    PartitionSet ps;
    ps.k = k;
    ps.parts.resize(k);
    const VertexId n = g.vertex_count();
    ps.memberships.resize(n);
    ps.replication.assign(n, 1);
    for (VertexId v = 0; v < n; ++v) {
        auto h = static_cast<PartitionId>(home[v]);
        ps.parts[h].members.push_back(v);
        ps.memberships[v].push_back(h);
    }
    g.for_each_edge([&](VertexId u, VertexId v) {
        auto hu = static_cast<PartitionId>(home[u]);
        auto hv = static_cast<PartitionId>(home[v]);
        ps.parts[std::min(hu, hv)].owned_edges.emplace_back(u, v);
    });
    return ps;
}

}  // namespace detail

// Algorithm 1 style growth: in its turn a partition absorbs every still
// unassigned neighbor of its current members.
inline PartitionSet partition_bfs(const Graph& g, const PartitionConfig& cfg) {
    const VertexId n = g.vertex_count();
    auto seeds = select_seeds(g, cfg.k);
    std::vector<std::int32_t> home(n, -1);
    std::vector<std::vector<VertexId>> frontier(cfg.k);
    for (std::uint32_t i = 0; i < cfg.k; ++i) {
        home[seeds[i]] = static_cast<std::int32_t>(i);
        frontier[i].push_back(seeds[i]);
    }
    std::uint64_t assigned = cfg.k;
    std::uint32_t leftovers = 0;
    while (assigned < n) {
        bool progress = false;
        for (std::uint32_t i = 0; i < cfg.k; ++i) {
            std::vector<VertexId> grabbed;
            for (VertexId v : frontier[i]) {
                for (VertexId u : g.neighbors(v)) {
                    if (home[u] < 0) {
                        home[u] = static_cast<std::int32_t>(i);
                        grabbed.push_back(u);
                    }
                }
            }
            if (!grabbed.empty()) {
                progress = true;
                assigned += grabbed.size();
            }
            frontier[i] = std::move(grabbed);
        }
        if (!progress) {
            leftovers = detail::assign_leftovers(g, home, cfg.k);
            break;
        }
    }
    auto ps = detail::from_home(g, home, cfg.k);
    ps.leftover_components = leftovers;
    return ps;
}

// Algorithm 2 style growth: repeatedly take the largest-degree unassigned
// vertex adjacent to any partition and merge it into the partition of its
// largest-degree assigned neighbor (ties: lower partition index).
inline PartitionSet partition_ldfs(const Graph& g, const PartitionConfig& cfg) {
    const VertexId n = g.vertex_count();
    auto seeds = select_seeds(g, cfg.k);
    std::vector<std::int32_t> home(n, -1);
    std::priority_queue<detail::DegreeOrder> heap;
    std::vector<char> queued(n, 0);
    auto arm = [&](VertexId v) {
        for (VertexId u : g.neighbors(v)) {
            if (home[u] < 0 && !queued[u]) {
                queued[u] = 1;
                heap.push({g.degree(u), u});
            }
        }
    };
    for (std::uint32_t i = 0; i < cfg.k; ++i) home[seeds[i]] = static_cast<std::int32_t>(i);
    for (VertexId s : seeds) arm(s);
    while (!heap.empty()) {
        VertexId v = heap.top().vertex;
        heap.pop();
        if (home[v] >= 0) continue;
        std::int32_t best_part = -1;
        std::uint32_t best_deg = 0;
        for (VertexId u : g.neighbors(v)) {
            if (home[u] < 0) continue;
            if (best_part < 0 || g.degree(u) > best_deg ||
                (g.degree(u) == best_deg && home[u] < best_part)) {
                best_deg = g.degree(u);
                best_part = home[u];
            }
        }
        if (best_part < 0) continue;
        home[v] = best_part;
        arm(v);
    }
    std::uint32_t leftovers = 0;
    for (VertexId v = 0; v < n; ++v)
        if (home[v] < 0) {
            leftovers = detail::assign_leftovers(g, home, cfg.k);
            break;
        }
    auto ps = detail::from_home(g, home, cfg.k);
    ps.leftover_components = leftovers;
    return ps;
}

// Algorithm 3 style growth: round-robin, one merge per turn, each partition
// taking its largest-degree unassigned neighbor (ties: lowest id).
inline PartitionSet partition_balance(const Graph& g, const PartitionConfig& cfg) {
    const VertexId n = g.vertex_count();
    auto seeds = select_seeds(g, cfg.k);
    std::vector<std::int32_t> home(n, -1);
    std::vector<std::priority_queue<detail::DegreeOrder>> heaps(cfg.k);
    auto arm = [&](std::uint32_t i, VertexId v) {
        for (VertexId u : g.neighbors(v))
            if (home[u] < 0) heaps[i].push({g.degree(u), u});
    };
    for (std::uint32_t i = 0; i < cfg.k; ++i) {
        home[seeds[i]] = static_cast<std::int32_t>(i);
        arm(i, seeds[i]);
    }
    std::uint64_t assigned = cfg.k;
    bool active = true;
    while (active && assigned < n) {
        active = false;
        for (std::uint32_t i = 0; i < cfg.k; ++i) {
            VertexId got = kInvalidVertex;
            while (!heaps[i].empty()) {
                VertexId v = heaps[i].top().vertex;
                heaps[i].pop();
                if (home[v] < 0) {
                    got = v;
                    break;
                }
            }
            if (got == kInvalidVertex) continue;
            home[got] = static_cast<std::int32_t>(i);
            ++assigned;
            arm(i, got);
            active = true;
        }
    }
    std::uint32_t leftovers = 0;
    if (assigned < n) leftovers = detail::assign_leftovers(g, home, cfg.k);
    auto ps = detail::from_home(g, home, cfg.k);
    ps.leftover_components = leftovers;
    return ps;
}

// Algorithm 4 style growth: like the balance variant, but the frontier also
// holds vertices already assigned elsewhere. Taking one of those cuts it:
// a replica joins this partition and receives ownership of its edges to
// current members that no partition owns yet. A cut that would transfer
// fewer than two edges is skipped, which keeps replicas connected to their
// partition and stops runaway boundary cutting.
inline PartitionSet partition_vertexcut(const Graph& g, const PartitionConfig& cfg) {
    const VertexId n = g.vertex_count();
    const std::uint32_t k = cfg.k;
    auto seeds = select_seeds(g, k);

    PartitionSet ps;
    ps.k = k;
    ps.parts.resize(k);
    ps.memberships.resize(n);
    ps.replication.assign(n, 0);

    std::vector<std::vector<char>> is_member(k, std::vector<char>(n, 0));
    std::vector<std::vector<char>> in_front(k, std::vector<char>(n, 0));
    std::vector<std::priority_queue<detail::DegreeOrder>> heaps(k);
    std::unordered_map<std::uint64_t, std::uint32_t> owner;
    owner.reserve(g.edge_count() * 2);

    auto add_frontier = [&](std::uint32_t i, VertexId v) {
        if (!is_member[i][v] && !in_front[i][v]) {
            in_front[i][v] = 1;
            heaps[i].push({g.degree(v), v});
        }
    };
    auto add_member = [&](std::uint32_t i, VertexId v) {
        is_member[i][v] = 1;
        ps.parts[i].members.push_back(v);
        ps.memberships[v].push_back(static_cast<PartitionId>(i));
        ++ps.replication[v];
    };
    auto transfer_edges = [&](std::uint32_t i, VertexId v) {
        for (VertexId u : g.neighbors(v)) {
            if (!is_member[i][u] || u == v) continue;
            auto key = detail::edge_key(u, v);
            if (owner.emplace(key, i).second)
                ps.parts[i].owned_edges.emplace_back(std::min(u, v), std::max(u, v));
        }
    };

    std::uint64_t unassigned = n;
    for (std::uint32_t i = 0; i < k; ++i) {
        add_member(i, seeds[i]);
        --unassigned;
        for (VertexId u : g.neighbors(seeds[i])) add_frontier(i, u);
    }

    bool active = true;
    while (unassigned > 0 && active) {
        active = false;
        for (std::uint32_t i = 0; i < k; ++i) {
            VertexId got = kInvalidVertex;
            while (!heaps[i].empty()) {
                VertexId v = heaps[i].top().vertex;
                heaps[i].pop();
                if (!in_front[i][v]) continue;
                if (is_member[i][v]) {
                    in_front[i][v] = 0;
                    continue;
                }
                if (ps.replication[v] > 0) {
                    std::uint32_t transferable = 0;
                    for (VertexId u : g.neighbors(v)) {
                        if (is_member[i][u] && !owner.count(detail::edge_key(u, v)) &&
                            ++transferable >= 2)
                            break;
                    }
                    if (transferable < 2) {
                        in_front[i][v] = 0;  // may re-enter when new members touch it
                        continue;
                    }
                }
                got = v;
                in_front[i][v] = 0;
                break;
            }
            if (got == kInvalidVertex) continue;
            active = true;
            VertexId v = got;
            if (ps.replication[v] == 0) {
                add_member(i, v);
                --unassigned;
                transfer_edges(i, v);
                for (VertexId u : g.neighbors(v)) add_frontier(i, u);
            } else {
                auto prev = ps.memberships[v];  // copy before the cut
                add_member(i, v);
                transfer_edges(i, v);
                for (VertexId u : g.neighbors(v))
                    if (ps.replication[u] == 0) add_frontier(i, u);
                for (PartitionId q : prev) {
                    if (q == i) continue;
                    for (VertexId u : g.neighbors(v))
                        if (is_member[i][u] && in_front[q][u]) in_front[q][u] = 0;
                }
            }
        }
    }

    if (unassigned > 0) {
        std::vector<std::int32_t> home(n, -1);
        for (VertexId v = 0; v < n; ++v)
            if (!ps.memberships[v].empty())
                home[v] = static_cast<std::int32_t>(ps.memberships[v][0]);
        ps.leftover_components = detail::assign_leftovers(g, home, k);
        for (VertexId v = 0; v < n; ++v) {
            if (ps.replication[v] == 0) {
                auto i = static_cast<std::uint32_t>(home[v]);
                add_member(i, v);
                transfer_edges(i, v);
            }
        }
    }

    // Edges whose endpoints never became co-resident: owned by the lowest
    // partition index among the endpoints' memberships.
    g.for_each_edge([&](VertexId u, VertexId v) {
        auto key = detail::edge_key(u, v);
        if (owner.count(key)) return;
        PartitionId best = ps.memberships[u][0];
        if (ps.memberships[v][0] < best) best = ps.memberships[v][0];
        owner.emplace(key, best);
        ps.parts[best].owned_edges.emplace_back(u, v);
    });

    for (auto& part : ps.parts) {
        std::sort(part.members.begin(), part.members.end());
        std::sort(part.owned_edges.begin(), part.owned_edges.end());
    }
    for (auto& ms : ps.memberships) std::sort(ms.begin(), ms.end());
    return ps;
}

// Uniform random assignment, the baseline the greedy algorithms are
// measured against.
inline PartitionSet partition_random_hash(const Graph& g, const PartitionConfig& cfg) {
    if (cfg.k < 2) throw ValidationError("random hash requires k >= 2");
    const VertexId n = g.vertex_count();
    Rng rng(cfg.seed);
    std::vector<std::int32_t> home(n);
    for (VertexId v = 0; v < n; ++v)
        home[v] = static_cast<std::int32_t>(rng.next_below(cfg.k));
    return detail::from_home(g, home, cfg.k);
}

inline void validate_partition_set(const Graph& g, const PartitionSet& ps) {
    const VertexId n = g.vertex_count();
    if (ps.memberships.size() != n || ps.replication.size() != n)
        throw IntegrityError("partition set vertex bookkeeping does not match the graph");
    for (VertexId v = 0; v < n; ++v) {
        if (ps.memberships[v].empty())
            throw IntegrityError("vertex " + std::to_string(v) + " is in no partition");
        if (ps.memberships[v].size() != ps.replication[v])
            throw IntegrityError("replication count mismatch at vertex " + std::to_string(v));
    }
    if (ps.owned_total() != g.edge_count())
        throw IntegrityError("owned edge totals do not cover the graph exactly");
    std::vector<std::uint64_t> incident(n, 0);
    std::uint64_t members_sum = 0;
    for (std::uint32_t i = 0; i < ps.k; ++i) {
        members_sum += ps.parts[i].members.size();
        for (auto [u, v] : ps.parts[i].owned_edges) {
            if (u >= n || v >= n || u >= v)
                throw IntegrityError("malformed owned edge in partition " + std::to_string(i));
            if (!g.has_edge(u, v))
                throw IntegrityError("owned edge (" + std::to_string(u) + "," +
                                     std::to_string(v) + ") is not a graph edge");
            ++incident[u];
            ++incident[v];
        }
    }
    std::uint64_t nr_sum = 0;
    for (VertexId v = 0; v < n; ++v) nr_sum += ps.replication[v];
    if (members_sum != nr_sum)
        throw IntegrityError("sum of partition sizes disagrees with replication counts");
    for (VertexId v = 0; v < n; ++v)
        if (incident[v] != g.degree(v))
            throw IntegrityError("edge ownership does not split the degree of vertex " +
                                 std::to_string(v));
}

// Runs the configured algorithm and stamps provenance, timing the
// partitioning call only.
inline PartitionSet partition(const Graph& g, const PartitionConfig& cfg) {
    if (cfg.k < 2) throw ValidationError("k must be at least 2");
    if (cfg.k > g.vertex_count()) throw ValidationError("k must not exceed the vertex count");
    const auto t0 = std::chrono::steady_clock::now();
    PartitionSet ps;
    switch (cfg.algorithm) {
        case Algorithm::Bfs: ps = partition_bfs(g, cfg); break;
        case Algorithm::Ldfs: ps = partition_ldfs(g, cfg); break;
        case Algorithm::Balance: ps = partition_balance(g, cfg); break;
        case Algorithm::VertexCut: ps = partition_vertexcut(g, cfg); break;
        case Algorithm::RandomHash: ps = partition_random_hash(g, cfg); break;
    }
    const auto t1 = std::chrono::steady_clock::now();
    ps.algorithm = algorithm_name(cfg.algorithm);
    ps.seed = cfg.seed;
    ps.build_time_s = std::chrono::duration<double>(t1 - t0).count();
    validate_partition_set(g, ps);
    return ps;
}

}  // namespace walkpart
