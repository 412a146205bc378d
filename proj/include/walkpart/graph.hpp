#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "walkpart/common.hpp"
#include "walkpart/rng.hpp"

namespace walkpart {

struct NormalizeOptions {
    bool repair_orphans = false;
};

struct LoadReport {
    std::uint64_t lines_read = 0;
    std::uint64_t edges_kept = 0;
    std::uint64_t self_loops_dropped = 0;
    std::uint64_t duplicates_dropped = 0;
    std::uint64_t orphans_repaired = 0;
    bool sink_added = false;
};

// Immutable undirected simple graph in CSR form. Vertex ids are dense
// 0..n-1; original ids from the input are kept in original_ids().
class Graph {
public:
    Graph() = default;

    // Edges must be deduplicated, loop-free, in canonical (u < v) form.
    Graph(VertexId n, std::vector<std::pair<VertexId, VertexId>> edges,
          std::vector<std::uint64_t> original_ids = {})
        : n_(n), m_(edges.size()), original_ids_(std::move(original_ids)) {
        if (original_ids_.empty()) {
            original_ids_.resize(n_);
            for (VertexId v = 0; v < n_; ++v) original_ids_[v] = v;
        }
        std::vector<std::uint32_t> deg(n_, 0);
        for (auto [u, v] : edges) {
            ++deg[u];
            ++deg[v];
        }
        offsets_.assign(n_ + 1, 0);
        for (VertexId v = 0; v < n_; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
        neighbors_.resize(2 * m_);
        std::vector<std::uint64_t> cursor(offsets_.begin(), offsets_.end() - 1);
        for (auto [u, v] : edges) {
            neighbors_[cursor[u]++] = v;
            neighbors_[cursor[v]++] = u;
        }
        for (VertexId v = 0; v < n_; ++v)
            std::sort(neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                      neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
    }

    VertexId vertex_count() const { return n_; }
    std::uint64_t edge_count() const { return m_; }

    std::span<const VertexId> neighbors(VertexId v) const {
        return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
    }
    std::uint32_t degree(VertexId v) const {
        return static_cast<std::uint32_t>(offsets_[v + 1] - offsets_[v]);
    }
    std::uint64_t degree_sum() const { return 2 * m_; }

    bool has_edge(VertexId u, VertexId v) const {
        auto nb = neighbors(u);
        return std::binary_search(nb.begin(), nb.end(), v);
    }

    const std::vector<std::uint64_t>& original_ids() const { return original_ids_; }

    // Canonical edge enumeration: (u, v) with u < v, ordered by (u, v).
    template <typename Fn>
    void for_each_edge(Fn&& fn) const {
        for (VertexId u = 0; u < n_; ++u)
            for (VertexId v : neighbors(u))
                if (u < v) fn(u, v);
    }

private:
    VertexId n_ = 0;
    std::uint64_t m_ = 0;
    std::vector<std::uint64_t> offsets_;
    std::vector<VertexId> neighbors_;
    std::vector<std::uint64_t> original_ids_;
};

namespace detail {

inline bool parse_edge_line(const std::string& line, std::uint64_t& a, std::uint64_t& b) {
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    };
    auto read_uint = [&](std::uint64_t& out) {
        if (i >= line.size() || line[i] < '0' || line[i] > '9') return false;
        out = 0;
        while (i < line.size() && line[i] >= '0' && line[i] <= '9')
            out = out * 10 + static_cast<std::uint64_t>(line[i++] - '0');
        return true;
    };
    skip_ws();
    if (!read_uint(a)) return false;
    skip_ws();
    if (!read_uint(b)) return false;
    skip_ws();
    return i == line.size();
}

inline bool blank_line(const std::string& line) {
    for (char c : line)
        if (c != ' ' && c != '\t' && c != '\r') return false;
    return true;
}

}  // namespace detail

// Reads whitespace-separated "u v" pairs, one edge per line; '#' starts a
// comment line. Self-loops and duplicate edges are dropped and counted.
// Ids are remapped to dense 0..n-1 in ascending original-id order. With
// repair_orphans set, ids that never appear in the source column get a
// shared synthetic sink neighbor appended as the last vertex.
inline Graph load_edge_list(std::istream& in, const NormalizeOptions& options,
                            LoadReport* report = nullptr) {
    LoadReport rep;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
    std::unordered_map<std::uint64_t, std::uint8_t> seen;  // bit0: as source, bit1: at all
    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        ++rep.lines_read;
        if (!line.empty() && line[0] == '#') continue;
        if (detail::blank_line(line)) continue;
        std::uint64_t a = 0, b = 0;
        if (!detail::parse_edge_line(line, a, b))
            throw ParseError("edge list parse error at line " + std::to_string(line_no));
        raw.emplace_back(a, b);
        seen[a] |= 0x3;
        seen[b] |= 0x2;
    }
    if (raw.empty()) throw ParseError("edge list is empty");

    std::vector<std::uint64_t> ids;
    ids.reserve(seen.size());
    for (auto& [id, flags] : seen) ids.push_back(id);
    std::sort(ids.begin(), ids.end());

    std::uint64_t sink_original = 0;
    std::vector<std::uint64_t> orphans;
    if (options.repair_orphans) {
        for (auto id : ids)
            if ((seen[id] & 0x1) == 0) orphans.push_back(id);
        if (!orphans.empty()) {
            sink_original = ids.back() + 1;
            ids.push_back(sink_original);
            rep.sink_added = true;
            rep.orphans_repaired = orphans.size();
        }
    }

    std::unordered_map<std::uint64_t, VertexId> remap;
    remap.reserve(ids.size());
    for (VertexId i = 0; i < ids.size(); ++i) remap[ids[i]] = i;

    std::vector<std::pair<VertexId, VertexId>> edges;
    edges.reserve(raw.size() + orphans.size());
    for (auto [a, b] : raw) {
        if (a == b) {
            ++rep.self_loops_dropped;
            continue;
        }
        VertexId u = remap[a], v = remap[b];
        if (u > v) std::swap(u, v);
        edges.emplace_back(u, v);
    }
    for (auto id : orphans) edges.emplace_back(remap[id], remap[sink_original]);

    std::sort(edges.begin(), edges.end());
    auto last = std::unique(edges.begin(), edges.end());
    rep.duplicates_dropped = static_cast<std::uint64_t>(edges.end() - last);
    edges.erase(last, edges.end());
    rep.edges_kept = edges.size();
    if (report) *report = rep;
    return Graph(static_cast<VertexId>(ids.size()), std::move(edges), std::move(ids));
}

// Canonical edge-list output using original ids; reloading yields an
// identical adjacency structure.
inline void write_edge_list(const Graph& g, std::ostream& out) {
    const auto& ids = g.original_ids();
    g.for_each_edge([&](VertexId u, VertexId v) {
        out << ids[u] << ' ' << ids[v] << '\n';
    });
}

inline void write_load_report(const LoadReport& rep, std::ostream& out) {
    out << "lines_read " << rep.lines_read << '\n'
        << "edges_kept " << rep.edges_kept << '\n'
        << "self_loops_dropped " << rep.self_loops_dropped << '\n'
        << "duplicates_dropped " << rep.duplicates_dropped << '\n'
        << "orphans_repaired " << rep.orphans_repaired << '\n'
        << "sink_added " << (rep.sink_added ? 1 : 0) << '\n';
}

struct ComponentLabeling {
    std::vector<std::int32_t> component_id;  // -1 for vertices outside the subset
    std::uint32_t component_count = 0;
};

// Connected components; with a subset only edges internal to the subset
// count. Labels are assigned in ascending order of the smallest vertex id
// in each component.
inline ComponentLabeling connected_components(const Graph& g,
                                              const std::vector<VertexId>* restrict_to = nullptr) {
    const VertexId n = g.vertex_count();
    ComponentLabeling out;
    out.component_id.assign(n, -1);
    std::vector<char> in_subset;
    if (restrict_to) {
        in_subset.assign(n, 0);
        for (VertexId v : *restrict_to) in_subset[v] = 1;
    }
    auto member = [&](VertexId v) { return !restrict_to || in_subset[v]; };
    std::vector<VertexId> stack;
    std::int32_t next_label = 0;
    for (VertexId s = 0; s < n; ++s) {
        if (!member(s) || out.component_id[s] != -1) continue;
        out.component_id[s] = next_label;
        stack.push_back(s);
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            for (VertexId u : g.neighbors(v)) {
                if (member(u) && out.component_id[u] == -1) {
                    out.component_id[u] = next_label;
                    stack.push_back(u);
                }
            }
        }
        ++next_label;
    }
    out.component_count = static_cast<std::uint32_t>(next_label);
    return out;
}

inline bool is_bipartite(const Graph& g) {
    const VertexId n = g.vertex_count();
    std::vector<std::int8_t> color(n, -1);
    std::vector<VertexId> stack;
    for (VertexId s = 0; s < n; ++s) {
        if (color[s] != -1) continue;
        color[s] = 0;
        stack.push_back(s);
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            for (VertexId u : g.neighbors(v)) {
                if (color[u] == -1) {
                    color[u] = static_cast<std::int8_t>(1 - color[v]);
                    stack.push_back(u);
                } else if (color[u] == color[v]) {
                    return false;
                }
            }
        }
    }
    return true;
}

// Synthetic graph generator. Produces a connected simple graph with
// n >= edges_per_new_vertex + 1 >= 2 vertices: an initial clique of
// edges_per_new_vertex + 1 vertices, then each new vertex adds exactly
// edges_per_new_vertex distinct edges, so
// m = C(c, 2) + (n - c) * edges_per_new_vertex with c = epnv + 1.
//
// Attachment targets model a social graph: vertices live in up to 20
// equal communities arranged on a ring; most edges pick a uniform member
// of the vertex's own community, while a fraction crosses to the one- or
// two-step ring predecessor, preferentially landing on "gateway" vertices
// that already receive cross traffic. Gateways acquire heavy-tailed
// degrees and mislead degree-guided growth the way crawl hubs do.
inline Graph generate_power_law(VertexId n, std::uint32_t edges_per_new_vertex,
                                std::uint64_t rng_seed) {
    const std::uint32_t epnv = edges_per_new_vertex;
    if (epnv < 1 || n < epnv + 1)
        throw ValidationError("generate_power_law requires n >= edges_per_new_vertex + 1 >= 2");
    const VertexId c = epnv + 1;

    const std::uint32_t nblocks =
        std::max<std::uint32_t>(1, std::min<std::uint32_t>(20, (n + 25) / 50));
    const VertexId base = n / nblocks;
    auto block_of = [&](VertexId v) {
        return std::min<std::uint32_t>(v / std::max<VertexId>(base, 1), nblocks - 1);
    };
    constexpr double kMix = 0.12;
    constexpr double kGatewayBias = 0.8;

    Rng rng(rng_seed);
    std::vector<std::pair<VertexId, VertexId>> edges;
    edges.reserve(static_cast<std::size_t>(c) * (c - 1) / 2 +
                  static_cast<std::size_t>(n - c) * epnv);
    std::vector<std::vector<VertexId>> adj(n);
    auto connected = [&](VertexId a, VertexId b) {
        const auto& nb = adj[a].size() <= adj[b].size() ? adj[a] : adj[b];
        VertexId other = adj[a].size() <= adj[b].size() ? b : a;
        return std::find(nb.begin(), nb.end(), other) != nb.end();
    };
    auto add_edge = [&](VertexId a, VertexId b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
        edges.emplace_back(std::min(a, b), std::max(a, b));
    };

    std::vector<VertexId> global_ends;  // one entry per edge endpoint
    std::vector<std::vector<VertexId>> flat(nblocks);   // uniform pools
    std::vector<std::vector<VertexId>> gates(nblocks);  // cross-traffic receivers

    for (VertexId i = 0; i < c; ++i) {
        for (VertexId j = i + 1; j < c; ++j) {
            add_edge(i, j);
            global_ends.push_back(i);
            global_ends.push_back(j);
        }
        flat[0].push_back(i);
    }

    for (VertexId v = c; v < n; ++v) {
        const std::uint32_t b = block_of(v);
        std::uint32_t added = 0;
        std::uint32_t guard = 0;
        while (added < epnv) {
            ++guard;
            VertexId u;
            bool cross = false;
            if (guard > 50 * epnv || flat[b].empty()) {
                u = global_ends[rng.next_below(global_ends.size())];
            } else if (rng.next_double() < kMix) {
                const std::uint32_t dist = rng.next_double() < 0.5 ? 2 : 1;
                const std::uint32_t partner = (b + nblocks - dist % nblocks) % nblocks;
                const auto& gate = gates[partner];
                const auto& pool = (!gate.empty() && rng.next_double() < kGatewayBias)
                                       ? gate
                                       : flat[partner];
                if (pool.empty())
                    u = global_ends[rng.next_below(global_ends.size())];
                else
                    u = pool[rng.next_below(pool.size())];
                cross = true;
            } else {
                u = flat[b][rng.next_below(flat[b].size())];
            }
            if (u == v || connected(u, v)) continue;
            add_edge(v, u);
            global_ends.push_back(u);
            if (cross && block_of(u) != b) gates[block_of(u)].push_back(u);
            ++added;
        }
        for (std::uint32_t i = 0; i < epnv; ++i) global_ends.push_back(v);
        flat[b].push_back(v);
    }

    std::sort(edges.begin(), edges.end());
    return Graph(n, std::move(edges));
}

}  // namespace walkpart
