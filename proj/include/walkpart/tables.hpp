#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "walkpart/common.hpp"
#include "walkpart/graph.hpp"
#include "walkpart/partition.hpp"

namespace walkpart {

// One row of a vertex-neighbor table: the neighbors reachable through this
// partition's owned edges (NoP) and the rest of the vertex's neighbors,
// resident elsewhere (NoOP). Their union is always the full adjacency list.
struct MemberRecord {
    VertexId vertex = 0;
    bool is_replica = false;
    std::vector<VertexId> nop;
    std::vector<VertexId> noop;

    std::uint32_t degree() const {
        return static_cast<std::uint32_t>(nop.size() + noop.size());
    }
    VertexId neighbor_at(std::uint32_t j) const {
        return j < nop.size() ? nop[j] : noop[j - nop.size()];
    }
};

// The walk engine's only view of a partitioning: per-partition
// vertex-neighbor tables plus the vertex-partition table.
struct PartitionTables {
    std::uint32_t k = 0;
    VertexId n = 0;
    std::vector<std::vector<MemberRecord>> parts;            // sorted by vertex id
    std::vector<std::vector<PartitionId>> vertex_partitions;  // ascending
    std::vector<std::uint64_t> owned_edge_count;              // Ne(Pa_i)

    std::string algorithm;
    std::uint64_t seed = 0;
    std::uint64_t edge_total = 0;
    std::uint32_t leftover_components = 0;

    bool is_member(PartitionId i, VertexId v) const {
        const auto& ms = vertex_partitions[v];
        return std::find(ms.begin(), ms.end(), i) != ms.end();
    }
    const MemberRecord& record(PartitionId i, VertexId v) const {
        const auto& rows = parts[i];
        auto it = std::lower_bound(rows.begin(), rows.end(), v,
                                   [](const MemberRecord& r, VertexId x) { return r.vertex < x; });
        if (it == rows.end() || it->vertex != v)
            throw IntegrityError("vertex " + std::to_string(v) + " has no record in partition " +
                                 std::to_string(i));
        return *it;
    }
};

inline PartitionTables build_tables(const Graph& g, const PartitionSet& ps) {
    validate_partition_set(g, ps);
    PartitionTables t;
    t.k = ps.k;
    t.n = g.vertex_count();
    t.algorithm = ps.algorithm;
    t.seed = ps.seed;
    t.edge_total = g.edge_count();
    t.leftover_components = ps.leftover_components;
    t.vertex_partitions = ps.memberships;
    t.parts.resize(ps.k);
    t.owned_edge_count.resize(ps.k);

    for (std::uint32_t i = 0; i < ps.k; ++i) {
        t.owned_edge_count[i] = ps.parts[i].owned_edges.size();
        auto& rows = t.parts[i];
        rows.resize(ps.parts[i].members.size());
        std::unordered_map<VertexId, std::size_t> index;
        index.reserve(rows.size() * 2);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            VertexId v = ps.parts[i].members[r];
            rows[r].vertex = v;
            rows[r].is_replica = ps.replication[v] >= 2;
            index.emplace(v, r);
        }
        for (auto [u, v] : ps.parts[i].owned_edges) {
            if (auto it = index.find(u); it != index.end()) rows[it->second].nop.push_back(v);
            if (auto it = index.find(v); it != index.end()) rows[it->second].nop.push_back(u);
        }
        for (auto& row : rows) {
            std::sort(row.nop.begin(), row.nop.end());
            auto nb = g.neighbors(row.vertex);
            row.noop.clear();
            std::set_difference(nb.begin(), nb.end(), row.nop.begin(), row.nop.end(),
                                std::back_inserter(row.noop));
            if (row.degree() != g.degree(row.vertex))
                throw IntegrityError("neighbor table row for vertex " +
                                     std::to_string(row.vertex) + " in partition " +
                                     std::to_string(i) + " does not cover its adjacency");
        }
    }
    return t;
}

// --- partition file format -------------------------------------------------
//
//   # walkpart partition v1
//   algorithm <name>
//   k <int>
//   seed <uint64>
//   n <int>
//   m <int>
//   leftover_components <int>
//   records <int>
//   begin
//   <partition> <vertex> <replica 0|1> | <NoP ids...> | <NoOP ids...>
//   ...
//   end
//
// Vertex ids in the file are the graph's original ids; the reader maps them
// back through the graph it is given. Round-trips losslessly.

inline void write_partition_file(const Graph& g, const PartitionSet& ps,
                                 const PartitionTables& t, std::ostream& out) {
    const auto& ids = g.original_ids();
    std::uint64_t records = 0;
    for (const auto& rows : t.parts) records += rows.size();
    out << "# walkpart partition v1\n";
    out << "algorithm " << ps.algorithm << '\n';
    out << "k " << t.k << '\n';
    out << "seed " << ps.seed << '\n';
    out << "n " << t.n << '\n';
    out << "m " << t.edge_total << '\n';
    out << "leftover_components " << t.leftover_components << '\n';
    out << "records " << records << '\n';
    out << "begin\n";
    for (std::uint32_t i = 0; i < t.k; ++i) {
        for (const auto& row : t.parts[i]) {
            out << i << ' ' << ids[row.vertex] << ' ' << (row.is_replica ? 1 : 0) << " |";
            for (VertexId u : row.nop) out << ' ' << ids[u];
            out << " |";
            for (VertexId u : row.noop) out << ' ' << ids[u];
            out << '\n';
        }
    }
    out << "end\n";
}

// Reconstructs the PartitionSet encoded in a partition file. Membership
// comes from the records, edge ownership from the NoP lists.
inline PartitionSet read_partition_file(const Graph& g, std::istream& in) {
    std::unordered_map<std::uint64_t, VertexId> remap;
    remap.reserve(g.vertex_count() * 2);
    for (VertexId v = 0; v < g.vertex_count(); ++v) remap.emplace(g.original_ids()[v], v);

    PartitionSet ps;
    ps.memberships.resize(g.vertex_count());
    ps.replication.assign(g.vertex_count(), 0);
    std::string line;
    std::uint64_t declared_records = 0;
    bool in_records = false;
    std::uint64_t line_no = 0;
    std::uint64_t seen_records = 0;

    auto lookup = [&](std::uint64_t original) {
        auto it = remap.find(original);
        if (it == remap.end())
            throw ParseError("partition file references unknown vertex id " +
                             std::to_string(original) + " at line " + std::to_string(line_no));
        return it->second;
    };

    std::vector<std::vector<char>> member_flags;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!in_records) {
            std::istringstream ls(line);
            std::string key;
            ls >> key;
            if (key == "algorithm") {
                ls >> ps.algorithm;
            } else if (key == "k") {
                std::uint32_t k = 0;
                ls >> k;
                if (k < 1) throw ParseError("invalid k in partition file");
                ps.k = k;
                ps.parts.resize(k);
                member_flags.assign(k, std::vector<char>(g.vertex_count(), 0));
            } else if (key == "seed") {
                ls >> ps.seed;
            } else if (key == "n") {
                std::uint64_t n = 0;
                ls >> n;
                if (n != g.vertex_count())
                    throw ParseError("partition file is for a graph with " + std::to_string(n) +
                                     " vertices, not " + std::to_string(g.vertex_count()));
            } else if (key == "m") {
                std::uint64_t m = 0;
                ls >> m;
                if (m != g.edge_count())
                    throw ParseError("partition file edge count mismatch");
            } else if (key == "leftover_components") {
                ls >> ps.leftover_components;
            } else if (key == "records") {
                ls >> declared_records;
            } else if (key == "begin") {
                if (ps.k == 0) throw ParseError("partition file is missing its k header");
                in_records = true;
            } else {
                throw ParseError("unknown partition file header '" + key + "' at line " +
                                 std::to_string(line_no));
            }
            continue;
        }
        if (line == "end") {
            in_records = false;
            continue;
        }
        std::istringstream ls(line);
        std::uint32_t pid = 0;
        std::uint64_t orig = 0;
        int replica = 0;
        std::string bar;
        if (!(ls >> pid >> orig >> replica >> bar) || bar != "|" || pid >= ps.k)
            throw ParseError("malformed partition record at line " + std::to_string(line_no));
        VertexId v = lookup(orig);
        if (member_flags[pid][v])
            throw ParseError("duplicate record for vertex " + std::to_string(orig) +
                             " in partition " + std::to_string(pid));
        member_flags[pid][v] = 1;
        ps.parts[pid].members.push_back(v);
        ps.memberships[v].push_back(pid);
        ++ps.replication[v];
        ++seen_records;
        std::string tok;
        bool in_noop = false;
        while (ls >> tok) {
            if (tok == "|") {
                if (in_noop) throw ParseError("too many sections at line " + std::to_string(line_no));
                in_noop = true;
                continue;
            }
            VertexId u = lookup(std::stoull(tok));
            if (!in_noop) {
                // NoP entries at the lexicographically first endpoint record
                // define ownership; the partner record repeats them.
                if (v < u || !member_flags[pid][u])
                    ps.parts[pid].owned_edges.emplace_back(std::min(u, v), std::max(u, v));
            }
        }
        if (!in_noop) throw ParseError("missing NoOP section at line " + std::to_string(line_no));
    }
    if (declared_records != seen_records)
        throw ParseError("partition file declared " + std::to_string(declared_records) +
                         " records but contains " + std::to_string(seen_records));
    for (auto& part : ps.parts) {
        std::sort(part.members.begin(), part.members.end());
        std::sort(part.owned_edges.begin(), part.owned_edges.end());
        part.owned_edges.erase(std::unique(part.owned_edges.begin(), part.owned_edges.end()),
                               part.owned_edges.end());
    }
    for (auto& ms : ps.memberships) std::sort(ms.begin(), ms.end());
    validate_partition_set(g, ps);
    return ps;
}

}  // namespace walkpart
