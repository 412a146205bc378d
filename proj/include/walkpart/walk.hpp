#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <thread>
#include <vector>

#include "walkpart/common.hpp"
#include "walkpart/graph.hpp"
#include "walkpart/rng.hpp"
#include "walkpart/tables.hpp"

namespace walkpart {

struct StationaryDistribution {
    std::vector<double> pi;  // d(j) / sum_f d(f)
    bool bipartite = false;  // the pointwise limit of Eq-style convergence needs non-bipartite
};

inline StationaryDistribution stationary_distribution(const Graph& g) {
    if (g.vertex_count() == 0) throw ValidationError("stationary distribution of an empty graph");
    StationaryDistribution out;
    out.pi.resize(g.vertex_count());
    const double sum_deg = static_cast<double>(g.degree_sum());
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        out.pi[v] = g.degree(v) / sum_deg;
    out.bipartite = is_bipartite(g);
    return out;
}

// Picks the partition serving vertex v. A single membership is returned
// directly without consuming randomness; with several, partition f is
// chosen with probability Ne(Pa_f) / sum_i Ne(Pa_i).
inline PartitionId choose_home_partition(const PartitionTables& t, VertexId v, Rng& rng) {
    const auto& ms = t.vertex_partitions[v];
    if (ms.empty())
        throw IntegrityError("vertex " + std::to_string(v) + " is in no partition");
    if (ms.size() == 1) return ms[0];
    double total = 0.0;
    for (PartitionId q : ms) total += static_cast<double>(t.owned_edge_count[q]);
    if (total <= 0.0) return ms[rng.next_below(ms.size())];
    const double r = rng.next_double() * total;
    double acc = 0.0;
    for (PartitionId q : ms) {
        acc += static_cast<double>(t.owned_edge_count[q]);
        if (r < acc) return q;
    }
    return ms.back();
}

struct WalkRecord {
    std::uint32_t walker = 0;
    std::uint64_t seed = 0;
    std::uint64_t total_steps = 0;
    std::uint64_t communication_count = 0;
    std::vector<std::uint64_t> segment_lengths;  // sums to total_steps
    std::vector<VertexId> visited;               // optional, capped
    std::vector<std::uint64_t> visit_counts;     // optional, per vertex
};

struct WalkOptions {
    std::optional<VertexId> start;
    bool record_visit_counts = false;
    // Vertex sequences are memory hungry; keep them only for short walks.
    std::uint64_t record_sequence_up_to = 100000;
};

// Runs one walker for total_steps steps over the tables. Each step picks
// uniformly among NoP and NoOP of the current record, i.e. among all d(v)
// graph neighbors, so the vertex-marginal chain is the unpartitioned walk.
// A step whose target is not a member of the current partition is a
// communication event: the open segment closes and the walker re-homes at
// the target via choose_home_partition. The arrival step counts as step 1
// of the new segment.
inline WalkRecord run_partitioned_walk(const PartitionTables& t, std::uint64_t total_steps,
                                       std::uint64_t seed, const WalkOptions& options = {}) {
    if (total_steps < 1) throw ValidationError("walk needs at least one step");
    Rng rng(seed);
    WalkRecord rec;
    rec.seed = seed;
    rec.total_steps = total_steps;

    VertexId v = options.start ? *options.start
                               : static_cast<VertexId>(rng.next_below(t.n));
    if (v >= t.n) throw ValidationError("start vertex out of range");
    PartitionId p = choose_home_partition(t, v, rng);
    const MemberRecord* row = &t.record(p, v);
    if (row->degree() == 0)
        throw ValidationError("start vertex " + std::to_string(v) + " is isolated");

    const bool keep_sequence = total_steps <= options.record_sequence_up_to;
    if (keep_sequence) {
        rec.visited.reserve(total_steps + 1);
        rec.visited.push_back(v);
    }
    if (options.record_visit_counts) rec.visit_counts.assign(t.n, 0);

    std::uint64_t segment = 0;
    for (std::uint64_t step = 0; step < total_steps; ++step) {
        const VertexId u = row->neighbor_at(
            static_cast<std::uint32_t>(rng.next_below(row->degree())));
        if (t.is_member(p, u)) {
            ++segment;
        } else {
            rec.segment_lengths.push_back(segment);
            ++rec.communication_count;
            segment = 1;
            p = choose_home_partition(t, u, rng);
        }
        v = u;
        row = &t.record(p, v);
        if (keep_sequence) rec.visited.push_back(v);
        if (options.record_visit_counts) ++rec.visit_counts[v];
    }
    rec.segment_lengths.push_back(segment);
    return rec;
}

// Independent walkers; walker w uses the derived stream seed
// derive_stream(base_seed, w). The result is a pure function of
// (base_seed, walkers, steps) no matter how many threads run it.
inline std::vector<WalkRecord> run_walk_ensemble(const PartitionTables& t, std::uint32_t walkers,
                                                 std::uint64_t steps_per_walker,
                                                 std::uint64_t base_seed,
                                                 std::uint32_t threads = 0,
                                                 const WalkOptions& options = {}) {
    if (walkers < 1) throw ValidationError("ensemble needs at least one walker");
    std::vector<WalkRecord> records(walkers);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, walkers);
    auto work = [&](std::uint32_t tid) {
        for (std::uint32_t w = tid; w < walkers; w += threads) {
            records[w] = run_partitioned_walk(t, steps_per_walker,
                                              derive_stream(base_seed, w), options);
            records[w].walker = w;
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::uint32_t tid = 0; tid < threads; ++tid) pool.emplace_back(work, tid);
        for (auto& th : pool) th.join();
    }
    return records;
}

struct CcdfTable {
    std::vector<std::uint64_t> lengths;  // sorted distinct segment lengths
    std::vector<double> ccdf;            // P(L >= length), non-increasing
};

inline CcdfTable ccdf(const std::vector<WalkRecord>& records) {
    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t total = 0;
    for (const auto& rec : records)
        for (auto len : rec.segment_lengths) {
            ++counts[len];
            ++total;
        }
    if (total == 0) throw ValidationError("ccdf needs at least one segment");
    CcdfTable table;
    table.lengths.reserve(counts.size());
    table.ccdf.reserve(counts.size());
    std::uint64_t at_least = total;
    for (auto [len, cnt] : counts) {
        table.lengths.push_back(len);
        table.ccdf.push_back(static_cast<double>(at_least) / static_cast<double>(total));
        at_least -= cnt;
    }
    return table;
}

inline double ccdf_at(const CcdfTable& t, std::uint64_t len) {
    auto it = std::lower_bound(t.lengths.begin(), t.lengths.end(), len);
    if (it == t.lengths.end()) return 0.0;
    return t.ccdf[static_cast<std::size_t>(it - t.lengths.begin())];
}

inline double mean_segment_length(const std::vector<WalkRecord>& records) {
    std::uint64_t steps = 0, segments = 0;
    for (const auto& rec : records) {
        steps += rec.total_steps;
        segments += rec.segment_lengths.size();
    }
    return static_cast<double>(steps) / static_cast<double>(segments);
}

// One row per segment: walker id, segment index, length.
inline void write_segments(const std::vector<WalkRecord>& records, std::ostream& out) {
    out << "walker segment length\n";
    for (const auto& rec : records)
        for (std::size_t s = 0; s < rec.segment_lengths.size(); ++s)
            out << rec.walker << ' ' << s << ' ' << rec.segment_lengths[s] << '\n';
}

// Two columns, plot ready: length and P(L >= length).
inline void write_ccdf(const CcdfTable& t, std::ostream& out) {
    out << "length ccdf\n";
    char buf[64];
    for (std::size_t i = 0; i < t.lengths.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.12g", t.ccdf[i]);
        out << t.lengths[i] << ' ' << buf << '\n';
    }
}

}  // namespace walkpart
