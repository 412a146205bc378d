#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "walkpart/common.hpp"
#include "walkpart/graph.hpp"
#include "walkpart/partition.hpp"

namespace walkpart {

// Stationary statistics of the partitioned walk: for each partition the
// probability mass of walker residency (weight), the probability that a
// step both starts and continues inside it (stay), and the total hand-off
// probability per step. For single-membership partitionings everything has
// a closed form; with replicas the residency split solves a fixpoint on
// (vertex, partition) states, iterated with 0.5 damping to a 1e-13 L1
// tolerance, which is deterministic.
struct StationaryPartitionStats {
    std::vector<double> weight;
    std::vector<double> stay;
    double communication_rate = 0.0;
};

namespace detail {

inline StationaryPartitionStats stationary_stats(const Graph& g, const PartitionSet& ps) {
    const VertexId n = g.vertex_count();
    const double sum_deg = static_cast<double>(g.degree_sum());
    StationaryPartitionStats out;
    out.weight.assign(ps.k, 0.0);
    out.stay.assign(ps.k, 0.0);

    if (!ps.has_replicas()) {
        double cross = 0.0;
        for (VertexId v = 0; v < n; ++v) {
            const PartitionId h = ps.memberships[v][0];
            out.weight[h] += g.degree(v) / sum_deg;
            std::uint32_t inside = 0;
            for (VertexId u : g.neighbors(v))
                if (ps.memberships[u][0] == h) ++inside;
            out.stay[h] += inside / sum_deg;
            cross += (g.degree(v) - inside) / sum_deg;
        }
        out.communication_rate = cross;
        return out;
    }

    std::vector<std::uint64_t> state_off(n + 1, 0);
    for (VertexId v = 0; v < n; ++v)
        state_off[v + 1] = state_off[v] + ps.memberships[v].size();
    const std::uint64_t nstates = state_off[n];
    auto state_of = [&](VertexId v, PartitionId p) {
        const auto& ms = ps.memberships[v];
        for (std::size_t j = 0; j < ms.size(); ++j)
            if (ms[j] == p) return state_off[v] + j;
        throw IntegrityError("residency state lookup failed");
    };

    std::vector<double> ne(ps.k);
    for (std::uint32_t i = 0; i < ps.k; ++i)
        ne[i] = static_cast<double>(ps.parts[i].owned_edges.size());
    std::vector<double> home_weight(nstates);
    for (VertexId v = 0; v < n; ++v) {
        const auto& ms = ps.memberships[v];
        double total = 0.0;
        for (PartitionId q : ms) total += ne[q];
        for (std::size_t j = 0; j < ms.size(); ++j)
            home_weight[state_off[v] + j] =
                total > 0 ? ne[ms[j]] / total : 1.0 / static_cast<double>(ms.size());
    }

    std::vector<double> rho(nstates), next(nstates);
    for (VertexId v = 0; v < n; ++v) {
        const double pi_v = g.degree(v) / sum_deg;
        for (std::size_t j = 0; j < ps.memberships[v].size(); ++j)
            rho[state_off[v] + j] = pi_v * home_weight[state_off[v] + j];
    }

    for (int iter = 0; iter < 5000; ++iter) {
        std::fill(next.begin(), next.end(), 0.0);
        for (VertexId v = 0; v < n; ++v) {
            const auto& ms = ps.memberships[v];
            for (std::size_t j = 0; j < ms.size(); ++j) {
                const double mass = rho[state_off[v] + j] / g.degree(v);
                if (mass == 0.0) continue;
                const PartitionId p = ms[j];
                for (VertexId u : g.neighbors(v)) {
                    if (ps.is_member(p, u)) {
                        next[state_of(u, p)] += mass;
                    } else {
                        const auto& mu = ps.memberships[u];
                        for (std::size_t h = 0; h < mu.size(); ++h)
                            next[state_off[u] + h] += mass * home_weight[state_off[u] + h];
                    }
                }
            }
        }
        double delta = 0.0;
        for (std::uint64_t s = 0; s < nstates; ++s) {
            next[s] = 0.5 * rho[s] + 0.5 * next[s];
            delta += std::abs(next[s] - rho[s]);
        }
        rho.swap(next);
        if (delta < 1e-13) break;
    }

    double comm = 0.0;
    for (VertexId v = 0; v < n; ++v) {
        const auto& ms = ps.memberships[v];
        for (std::size_t j = 0; j < ms.size(); ++j) {
            const PartitionId p = ms[j];
            const double r = rho[state_off[v] + j];
            out.weight[p] += r;
            std::uint32_t inside = 0;
            for (VertexId u : g.neighbors(v))
                if (ps.is_member(p, u)) ++inside;
            const double stay_frac = static_cast<double>(inside) / g.degree(v);
            out.stay[p] += r * stay_frac;
            comm += r * (1.0 - stay_frac);
        }
    }
    out.communication_rate = comm;
    return out;
}

}  // namespace detail

struct ModularityResult {
    double total = 0.0;
    std::vector<double> tp;
    std::vector<double> ep;
    std::vector<double> improvement;
};

// Partition quality per the community-detection reading: tp_i is the
// stationary probability that a walk step continues inside partition i,
// ep_i the squared stationary residency share. With one membership per
// vertex this is exactly Newman modularity
//   sum_i [ sum_{v in Pa_i} d_in(i,v)/2m - (sum_{v in Pa_i} d(v)/2m)^2 ]
// and each improvement is bounded by 0.25 since tp_i <= weight_i.
inline ModularityResult modularity_detailed(const Graph& g, const PartitionSet& ps) {
    if (g.edge_count() == 0) throw ValidationError("modularity needs at least one edge");
    auto stats = detail::stationary_stats(g, ps);
    ModularityResult r;
    r.tp = stats.stay;
    r.ep.resize(ps.k);
    r.improvement.resize(ps.k);
    for (std::uint32_t i = 0; i < ps.k; ++i) {
        r.ep[i] = stats.weight[i] * stats.weight[i];
        r.improvement[i] = r.tp[i] - r.ep[i];
        r.total += r.improvement[i];
    }
    return r;
}

inline double modularity(const Graph& g, const PartitionSet& ps) {
    return modularity_detailed(g, ps).total;
}

// Eq-21/22 style normalized size variance over member counts (replicas
// included); ranges over [0, (k-1)/k].
inline double balance_variance(const PartitionSet& ps) {
    const double N = static_cast<double>(ps.member_total());
    if (N <= 0) throw ValidationError("balance variance needs a nonempty partition set");
    const double target = N / ps.k;
    double acc = 0.0;
    for (const auto& p : ps.parts) {
        const double d = static_cast<double>(p.members.size()) - target;
        acc += d * d;
    }
    return acc / (N * N);
}

struct ConnectionReport {
    std::vector<std::uint32_t> subgraph_counts;
    bool all_connected = false;
};

// Component count of each partition's owned-edge subgraph on its member
// set; "connected" means every count is exactly 1.
inline ConnectionReport connection_report(const Graph& g, const PartitionSet& ps) {
    ConnectionReport rep;
    rep.subgraph_counts.resize(ps.k);
    std::vector<std::int32_t> label(g.vertex_count());
    std::vector<VertexId> stack;
    for (std::uint32_t i = 0; i < ps.k; ++i) {
        const auto& members = ps.parts[i].members;
        std::vector<std::vector<VertexId>> local(members.size());
        std::fill(label.begin(), label.end(), -1);
        for (std::size_t r = 0; r < members.size(); ++r)
            label[members[r]] = static_cast<std::int32_t>(r);
        for (auto [u, v] : ps.parts[i].owned_edges) {
            if (label[u] >= 0 && label[v] >= 0) {
                local[static_cast<std::size_t>(label[u])].push_back(v);
                local[static_cast<std::size_t>(label[v])].push_back(u);
            }
        }
        std::vector<char> seen(members.size(), 0);
        std::uint32_t comps = 0;
        for (std::size_t r = 0; r < members.size(); ++r) {
            if (seen[r]) continue;
            ++comps;
            seen[r] = 1;
            stack.assign(1, members[r]);
            while (!stack.empty()) {
                VertexId v = stack.back();
                stack.pop_back();
                for (VertexId u : local[static_cast<std::size_t>(label[v])]) {
                    auto ru = static_cast<std::size_t>(label[u]);
                    if (!seen[ru]) {
                        seen[ru] = 1;
                        stack.push_back(u);
                    }
                }
            }
        }
        rep.subgraph_counts[i] = comps;
    }
    rep.all_connected = !rep.subgraph_counts.empty() &&
                        std::all_of(rep.subgraph_counts.begin(), rep.subgraph_counts.end(),
                                    [](std::uint32_t c) { return c == 1; });
    return rep;
}

// Eq-23..26 cut-vertex quality: observed replica share per partition minus
// the expected share under random placement; null when nothing is cut.
inline std::optional<double> vertexcut_improvement(const Graph& g, const PartitionSet& ps) {
    const double N = static_cast<double>(ps.member_total());
    bool any_cut = false;
    double total = 0.0;
    for (std::uint32_t i = 0; i < ps.k; ++i) {
        const auto& members = ps.parts[i].members;
        std::uint64_t nc = 0;
        double ep = 0.0;
        const double share = static_cast<double>(members.size()) / N;
        for (VertexId v : members) {
            if (ps.replication[v] >= 2) ++nc;
            ep += 1.0 - std::pow(share, static_cast<double>(g.degree(v)));
        }
        if (nc > 0) any_cut = true;
        total += static_cast<double>(nc) / N - ep / N;
    }
    if (!any_cut) return std::nullopt;
    return total;
}

// Expected hand-offs per walk step at stationarity.
inline double expected_communication(const Graph& g, const PartitionSet& ps) {
    return detail::stationary_stats(g, ps).communication_rate;
}

// Mean replica count per vertex (>= 1, equal to 1 iff nothing is cut).
inline double replication_objective(const PartitionSet& ps) {
    double acc = 0.0;
    for (auto r : ps.replication) acc += r;
    return acc / static_cast<double>(ps.replication.size());
}

struct MetricsReport {
    double modularity = 0.0;
    std::vector<double> improvements;
    double balance_variance = 0.0;
    std::optional<double> build_time_s;
    ConnectionReport connection;
    std::optional<double> vertexcut_improvement;
    double replication_objective = 1.0;
    double expected_communication = 0.0;
    double communication_objective = 0.0;  // expected_communication / k
    double attained_edge_imbalance = 1.0;  // max_i Ne_i * k / m
    double attained_vertex_imbalance = 1.0;  // max_i N_i * k / N
    std::uint32_t leftover_components = 0;
    std::string algorithm;
    std::uint32_t k = 0;
};

inline MetricsReport compute_metrics(const Graph& g, const PartitionSet& ps) {
    MetricsReport rep;
    rep.algorithm = ps.algorithm;
    rep.k = ps.k;
    rep.leftover_components = ps.leftover_components;
    auto stats = detail::stationary_stats(g, ps);
    rep.improvements.resize(ps.k);
    for (std::uint32_t i = 0; i < ps.k; ++i) {
        rep.improvements[i] = stats.stay[i] - stats.weight[i] * stats.weight[i];
        rep.modularity += rep.improvements[i];
    }
    rep.balance_variance = balance_variance(ps);
    if (ps.build_time_s > 0) rep.build_time_s = ps.build_time_s;
    rep.connection = connection_report(g, ps);
    rep.vertexcut_improvement = vertexcut_improvement(g, ps);
    rep.replication_objective = replication_objective(ps);
    rep.expected_communication = stats.communication_rate;
    rep.communication_objective = stats.communication_rate / ps.k;
    std::uint64_t max_ne = 0, max_n = 0;
    for (const auto& p : ps.parts) {
        max_ne = std::max<std::uint64_t>(max_ne, p.owned_edges.size());
        max_n = std::max<std::uint64_t>(max_n, p.members.size());
    }
    rep.attained_edge_imbalance =
        static_cast<double>(max_ne) * ps.k / static_cast<double>(g.edge_count());
    rep.attained_vertex_imbalance =
        static_cast<double>(max_n) * ps.k / static_cast<double>(ps.member_total());
    return rep;
}

namespace detail {

inline std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

}  // namespace detail

// Machine-readable key/value serialization with fixed field names.
inline void write_metrics_report(const MetricsReport& rep, std::ostream& out) {
    out << "algorithm " << rep.algorithm << '\n';
    out << "k " << rep.k << '\n';
    out << "modularity " << detail::fmt_double(rep.modularity) << '\n';
    out << "balance_variance " << detail::fmt_double(rep.balance_variance) << '\n';
    out << "build_time_s "
        << (rep.build_time_s ? detail::fmt_double(*rep.build_time_s) : std::string("null"))
        << '\n';
    out << "connection " << (rep.connection.all_connected ? "YES" : "NO") << '\n';
    out << "connection_counts";
    for (auto c : rep.connection.subgraph_counts) out << ' ' << c;
    out << '\n';
    out << "vertexcut_improvement "
        << (rep.vertexcut_improvement ? detail::fmt_double(*rep.vertexcut_improvement)
                                      : std::string("null"))
        << '\n';
    out << "replication_objective " << detail::fmt_double(rep.replication_objective) << '\n';
    out << "expected_communication " << detail::fmt_double(rep.expected_communication) << '\n';
    out << "communication_objective " << detail::fmt_double(rep.communication_objective) << '\n';
    out << "attained_edge_imbalance " << detail::fmt_double(rep.attained_edge_imbalance) << '\n';
    out << "attained_vertex_imbalance " << detail::fmt_double(rep.attained_vertex_imbalance)
        << '\n';
    out << "leftover_components " << rep.leftover_components << '\n';
}

// Comparison-table rendering, one row per report.
inline void write_metrics_table(const std::vector<MetricsReport>& rows, std::ostream& out) {
    out << "Algorithm   Modularity  Balance    Time       Connection  Vertex-cut\n";
    for (const auto& r : rows) {
        char line[160];
        std::snprintf(line, sizeof(line), "%-11s %-11.2f %-10.2f %-10s %-11s %s\n",
                      r.algorithm.c_str(), r.modularity, r.balance_variance,
                      r.build_time_s ? (detail::fmt_double(*r.build_time_s) + "s").c_str() : "null",
                      r.connection.all_connected ? "YES" : "NO",
                      r.vertexcut_improvement ? detail::fmt_double(*r.vertexcut_improvement).c_str()
                                              : "null");
        out << line;
    }
}

}  // namespace walkpart
