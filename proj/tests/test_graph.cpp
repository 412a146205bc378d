#include <catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include "walkpart/graph.hpp"
#include "walkpart/rng.hpp"

using namespace walkpart;

namespace {

Graph from_string(const std::string& text, bool repair = false, LoadReport* rep = nullptr) {
    std::istringstream in(text);
    NormalizeOptions opt;
    opt.repair_orphans = repair;
    return load_edge_list(in, opt, rep);
}

std::vector<std::vector<VertexId>> adjacency(const Graph& g) {
    std::vector<std::vector<VertexId>> out(g.vertex_count());
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        auto nb = g.neighbors(v);
        out[v].assign(nb.begin(), nb.end());
    }
    return out;
}

}  // namespace

TEST_CASE("triangle edge list") {
    Graph g = from_string("0 1\n1 2\n2 0\n");
    REQUIRE(g.vertex_count() == 3);
    REQUIRE(g.edge_count() == 3);
    for (VertexId v = 0; v < 3; ++v) REQUIRE(g.degree(v) == 2);
}

TEST_CASE("normalization drops duplicates and self loops") {
    LoadReport rep;
    Graph g = from_string("0 1\n0 1\n1 0\n2 2\n0 2\n", false, &rep);
    REQUIRE(g.vertex_count() == 3);
    REQUIRE(g.edge_count() == 2);
    REQUIRE(rep.self_loops_dropped == 1);
    REQUIRE(rep.duplicates_dropped == 2);
    REQUIRE(rep.edges_kept == 2);
}

TEST_CASE("comments and malformed lines") {
    Graph g = from_string("# header\n0 1\n\n1 2\n");
    REQUIRE(g.edge_count() == 2);
    REQUIRE_THROWS_AS(from_string("0 1\n0 x\n"), ParseError);
    REQUIRE_THROWS_WITH(from_string("0 1\n1 2 3\n"), Catch::Matchers::ContainsSubstring("line 2"));
    REQUIRE_THROWS_AS(from_string(""), ParseError);
    REQUIRE_THROWS_AS(from_string("# only comments\n"), ParseError);
}

TEST_CASE("orphan repair appends one sink") {
    // 5 never appears as a source, so it is an orphan of the crawl-style input.
    LoadReport rep;
    Graph g = from_string("0 1\n0 5\n1 5\n", true, &rep);
    REQUIRE(rep.orphans_repaired == 1);
    REQUIRE(rep.sink_added);
    REQUIRE(g.vertex_count() == 4);
    REQUIRE(g.edge_count() == 4);
    // dense ids sorted by original: 0->0, 1->1, 5->2, sink(6)->3
    REQUIRE(g.original_ids()[3] == 6);
    REQUIRE(g.degree(2) == 3);  // orphan keeps its edges and gains the sink
    REQUIRE(g.degree(3) == 1);
    REQUIRE(g.has_edge(2, 3));

    LoadReport none;
    Graph g2 = from_string("0 1\n1 0\n1 2\n2 0\n", true, &none);
    REQUIRE_FALSE(none.sink_added);
    REQUIRE(g2.vertex_count() == 3);
}

TEST_CASE("round trip through the edge-list format") {
    Rng rng(99);
    for (int round = 0; round < 20; ++round) {
        std::set<std::pair<std::uint64_t, std::uint64_t>> edges;
        const std::uint64_t ids = 40 + rng.next_below(200);
        const int count = 30 + static_cast<int>(rng.next_below(120));
        for (int e = 0; e < count; ++e) {
            std::uint64_t a = rng.next_below(ids) * 3;  // sparse original id space
            std::uint64_t b = rng.next_below(ids) * 3;
            if (a == b) continue;
            edges.emplace(std::min(a, b), std::max(a, b));
        }
        if (edges.empty()) continue;
        std::ostringstream text;
        for (auto [a, b] : edges) text << a << ' ' << b << '\n';
        Graph g = from_string(text.str());
        std::ostringstream dumped;
        write_edge_list(g, dumped);
        Graph g2 = from_string(dumped.str());
        REQUIRE(g2.vertex_count() == g.vertex_count());
        REQUIRE(g2.edge_count() == g.edge_count());
        REQUIRE(adjacency(g2) == adjacency(g));
        REQUIRE(g2.original_ids() == g.original_ids());
    }
}

TEST_CASE("handshake identity") {
    Rng rng(5);
    for (int round = 0; round < 10; ++round) {
        Graph g = generate_power_law(100 + static_cast<VertexId>(rng.next_below(400)), 3,
                                     rng.next());
        std::uint64_t total = 0;
        for (VertexId v = 0; v < g.vertex_count(); ++v) total += g.degree(v);
        REQUIRE(total == 2 * g.edge_count());
    }
}

TEST_CASE("connected components") {
    Graph triangle = from_string("0 1\n1 2\n2 0\n");
    REQUIRE(connected_components(triangle).component_count == 1);

    Graph two = from_string("0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n");
    REQUIRE(connected_components(two).component_count == 2);

    // two triangles {0,1,2} and {3,4,5} with bridge (2,3); restricting to
    // {0,1,2,4} separates 4 from the first triangle
    Graph bridged = from_string("0 1\n0 2\n1 2\n3 4\n3 5\n4 5\n2 3\n");
    std::vector<VertexId> subset{0, 1, 2, 4};
    auto labeling = connected_components(bridged, &subset);
    REQUIRE(labeling.component_count == 2);
    REQUIRE(labeling.component_id[0] == labeling.component_id[2]);
    REQUIRE(labeling.component_id[4] != labeling.component_id[0]);
    REQUIRE(labeling.component_id[3] == -1);

    std::vector<VertexId> empty;
    auto none = connected_components(bridged, &empty);
    REQUIRE(none.component_count == 0);
}

TEST_CASE("components agree with brute-force reachability") {
    Rng rng(123);
    for (int round = 0; round < 30; ++round) {
        const VertexId n = 5 + static_cast<VertexId>(rng.next_below(46));
        std::set<std::pair<VertexId, VertexId>> edges;
        const int count = static_cast<int>(rng.next_below(2 * n));
        for (int e = 0; e < count; ++e) {
            VertexId a = static_cast<VertexId>(rng.next_below(n));
            VertexId b = static_cast<VertexId>(rng.next_below(n));
            if (a != b) edges.emplace(std::min(a, b), std::max(a, b));
        }
        Graph g(n, {edges.begin(), edges.end()});
        auto labeling = connected_components(g);

        // oracle: breadth-first reachability from every vertex
        std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
        for (VertexId s = 0; s < n; ++s) {
            std::vector<VertexId> stack{s};
            reach[s][s] = 1;
            while (!stack.empty()) {
                VertexId v = stack.back();
                stack.pop_back();
                for (VertexId u : g.neighbors(v))
                    if (!reach[s][u]) {
                        reach[s][u] = 1;
                        stack.push_back(u);
                    }
            }
        }
        for (VertexId a = 0; a < n; ++a)
            for (VertexId b = 0; b < n; ++b)
                REQUIRE((labeling.component_id[a] == labeling.component_id[b]) ==
                        static_cast<bool>(reach[a][b]));
    }
}

TEST_CASE("power-law generator basics") {
    Graph tree = generate_power_law(5, 1, 42);
    REQUIRE(tree.edge_count() == 4);
    REQUIRE(connected_components(tree).component_count == 1);

    Graph g = generate_power_law(10000, 5, 1);
    REQUIRE(g.edge_count() == 15 + (10000 - 6) * 5);
    REQUIRE(connected_components(g).component_count == 1);

    Graph again = generate_power_law(10000, 5, 1);
    REQUIRE(adjacency(again) == adjacency(g));
    Graph other = generate_power_law(10000, 5, 2);
    REQUIRE(adjacency(other) != adjacency(g));

    REQUIRE_THROWS_AS(generate_power_law(2, 5, 1), ValidationError);
    REQUIRE_THROWS_AS(generate_power_law(10, 0, 1), ValidationError);
}

TEST_CASE("generator degree distribution is heavy tailed") {
    Graph g = generate_power_law(20000, 5, 1);
    std::uint32_t max_deg = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) max_deg = std::max(max_deg, g.degree(v));
    const double mean = 2.0 * static_cast<double>(g.edge_count()) / g.vertex_count();
    REQUIRE(max_deg > 10 * mean);
}

TEST_CASE("bipartite detection") {
    REQUIRE(is_bipartite(from_string("0 1\n1 2\n2 3\n")));
    REQUIRE_FALSE(is_bipartite(from_string("0 1\n1 2\n2 0\n")));
}
