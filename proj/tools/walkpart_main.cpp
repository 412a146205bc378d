// walkpart command line: generate graphs, partition them, evaluate the
// partitions, and run partitioned random walks.
//
// Exit codes: 0 success, 1 runtime or data error, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "walkpart/walkpart.hpp"

namespace {

using namespace walkpart;

std::uint64_t entropy_seed() {
    std::random_device rd;
    std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    return splitmix64(s);
}

Graph load_graph(const std::string& path, bool repair_orphans, LoadReport* report = nullptr) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open input file: " + path);
    NormalizeOptions opt;
    opt.repair_orphans = repair_orphans;
    return load_edge_list(in, opt, report);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open output file: " + path);
    return out;
}

// Provenance sidecar for an output file. Records everything needed to
// reproduce the run; timing values vary between runs, the data files do not.
void write_manifest(const std::string& out_path, const std::string& command,
                    const std::vector<std::pair<std::string, std::string>>& fields) {
    std::ofstream out(out_path + ".manifest");
    if (!out) throw Error("cannot write manifest next to " + out_path);
    out << "# walkpart run manifest\n";
    out << "command " << command << '\n';
    out << "version " << kVersion << '\n';
    for (const auto& [key, value] : fields) out << key << ' ' << value << '\n';
}

std::optional<double> read_manifest_build_time(const std::string& partition_path) {
    std::ifstream in(partition_path + ".manifest");
    if (!in) return std::nullopt;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "build_time_s") {
            double v = 0;
            if (ls >> v) return v;
        }
    }
    return std::nullopt;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

int cmd_gen(VertexId n, std::uint32_t m, std::optional<std::uint64_t> seed,
            const std::string& out_path) {
    const std::uint64_t s = seed.value_or(entropy_seed());
    Graph g = generate_power_law(n, m, s);
    auto out = open_out(out_path);
    write_edge_list(g, out);
    write_manifest(out_path, "gen",
                   {{"n", std::to_string(n)},
                    {"edges_per_new_vertex", std::to_string(m)},
                    {"seed", std::to_string(s)},
                    {"output", out_path}});
    std::cerr << "generated n=" << g.vertex_count() << " m=" << g.edge_count()
              << " seed=" << s << '\n';
    return 0;
}

int cmd_partition(const std::string& input, const std::string& algorithm, std::uint32_t k,
                  std::optional<std::uint64_t> seed, bool repair_orphans,
                  const std::string& out_path) {
    auto alg = parse_algorithm(algorithm);
    if (!alg) throw CLI::ValidationError("--algorithm",
                                         "unknown algorithm '" + algorithm + "'");
    LoadReport lrep;
    Graph g = load_graph(input, repair_orphans, &lrep);
    write_load_report(lrep, std::cerr);
    PartitionConfig cfg;
    cfg.algorithm = *alg;
    cfg.k = k;
    cfg.seed = seed.value_or(entropy_seed());
    PartitionSet ps = partition(g, cfg);
    PartitionTables tables = build_tables(g, ps);
    auto out = open_out(out_path);
    write_partition_file(g, ps, tables, out);
    write_manifest(out_path, "partition",
                   {{"input", input},
                    {"algorithm", ps.algorithm},
                    {"k", std::to_string(k)},
                    {"seed", std::to_string(cfg.seed)},
                    {"repair_orphans", repair_orphans ? "1" : "0"},
                    {"output", out_path},
                    {"build_time_s", fmt(ps.build_time_s)}});
    std::cerr << "partitioned algorithm=" << ps.algorithm << " k=" << k
              << " seed=" << cfg.seed << " build_time_s=" << fmt(ps.build_time_s) << '\n';
    return 0;
}

int cmd_metrics(const std::string& input, const std::string& partition_path,
                const std::string& out_path, bool pretty, bool repair_orphans) {
    Graph g = load_graph(input, repair_orphans);
    std::ifstream pin(partition_path);
    if (!pin) throw Error("cannot open partition file: " + partition_path);
    PartitionSet ps = read_partition_file(g, pin);
    MetricsReport rep = compute_metrics(g, ps);
    rep.build_time_s = read_manifest_build_time(partition_path);
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file = open_out(out_path);
        out = &file;
    }
    if (pretty)
        write_metrics_table({rep}, *out);
    else
        write_metrics_report(rep, *out);
    if (!out_path.empty())
        write_manifest(out_path, "metrics",
                       {{"input", input},
                        {"partition", partition_path},
                        {"output", out_path}});
    return 0;
}

int cmd_walk(const std::string& input, const std::string& partition_path, std::uint64_t steps,
             std::uint32_t walkers, std::optional<std::uint64_t> seed, std::uint32_t threads,
             const std::string& segments_path, const std::string& ccdf_path,
             bool repair_orphans) {
    Graph g = load_graph(input, repair_orphans);
    std::ifstream pin(partition_path);
    if (!pin) throw Error("cannot open partition file: " + partition_path);
    PartitionSet ps = read_partition_file(g, pin);
    PartitionTables tables = build_tables(g, ps);
    const std::uint64_t s = seed.value_or(entropy_seed());
    auto records = run_walk_ensemble(tables, walkers, steps, s, threads);
    auto seg_out = open_out(segments_path);
    write_segments(records, seg_out);
    auto table = ccdf(records);
    auto ccdf_out = open_out(ccdf_path);
    write_ccdf(table, ccdf_out);
    write_manifest(segments_path, "walk",
                   {{"input", input},
                    {"partition", partition_path},
                    {"steps", std::to_string(steps)},
                    {"walkers", std::to_string(walkers)},
                    {"seed", std::to_string(s)},
                    {"segments_out", segments_path},
                    {"ccdf_out", ccdf_path}});
    std::uint64_t comm = 0;
    for (const auto& r : records) comm += r.communication_count;
    std::cerr << "walked walkers=" << walkers << " steps=" << steps << " seed=" << s
              << " communications=" << comm << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graph partitioning and partitioned random walks"};
    app.require_subcommand(1);

    std::uint32_t default_threads = 0;
    if (const char* env = std::getenv("WALKPART_THREADS"))
        default_threads = static_cast<std::uint32_t>(std::strtoul(env, nullptr, 10));

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic power-law graph");
    VertexId gen_n = 0;
    std::uint32_t gen_m = 0;
    std::optional<std::uint64_t> gen_seed;
    std::string gen_out;
    gen->add_option("--n", gen_n, "vertex count")->required();
    gen->add_option("--m", gen_m, "edges per new vertex")->required();
    gen->add_option("--seed", gen_seed, "rng seed (default: entropy)");
    gen->add_option("--out", gen_out, "output edge-list path")->required();

    // partition
    auto* part = app.add_subcommand("partition", "partition a graph");
    std::string part_input, part_alg, part_out;
    std::uint32_t part_k = 0;
    std::optional<std::uint64_t> part_seed;
    bool part_repair = false;
    part->add_option("--input", part_input, "edge-list path")->required();
    part->add_option("--algorithm", part_alg, "bfs|ldfs|balance|vertexcut|random")->required();
    part->add_option("--k", part_k, "number of partitions")
        ->required()
        ->check(CLI::Range(2u, 1000000000u));
    part->add_option("--seed", part_seed, "rng seed (default: entropy)");
    part->add_flag("--repair-orphans", part_repair, "repair target-only vertex ids on load");
    part->add_option("--out", part_out, "output partition path")->required();

    // metrics
    auto* met = app.add_subcommand("metrics", "evaluate a partition file");
    std::string met_input, met_partition, met_out;
    bool met_pretty = false, met_repair = false;
    met->add_option("--input", met_input, "edge-list path")->required();
    met->add_option("--partition", met_partition, "partition file path")->required();
    met->add_option("--out", met_out, "write the report here instead of stdout");
    met->add_flag("--pretty", met_pretty, "render a comparison-table row");
    met->add_flag("--repair-orphans", met_repair, "repair target-only vertex ids on load");

    // walk
    auto* walk = app.add_subcommand("walk", "run partitioned random walks");
    std::string walk_input, walk_partition, walk_segments, walk_ccdf;
    std::uint64_t walk_steps = 0;
    std::uint32_t walk_walkers = 1;
    std::uint32_t walk_threads = default_threads;
    std::optional<std::uint64_t> walk_seed;
    bool walk_repair = false;
    walk->add_option("--input", walk_input, "edge-list path")->required();
    walk->add_option("--partition", walk_partition, "partition file path")->required();
    walk->add_option("--steps", walk_steps, "steps per walker")
        ->required()
        ->check(CLI::PositiveNumber);
    walk->add_option("--walkers", walk_walkers, "number of independent walkers")
        ->check(CLI::PositiveNumber);
    walk->add_option("--seed", walk_seed, "base rng seed (default: entropy)");
    walk->add_option("--threads", walk_threads, "worker threads (default: WALKPART_THREADS or all)");
    walk->add_option("--segments-out", walk_segments, "per-segment output path")->required();
    walk->add_option("--ccdf-out", walk_ccdf, "ccdf output path")->required();
    walk->add_flag("--repair-orphans", walk_repair, "repair target-only vertex ids on load");

    try {
        app.parse(argc, argv);
        if (*gen) return cmd_gen(gen_n, gen_m, gen_seed, gen_out);
        if (*part)
            return cmd_partition(part_input, part_alg, part_k, part_seed, part_repair, part_out);
        if (*met) return cmd_metrics(met_input, met_partition, met_out, met_pretty, met_repair);
        if (*walk)
            return cmd_walk(walk_input, walk_partition, walk_steps, walk_walkers, walk_seed,
                            walk_threads, walk_segments, walk_ccdf, walk_repair);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const walkpart::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
