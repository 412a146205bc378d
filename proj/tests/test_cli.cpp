#include <catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "walkpart/graph.hpp"
#include "walkpart/tables.hpp"

using namespace walkpart;
namespace fs = std::filesystem;

namespace {

const std::string kCli = WALKPART_CLI_PATH;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("walkpart_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_CASE("gen is deterministic and reloads cleanly") {
    TempDir dir;
    REQUIRE(run("gen --n 3000 --m 3 --seed 1 --out " + dir.file("a.edges")) == 0);
    REQUIRE(run("gen --n 3000 --m 3 --seed 1 --out " + dir.file("b.edges")) == 0);
    REQUIRE(slurp(dir.file("a.edges")) == slurp(dir.file("b.edges")));

    std::ifstream in(dir.file("a.edges"));
    LoadReport rep;
    Graph g = load_edge_list(in, {}, &rep);
    REQUIRE(g.vertex_count() == 3000);
    REQUIRE(g.edge_count() == 6 + (3000 - 4) * 3);
    REQUIRE(rep.self_loops_dropped == 0);
    REQUIRE(rep.duplicates_dropped == 0);
}

TEST_CASE("gen rejects bad parameters") {
    TempDir dir;
    REQUIRE(run("gen --n 2 --m 5 --seed 1 --out " + dir.file("x.edges")) == 2);
}

TEST_CASE("partition writes a consistent file") {
    TempDir dir;
    REQUIRE(run("gen --n 2000 --m 3 --seed 5 --out " + dir.file("g.edges")) == 0);
    REQUIRE(run("partition --input " + dir.file("g.edges") +
                " --algorithm bfs --k 10 --seed 7 --out " + dir.file("g.part")) == 0);
    std::ifstream gin(dir.file("g.edges"));
    Graph g = load_edge_list(gin, {});
    std::ifstream pin(dir.file("g.part"));
    auto ps = read_partition_file(g, pin);
    REQUIRE(ps.owned_total() == g.edge_count());
    REQUIRE(ps.k == 10);
    REQUIRE(slurp(dir.file("g.part.manifest")).find("build_time_s") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
    TempDir dir;
    REQUIRE(run("gen --n 1000 --m 2 --seed 5 --out " + dir.file("g.edges")) == 0);
    REQUIRE(run("partition --input " + dir.file("g.edges") +
                " --algorithm frobnicate --k 4 --seed 7 --out " + dir.file("x.part")) == 2);
    REQUIRE(run("partition --input " + dir.file("g.edges") +
                " --algorithm bfs --k 1 --seed 7 --out " + dir.file("x.part")) == 2);
    REQUIRE(run("nonsense") == 2);
}

TEST_CASE("data errors exit with 1") {
    TempDir dir;
    REQUIRE(run("partition --input " + dir.file("missing.edges") +
                " --algorithm bfs --k 4 --seed 7 --out " + dir.file("x.part")) == 1);
    std::ofstream bad(dir.file("bad.edges"));
    bad << "0 1\nnot numbers\n";
    bad.close();
    REQUIRE(run("partition --input " + dir.file("bad.edges") +
                " --algorithm bfs --k 2 --seed 7 --out " + dir.file("x.part")) == 1);
}

TEST_CASE("metrics reports on partition files") {
    TempDir dir;
    REQUIRE(run("gen --n 2000 --m 3 --seed 5 --out " + dir.file("g.edges")) == 0);
    REQUIRE(run("partition --input " + dir.file("g.edges") +
                " --algorithm random --k 8 --seed 2 --out " + dir.file("r.part")) == 0);
    REQUIRE(run("metrics --input " + dir.file("g.edges") + " --partition " +
                dir.file("r.part") + " --out " + dir.file("r.metrics")) == 0);
    auto text = slurp(dir.file("r.metrics"));
    REQUIRE(text.find("connection NO") != std::string::npos);
    REQUIRE(text.find("modularity ") != std::string::npos);

    REQUIRE(run("partition --input " + dir.file("g.edges") +
                " --algorithm bfs --k 8 --seed 2 --out " + dir.file("b.part")) == 0);
    REQUIRE(run("metrics --input " + dir.file("g.edges") + " --partition " +
                dir.file("b.part") + " --out " + dir.file("b.metrics")) == 0);
    REQUIRE(slurp(dir.file("b.metrics")).find("connection YES") != std::string::npos);

    REQUIRE(run("metrics --input " + dir.file("g.edges") + " --partition " +
                dir.file("b.part") + " --pretty --out " + dir.file("b.table")) == 0);
    REQUIRE(slurp(dir.file("b.table")).find("Algorithm") != std::string::npos);
}

TEST_CASE("walk outputs are reproducible across reruns and thread counts") {
    TempDir dir;
    REQUIRE(run("gen --n 1500 --m 3 --seed 9 --out " + dir.file("g.edges")) == 0);
    REQUIRE(run("partition --input " + dir.file("g.edges") +
                " --algorithm ldfs --k 6 --seed 3 --out " + dir.file("g.part")) == 0);
    const std::string base = "walk --input " + dir.file("g.edges") + " --partition " +
                             dir.file("g.part") + " --steps 20000 --walkers 8 --seed 11";
    REQUIRE(run(base + " --threads 1 --segments-out " + dir.file("s1.txt") +
                " --ccdf-out " + dir.file("c1.txt")) == 0);
    REQUIRE(run(base + " --threads 4 --segments-out " + dir.file("s4.txt") +
                " --ccdf-out " + dir.file("c4.txt")) == 0);
    REQUIRE(run(base + " --threads 8 --segments-out " + dir.file("s8.txt") +
                " --ccdf-out " + dir.file("c8.txt")) == 0);
    REQUIRE(run(base + " --threads 4 --segments-out " + dir.file("s4b.txt") +
                " --ccdf-out " + dir.file("c4b.txt")) == 0);
    const auto s1 = slurp(dir.file("s1.txt"));
    REQUIRE(s1 == slurp(dir.file("s4.txt")));
    REQUIRE(s1 == slurp(dir.file("s8.txt")));
    REQUIRE(s1 == slurp(dir.file("s4b.txt")));
    const auto c1 = slurp(dir.file("c1.txt"));
    REQUIRE(c1 == slurp(dir.file("c4.txt")));
    REQUIRE(c1 == slurp(dir.file("c8.txt")));
    REQUIRE(s1.find("walker segment length") == 0);
    REQUIRE(c1.find("length ccdf") == 0);
}

TEST_CASE("single-partition walk emits one segment per walker") {
    // a 2-partition file on a disconnected graph keeps each walker inside
    // one partition forever
    TempDir dir;
    std::ofstream e(dir.file("two.edges"));
    e << "0 1\n0 2\n1 2\n3 4\n3 5\n4 5\n";
    e.close();
    REQUIRE(run("partition --input " + dir.file("two.edges") +
                " --algorithm bfs --k 2 --seed 1 --out " + dir.file("two.part")) == 0);
    REQUIRE(run("walk --input " + dir.file("two.edges") + " --partition " +
                dir.file("two.part") + " --steps 500 --walkers 1 --seed 2 --threads 1" +
                " --segments-out " + dir.file("seg.txt") + " --ccdf-out " +
                dir.file("ccdf.txt")) == 0);
    auto seg = slurp(dir.file("seg.txt"));
    REQUIRE(seg == "walker segment length\n0 0 500\n");
}

TEST_CASE("orphan repair flag flows through partitioning") {
    TempDir dir;
    std::ofstream e(dir.file("crawl.edges"));
    e << "0 1\n0 5\n1 5\n0 2\n1 2\n2 5\n";  // 5 never in the source column
    e.close();
    REQUIRE(run("partition --input " + dir.file("crawl.edges") +
                " --repair-orphans --algorithm bfs --k 2 --seed 1 --out " +
                dir.file("crawl.part")) == 0);
    std::ifstream gin(dir.file("crawl.edges"));
    NormalizeOptions opt;
    opt.repair_orphans = true;
    Graph g = load_edge_list(gin, opt);
    std::ifstream pin(dir.file("crawl.part"));
    auto ps = read_partition_file(g, pin);  // matching n proves the sink rode along
    REQUIRE(ps.memberships.size() == 5);
    REQUIRE(g.vertex_count() == 5);
}
