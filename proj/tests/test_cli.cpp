// End-to-end checks through the installed binary. The path comes from
// the FORAGE_LAB_BIN environment variable set by ctest.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"

#include "forage/config.hpp"
#include "forage/evolution.hpp"
#include "forage/genome.hpp"
#include "forage/textio.hpp"
#include "support/helpers.hpp"

namespace fs = std::filesystem;
using namespace forage;

namespace {

std::string bin() {
    const char* path = std::getenv("FORAGE_LAB_BIN");
    REQUIRE_MESSAGE(path != nullptr, "FORAGE_LAB_BIN must point at forage-lab");
    return path;
}

int run_cli(const std::string& args, const fs::path& log = {}) {
    std::string cmd = bin() + std::string(" ") + args;
    if (!log.empty()) cmd += " >" + log.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path workdir() {
    fs::path dir = fs::path("cli_test_out");
    fs::create_directories(dir);
    return dir;
}

std::string tiny_config_text() {
    RunConfig config;
    config.arena.trial_ticks = 200;
    config.arena.resource_count = 16;
    config.ablation.seeds = {1, 2, 3, 4, 5};
    config.ablation.sample_stride = 20;
    config.evolution.population_size = 8;
    config.evolution.generations = 1;
    config.evolution.trial_seeds_per_eval = 1;
    return config_to_json(config);
}

fs::path write_tiny_config() {
    fs::path path = workdir() / "tiny_config.json";
    write_file(path.string(), tiny_config_text());
    return path;
}

fs::path write_interface_genome() {
    Genome g = testsupport::interface_genome(
        {{15, 16, 2.0}, {15, 17, 1.5}, {4, 18, 1.0}});
    fs::path path = workdir() / "genome.json";
    save_genome(path.string(), g);
    return path;
}

long count_lines(const fs::path& p) {
    std::ifstream in(p);
    long n = 0;
    std::string line;
    while (std::getline(in, line)) ++n;
    return n;
}

} // namespace

TEST_CASE("help exits zero") {
    CHECK(run_cli("--help", workdir() / "help.log") == 0);
}

TEST_CASE("unknown distribution is a usage error naming the choices") {
    fs::path log = workdir() / "maze.log";
    int code = run_cli("evolve --distribution maze --out " +
                           (workdir() / "maze_out").string(),
                       log);
    CHECK(code == 1);
    std::string text = read_file(log.string());
    CHECK(text.find("clustered") != std::string::npos);
    CHECK(text.find("semiclustered") != std::string::npos);
    CHECK(text.find("uniform") != std::string::npos);
}

TEST_CASE("unknown group name in --set lists the canonical names") {
    fs::path config = write_tiny_config();
    fs::path genome = write_interface_genome();
    fs::path log = workdir() / "set.log";
    int code = run_cli("minimal --genome " + genome.string() + " --config " +
                           config.string() + " --set holding,nest --out " +
                           (workdir() / "set_out").string(),
                       log);
    CHECK(code == 1);
    std::string text = read_file(log.string());
    CHECK(text.find("nestlight") != std::string::npos);
    CHECK(text.find("robotproximity") != std::string::npos);
}

TEST_CASE("replay writes a full trace plus snapshot and layout") {
    fs::path config = write_tiny_config();
    fs::path genome = write_interface_genome();
    fs::path out = workdir() / "replay_out";
    int code = run_cli("replay --genome " + genome.string() + " --config " +
                           config.string() + " --seed 3 --mask pheromone:off:1.0 --out " +
                           out.string(),
                       workdir() / "replay.log");
    REQUIRE(code == 0);
    CHECK(count_lines(out / "trace.csv") == 200 + 2); // header + ticks + initial row
    CHECK(fs::exists(out / "world.json"));
    CHECK(fs::exists(out / "layout.csv"));
    CHECK(fs::exists(out / "manifest.json"));
    std::string header = read_file((out / "trace.csv").string()).substr(0, 60);
    CHECK(header.find("tick,x,y,theta,holding,delivered,laid_pheromone") == 0);
}

TEST_CASE("a genome with 14 inputs is an interface error") {
    Genome g;
    for (int i = 0; i < 14; ++i) g.nodes.push_back({i, NodeKind::Input});
    for (int o = 0; o < 3; ++o) g.nodes.push_back({20 + o, NodeKind::Output});
    fs::path genome = workdir() / "bad_genome.json";
    save_genome(genome.string(), g);
    fs::path config = write_tiny_config();
    fs::path log = workdir() / "bad.log";
    int code = run_cli("ablate --genome " + genome.string() + " --config " +
                           config.string() + " --seeds 5 --out " +
                           (workdir() / "bad_out").string(),
                       log);
    CHECK(code == 2);
    std::string text = read_file(log.string());
    CHECK(text.find("15") != std::string::npos);
}

TEST_CASE("minimal --mock --search names the critical pair") {
    fs::path config = write_tiny_config();
    fs::path out = workdir() / "mock_out";
    int code = run_cli("minimal --mock --search --config " + config.string() +
                           " --out " + out.string(),
                       workdir() / "mock.log");
    REQUIRE(code == 0);
    std::string report = read_file((out / "report.json").string());
    CHECK(report.find("sufficient_and_minimal") != std::string::npos);
    CHECK(report.find("holding") != std::string::npos);
    CHECK(report.find("nestlight") != std::string::npos);
}

TEST_CASE("missing required flags exit with the usage code") {
    CHECK(run_cli("ablate", workdir() / "usage.log") == 1);
    CHECK(run_cli("minimal --config nowhere.json", workdir() / "usage2.log") == 1);
}
