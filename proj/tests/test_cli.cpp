#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "support/sha256.hpp"
#include "tvgl/cli.hpp"
#include "tvgl/io.hpp"

using namespace tvgl;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() /
               ("tvgl_cli_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string sub(const std::string& name) const {
        return (path / name).string();
    }
};

int run_cli(std::vector<std::string> args) { return cli::run(args); }

std::map<std::string, std::string> hash_dir(const fs::path& dir) {
    std::map<std::string, std::string> hashes;
    for (const auto& entry : fs::recursive_directory_iterator(dir))
        if (entry.is_regular_file())
            hashes[entry.path().filename().string()] =
                testing::sha256_hex(read_text_file(entry.path()));
    return hashes;
}

std::vector<std::string> csv_lines(const fs::path& file) {
    std::vector<std::string> lines;
    std::ifstream in(file);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("simulate writes deterministic artifacts") {
    TempDir tmp("simulate");
    const std::vector<std::string> base{
        "simulate",       "--p",    "10",   "--steps",        "60",
        "--initial-edges", "10",    "--churn-period", "20",
        "--churn-count",  "2",      "--seed", "5"};
    auto args1 = base;
    args1.push_back("--out");
    args1.push_back(tmp.sub("a"));
    auto args2 = base;
    args2.push_back("--out");
    args2.push_back(tmp.sub("b"));
    REQUIRE(run_cli(args1) == 0);
    REQUIRE(run_cli(args2) == 0);
    CHECK(hash_dir(tmp.sub("a")) == hash_dir(tmp.sub("b")));
    CHECK(fs::exists(fs::path(tmp.sub("a")) / "trajectory.jsonl"));
    CHECK(fs::exists(fs::path(tmp.sub("a")) / "data.csv"));
}

TEST_CASE("single-snapshot simulation") {
    TempDir tmp("snapshot");
    REQUIRE(run_cli({"simulate", "--p", "4", "--steps", "1", "--initial-edges",
                     "2", "--churn-count", "0", "--seed", "3", "--out",
                     tmp.sub("s")}) == 0);
    const TimeSeriesData data =
        read_data_csv(fs::path(tmp.sub("s")) / "data.csv");
    CHECK(data.n() == 1);
    CHECK(data.p() == 4);
}

TEST_CASE("estimate on near-independent data yields a sparse graph") {
    TempDir tmp("estimate");
    // base_diag 1 and no edges: Theta = I, data is iid standard normal.
    REQUIRE(run_cli({"simulate", "--p", "5", "--steps", "2000",
                     "--initial-edges", "0", "--churn-count", "0",
                     "--base-diag", "1.0", "--seed", "11", "--out",
                     tmp.sub("sim")}) == 0);
    REQUIRE(run_cli({"estimate", "--data", tmp.sub("sim") + "/data.csv",
                     "--lambda", "0.1", "--out", tmp.sub("est")}) == 0);
    const auto lines = csv_lines(fs::path(tmp.sub("est")) / "edges.csv");
    CHECK(lines.size() == 1);  // header only: no edges at this penalty

    // Determinism of the estimate artifacts.
    REQUIRE(run_cli({"estimate", "--data", tmp.sub("sim") + "/data.csv",
                     "--lambda", "0.1", "--out", tmp.sub("est2")}) == 0);
    CHECK(hash_dir(tmp.sub("est")) == hash_dir(tmp.sub("est2")));
}

TEST_CASE("estimate at a screening penalty reports no edges") {
    TempDir tmp("screen");
    REQUIRE(run_cli({"simulate", "--p", "8", "--steps", "100",
                     "--initial-edges", "8", "--churn-count", "0", "--seed",
                     "7", "--out", tmp.sub("sim")}) == 0);
    REQUIRE(run_cli({"estimate", "--data", tmp.sub("sim") + "/data.csv",
                     "--lambda", "50.0", "--out", tmp.sub("est")}) == 0);
    CHECK(csv_lines(fs::path(tmp.sub("est")) / "edges.csv").size() == 1);
}

TEST_CASE("edge lists shrink as the penalty grows") {
    TempDir tmp("shrink");
    REQUIRE(run_cli({"simulate", "--p", "50", "--steps", "200",
                     "--churn-period", "100", "--seed", "1", "--out",
                     tmp.sub("sim")}) == 0);
    std::vector<std::size_t> counts;
    int idx = 0;
    for (const char* rho : {"0.14", "0.2", "0.24"}) {
        const std::string out = tmp.sub("est" + std::to_string(idx++));
        REQUIRE(run_cli({"estimate", "--data", tmp.sub("sim") + "/data.csv",
                         "--bandwidth", "1.0", "--lambda", rho, "--out",
                         out}) == 0);
        counts.push_back(csv_lines(fs::path(out) / "edges.csv").size() - 1);
    }
    CHECK(counts[0] >= counts[1]);
    CHECK(counts[1] >= counts[2]);
    CHECK(counts[0] > 0);
}

TEST_CASE("path emits one ascending row per lambda") {
    TempDir tmp("path");
    // Malformed numeric flags are configuration errors.
    REQUIRE(run_cli({"simulate", "--p", "6", "--steps", "abc", "--out",
                     tmp.sub("sim")}) == 2);
    REQUIRE(run_cli({"simulate", "--p", "6", "--steps", "150",
                     "--initial-edges", "6", "--churn-count", "0", "--seed",
                     "13", "--out", tmp.sub("sim")}) == 0);

    // Single lambda: exactly one data row.
    REQUIRE(run_cli({"path", "--data", tmp.sub("sim") + "/data.csv",
                     "--lambdas", "0.2", "--out", tmp.sub("one")}) == 0);
    CHECK(csv_lines(fs::path(tmp.sub("one")) / "path.csv").size() == 2);

    // Unordered grids are sorted internally and reported ascending.
    REQUIRE(run_cli({"path", "--data", tmp.sub("sim") + "/data.csv",
                     "--lambdas", "0.2,0.05,0.4", "--truth",
                     tmp.sub("sim") + "/trajectory.jsonl", "--out",
                     tmp.sub("grid")}) == 0);
    const auto lines = csv_lines(fs::path(tmp.sub("grid")) / "path.csv");
    REQUIRE(lines.size() == 4);
    CHECK(lines[1].rfind("0.05,", 0) == 0);
    CHECK(lines[2].rfind("0.2,", 0) == 0);
    CHECK(lines[3].rfind("0.4,", 0) == 0);
    CHECK(lines[0].rfind("lambda,l1_norm,edge_count,precision,recall,"
                         "predictive_risk,empirical_risk,oracle_l1_norm",
                         0) == 0);
}

TEST_CASE("track in oracle mode detects edges at their first nonzero step") {
    TempDir tmp("track");
    REQUIRE(run_cli({"simulate", "--p", "16", "--steps", "81",
                     "--initial-edges", "12", "--churn-period", "40",
                     "--churn-count", "3", "--max-churn-events", "1",
                     "--seed", "17", "--out", tmp.sub("sim")}) == 0);
    REQUIRE(run_cli({"track", "--data", tmp.sub("sim") + "/data.csv",
                     "--truth", tmp.sub("sim") + "/trajectory.jsonl",
                     "--oracle", "--stride", "1", "--out",
                     tmp.sub("trk")}) == 0);
    const auto lines = csv_lines(fs::path(tmp.sub("trk")) / "latency.csv");
    REQUIRE(lines.size() == 7);  // header + 3 added + 3 removed
    for (std::size_t k = 1; k < lines.size(); ++k) {
        std::stringstream ss(lines[k]);
        std::string i, j, kind, birth, decay, death, detected, detected_t;
        std::getline(ss, i, ',');
        std::getline(ss, j, ',');
        std::getline(ss, kind, ',');
        std::getline(ss, birth, ',');
        std::getline(ss, decay, ',');
        std::getline(ss, death, ',');
        std::getline(ss, detected, ',');
        std::getline(ss, detected_t, ',');
        if (kind == "added") {
            CHECK(birth == "0");
            CHECK(detected == "1");  // weight becomes positive one step in
        } else {
            CHECK(kind == "removed");
            CHECK(death == "40");
            CHECK(detected == "40");  // weight hits zero exactly at death
        }
    }

    // stride = steps: a single evaluation step.
    REQUIRE(run_cli({"track", "--data", tmp.sub("sim") + "/data.csv",
                     "--truth", tmp.sub("sim") + "/trajectory.jsonl",
                     "--oracle", "--stride", "81", "--out",
                     tmp.sub("trk1")}) == 0);
    const auto single = csv_lines(fs::path(tmp.sub("trk1")) / "latency.csv");
    REQUIRE(single.size() == 7);
}

TEST_CASE("tracking removes every dying edge of the one-shot churn run") {
    // 401 steps, one churn at step 0, decay completes at t = 0.5. With the
    // penalty in the 0.5..0.6 range the estimator drops all five dying
    // edges by the end of the run (a heavier penalty than point estimation
    // uses, since the smoothing window keeps pre-decay samples in view).
    TempDir tmp("oneshot");
    REQUIRE(run_cli({"simulate", "--p", "50", "--steps", "401",
                     "--churn-period", "200", "--churn-count", "5",
                     "--max-churn-events", "1", "--seed", "3", "--out",
                     tmp.sub("sim")}) == 0);
    REQUIRE(run_cli({"track", "--data", tmp.sub("sim") + "/data.csv",
                     "--truth", tmp.sub("sim") + "/trajectory.jsonl",
                     "--lambda", "0.5", "--stride", "20", "--out",
                     tmp.sub("trk")}) == 0);
    const auto lines = csv_lines(fs::path(tmp.sub("trk")) / "latency.csv");
    int removed_rows = 0;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        std::stringstream ss(lines[k]);
        std::vector<std::string> fields;
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields[2] != "removed") continue;
        ++removed_rows;
        CHECK(fields[5] == "200");   // death step
        CHECK(!fields[6].empty());   // detected before the run ends
    }
    CHECK(removed_rows == 5);
}

TEST_CASE("config file values merge under explicit flags") {
    TempDir tmp("config");
    write_text_file(tmp.path / "config.json",
                    "{\"p\": 7, \"steps\": 40, \"initial-edges\": 5, "
                    "\"churn-count\": 0, \"seed\": 21}");
    REQUIRE(run_cli({"simulate", "--config",
                     (tmp.path / "config.json").string(), "--out",
                     tmp.sub("a")}) == 0);
    const TimeSeriesData a = read_data_csv(fs::path(tmp.sub("a")) / "data.csv");
    CHECK(a.p() == 7);
    CHECK(a.n() == 40);

    // Explicit flag wins over the config value.
    REQUIRE(run_cli({"simulate", "--config",
                     (tmp.path / "config.json").string(), "--p", "4", "--out",
                     tmp.sub("b")}) == 0);
    const TimeSeriesData b = read_data_csv(fs::path(tmp.sub("b")) / "data.csv");
    CHECK(b.p() == 4);

    // Unknown keys are rejected.
    write_text_file(tmp.path / "bad.json", "{\"pp\": 7}");
    CHECK(run_cli({"simulate", "--config", (tmp.path / "bad.json").string(),
                   "--out", tmp.sub("c")}) == 2);
}

TEST_CASE("exit codes distinguish config, numerical and io failures") {
    TempDir tmp("codes");
    CHECK(run_cli({"no-such-command"}) == 2);
    CHECK(run_cli({"estimate", "--data", tmp.sub("missing.csv"), "--out",
                   tmp.sub("x")}) == 4);

    REQUIRE(run_cli({"simulate", "--p", "4", "--steps", "30",
                     "--initial-edges", "3", "--churn-count", "0", "--seed",
                     "2", "--out", tmp.sub("sim")}) == 0);
    // Bandwidth far below the grid spacing, with t0 between grid points:
    // the smoothing window is empty.
    CHECK(run_cli({"estimate", "--data", tmp.sub("sim") + "/data.csv",
                   "--t0", "0.5", "--bandwidth", "1e-6", "--lambda", "0.1",
                   "--out", tmp.sub("e")}) == 3);
    // t0 outside [0, 1] is a config error.
    CHECK(run_cli({"estimate", "--data", tmp.sub("sim") + "/data.csv",
                   "--t0", "1.5", "--out", tmp.sub("f")}) == 2);
}

TEST_CASE("non-convergence still writes flagged outputs and exits 3") {
    TempDir tmp("noncvg");
    REQUIRE(run_cli({"simulate", "--p", "10", "--steps", "400",
                     "--initial-edges", "10", "--churn-count", "2", "--seed",
                     "23", "--out", tmp.sub("sim")}) == 0);
    CHECK(run_cli({"estimate", "--data", tmp.sub("sim") + "/data.csv",
                   "--lambda", "0.05", "--tol", "1e-13", "--max-iter", "1",
                   "--out", tmp.sub("est")}) == 3);
    const std::string precision =
        read_text_file(fs::path(tmp.sub("est")) / "precision.json");
    CHECK(precision.find("\"converged\": false") != std::string::npos);
}

TEST_CASE("devlab commands are deterministic") {
    TempDir tmp("devlab");
    const std::vector<std::string> tail{
        "devlab", "tail", "--n-values", "100,200", "--replicates", "500",
        "--seed", "3"};
    auto t1 = tail;
    t1.push_back("--out");
    t1.push_back(tmp.sub("t1"));
    auto t2 = tail;
    t2.push_back("--out");
    t2.push_back(tmp.sub("t2"));
    REQUIRE(run_cli(t1) == 0);
    REQUIRE(run_cli(t2) == 0);
    CHECK(hash_dir(tmp.sub("t1")) == hash_dir(tmp.sub("t2")));

    REQUIRE(run_cli({"devlab", "mgf", "--t", "0", "--out", tmp.sub("mgf")}) ==
            0);
    const auto mgf_lines = csv_lines(fs::path(tmp.sub("mgf")) / "mgf.csv");
    REQUIRE(mgf_lines.size() == 2);
    CHECK(mgf_lines[1].find(",1,") != std::string::npos);  // closed form = 1

    REQUIRE(run_cli({"devlab", "bias", "--c1", "0", "--c2", "0", "--out",
                     tmp.sub("bias")}) == 0);
    for (std::size_t k = 1;
         k < csv_lines(fs::path(tmp.sub("bias")) / "bias.csv").size(); ++k) {
        const auto row = csv_lines(fs::path(tmp.sub("bias")) / "bias.csv")[k];
        const double bias = parse_double(row.substr(row.find(',') + 1));
        CHECK(bias <= 1e-10);  // constant curve
    }
}

TEST_CASE("threads flag does not change results") {
    TempDir tmp("threads");
    REQUIRE(run_cli({"devlab", "tail", "--n-values", "100,200",
                     "--replicates", "400", "--seed", "9", "--threads", "1",
                     "--out", tmp.sub("a")}) == 0);
    REQUIRE(run_cli({"devlab", "tail", "--n-values", "100,200",
                     "--replicates", "400", "--seed", "9", "--threads", "2",
                     "--out", tmp.sub("b")}) == 0);
    CHECK(hash_dir(tmp.sub("a")) == hash_dir(tmp.sub("b")));
}
