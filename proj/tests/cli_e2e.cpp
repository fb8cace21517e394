// Drives the built CLI end to end on the bundled toy dataset.
// argv[1] = path to the laebound binary, argv[2] = data directory.

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what.c_str());
    if (!ok) ++failures;
}

int run(const std::string& command) {
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: cli_e2e <laebound-binary> <data-dir>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const fs::path data_dir = argv[2];
    const fs::path work = fs::temp_directory_path() / "laeb_cli_e2e";
    fs::remove_all(work);
    fs::create_directories(work);

    const fs::path toy = data_dir / "toy.csv";
    expect(fs::exists(toy), "bundled toy dataset exists");

    const fs::path h = work / "h.txt";
    expect(run(cli + " ingest --input " + toy.string() + " --output " + h.string() +
               " --users-map " + (work / "users.map").string() + " --items-map " +
               (work / "items.map").string() + " > " + (work / "ingest.out").string()) == 0,
           "ingest exits 0");
    expect(fs::exists(h), "ingest writes the sparse matrix");
    expect(fs::exists(work / "users.map"), "ingest writes the user re-index map");

    const fs::path train = work / "train.txt";
    const fs::path test = work / "test.txt";
    expect(run(cli + " split --input " + h.string() + " --train " + train.string() +
               " --test " + test.string() + " --test-fraction 0.3 --seed 11 > /dev/null") == 0,
           "split exits 0");

    const fs::path model = work / "w.bin";
    expect(run(cli + " train-ease --input " + train.string() + " --output " +
               model.string() + " --gamma 100 > /dev/null") == 0,
           "train-ease exits 0");

    const fs::path bound_prefix = work / "bound";
    expect(run(cli + " bound --model " + model.string() + " --test " + test.string() +
               " --population " + h.string() + " --p 0.5 --seed 12 --report-prefix " +
               bound_prefix.string() + " > /dev/null") == 0,
           "bound exits 0");
    expect(fs::exists(work / "bound.txt") && fs::exists(work / "bound.json"),
           "bound writes both report files");

    {
        const auto report = nlohmann::json::parse(slurp(work / "bound.json"));
        bool identity_ok = true;
        for (const auto& rec : report.at("grid")) {
            if (rec.contains("rejected")) continue;
            const double rebuilt =
                rec.at("emp_risk_exp").get<double>() +
                (rec.at("kl").get<double>() + rec.at("ln_L_over_delta").get<double>() +
                 rec.at("log_mgf").get<double>()) /
                    rec.at("lambda").get<double>();
            if (std::abs(rebuilt - rec.at("RH").get<double>()) >
                1e-9 * std::max(1.0, std::abs(rebuilt))) {
                identity_ok = false;
            }
        }
        expect(identity_ok, "bound report satisfies the RH decomposition identity");
    }

    expect(run(cli + " metrics --model " + model.string() + " --test " + test.string() +
               " --p 0.5 --seed 12 --ks 10,20 > " + (work / "metrics.out").string()) == 0,
           "metrics exits 0");
    {
        const std::string out = slurp(work / "metrics.out");
        expect(out.find("recall@10") != std::string::npos &&
                   out.find("ndcg@20") != std::string::npos,
               "metrics prints both metrics");
    }

    // Full pipeline, twice, demanding byte-identical reports.
    const fs::path config = work / "run.cfg";
    {
        std::ofstream out(config);
        out << "dataset = " << toy.string() << "\n";
        out << "seed = 33\n";
        out << "sigma = 0.01\n";
        out << "metric_ks = 10,20\n";
        out << "output_dir = " << (work / "out1").string() << "\n";
    }
    expect(run(cli + " run --config " + config.string() + " > /dev/null") == 0,
           "run exits 0");
    const std::string summary1 = slurp(work / "out1" / "run_summary.txt");
    expect(summary1.find("gamma\tlambda\tLH\tRH\trecall@10\trecall@20\tndcg@10\tndcg@20") !=
               std::string::npos,
           "run summary keeps the documented column schema");
    expect(fs::exists(work / "out1" / "config_resolved.txt"),
           "run embeds the resolved config");
    {
        std::stringstream counter(summary1);
        std::string line;
        int rows = 0;
        while (std::getline(counter, line)) {
            if (!line.empty() && line[0] != '#' && line.rfind("gamma", 0) != 0) ++rows;
        }
        expect(rows == 7, "run emits one row per default gamma (7 rows)");
    }
    expect(run(cli + " run --config " + config.string() + " --set output_dir=" +
               (work / "out2").string() + " > /dev/null") == 0,
           "second run exits 0");
    const std::string summary2 = slurp(work / "out2" / "run_summary.txt");
    expect(summary1 == summary2, "identical config and seeds give byte-identical reports");
    expect(slurp(work / "out1" / "bound_gamma50.json") ==
               slurp(work / "out2" / "bound_gamma50.json"),
           "per-gamma reports are byte-identical too");

    // Exit codes: user error -> 1.
    expect(run(cli + " split --input " + h.string() + " --train " + train.string() +
               " --test " + test.string() + " --test-fraction 1.5 2> /dev/null") == 1,
           "invalid test fraction exits 1");
    expect(run(cli + " ingest --input " + (work / "missing.csv").string() + " --output " +
               (work / "x.txt").string() + " 2> /dev/null") == 1,
           "missing dataset exits 1");

    // mlr-demo and quick verify smoke.
    expect(run(cli + " mlr-demo --seed 5 > " + (work / "demo.out").string()) == 0,
           "mlr-demo exits 0");
    {
        const std::string out = slurp(work / "demo.out");
        expect(out.find("psi_exact") != std::string::npos &&
                   out.find("bound holds") != std::string::npos,
               "mlr-demo prints the psi table and a holding bound");
    }

    std::printf(failures == 0 ? "cli_e2e: all checks passed\n"
                              : "cli_e2e: %d checks FAILED\n",
                failures);
    return failures == 0 ? 0 : 1;
}
