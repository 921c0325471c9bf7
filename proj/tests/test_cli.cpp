#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "bridgevol/diagram.hpp"
#include "bridgevol/io.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = BRIDGEVOL_CLI_PATH;

int run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) { return bridgevol::io::read_text_file(p.string()); }

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "bridgevol_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("simulate: identical seeds give byte-identical CSVs across thread counts") {
    const auto a = fresh_dir("sim_a");
    const auto b = fresh_dir("sim_b");
    const auto c = fresh_dir("sim_c");
    REQUIRE(run("simulate --what ohlc --n 4000 --K 64 --kappa 0.7 --seed 11 --threads 1 --out " +
                a.string()) == 0);
    REQUIRE(run("simulate --what ohlc --n 4000 --K 64 --kappa 0.7 --seed 11 --threads 2 --out " +
                b.string()) == 0);
    REQUIRE(run("simulate --what ohlc --n 4000 --K 64 --kappa 0.7 --seed 12 --threads 1 --out " +
                c.string()) == 0);
    CHECK(slurp(a / "ohlc.csv") == slurp(b / "ohlc.csv"));
    CHECK(slurp(a / "ohlc.csv") != slurp(c / "ohlc.csv"));
}

TEST_CASE("sidecar reruns reproduce the CSV bytes") {
    const auto a = fresh_dir("rerun_a");
    const auto b = fresh_dir("rerun_b");
    REQUIRE(run("simulate --what path --K 256 --gamma 0.4 --seed 9 --out " + a.string()) == 0);
    // The sidecar doubles as a config file; only the output dir changes.
    REQUIRE(run("simulate --config " + (a / "simulate.sidecar.json").string() + " --out " +
                b.string()) == 0);
    CHECK(slurp(a / "path.csv") == slurp(b / "path.csv"));
}

TEST_CASE("variance-curve endpoints reproduce the printed values") {
    const auto dir = fresh_dir("var_curve");
    REQUIRE(run("variance-curve --kappa-grid 0,1 --grid 100 --out " + dir.string()) == 0);
    std::ifstream in(dir / "variance_curve.csv");
    std::string header, row0, row1;
    std::getline(in, header);
    std::getline(in, row0);
    std::getline(in, row1);
    CHECK(header == "kappa,var_me,var_gk,var_park");
    double kappa, me, gk, park;
    REQUIRE(std::sscanf(row0.c_str(), "%lf,%lf,%lf,%lf", &kappa, &me, &gk, &park) == 4);
    CHECK(me == doctest::Approx(0.2584).epsilon(0.003 / 0.2584));
    CHECK(gk == doctest::Approx(0.2693).epsilon(0.003 / 0.2693));
    CHECK(park == doctest::Approx(0.4073).epsilon(0.003 / 0.4073));
    REQUIRE(std::sscanf(row1.c_str(), "%lf,%lf,%lf,%lf", &kappa, &me, &gk, &park) == 4);
    CHECK(me == doctest::Approx(0.1794).epsilon(0.003 / 0.1794));
    CHECK(gk == doctest::Approx(0.2).epsilon(0.005 / 0.2));
    CHECK(park == doctest::Approx(0.2).epsilon(0.005 / 0.2));
}

TEST_CASE("variance-curve at lambda = 1 reproduces the kappa = 1 values") {
    const auto dir = fresh_dir("var_curve_l1");
    REQUIRE(run("variance-curve --lambda 1 --kappa-grid 1 --grid 100 --out " + dir.string()) ==
            0);
    std::ifstream in(dir / "variance_curve.csv");
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    double kappa, me, gk, park;
    REQUIRE(std::sscanf(row.c_str(), "%lf,%lf,%lf,%lf", &kappa, &me, &gk, &park) == 4);
    CHECK(me == doctest::Approx(0.0428).epsilon(0.001 / 0.0428));
    CHECK(gk == doctest::Approx(0.0473).epsilon(0.001 / 0.0473));
    CHECK(park == doctest::Approx(0.0472).epsilon(0.001 / 0.0472));
}

TEST_CASE("bias-curve: unbiased at kappa = 0, biased in between") {
    const auto dir = fresh_dir("bias_curve");
    REQUIRE(run("bias-curve --kappa-grid 0,0.5,1 --out " + dir.string()) == 0);
    std::ifstream in(dir / "bias_curve.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "kappa,mean_gk,mean_park");
    double kappa, gk, park;
    std::getline(in, line);
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &kappa, &gk, &park) == 3);
    CHECK(gk == doctest::Approx(1.0).epsilon(0.003));
    CHECK(park == doctest::Approx(1.0).epsilon(0.003));
    std::getline(in, line);
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &kappa, &gk, &park) == 3);
    CHECK(std::fabs(gk - 1.0) > 0.003);
    CHECK(std::fabs(park - 1.0) > 0.003);
}

TEST_CASE("sample-panel: determinism and single-row case") {
    const auto a = fresh_dir("panel_a");
    const auto b = fresh_dir("panel_b");
    const std::string args =
        "sample-panel --n 50 --kappa 0.99 --K 512 --grid 80 --seed 21 --out ";
    REQUIRE(run(args + a.string()) == 0);
    REQUIRE(run(args + b.string()) == 0);
    CHECK(slurp(a / "sample_panel.csv") == slurp(b / "sample_panel.csv"));

    const auto single = fresh_dir("panel_single");
    REQUIRE(run("sample-panel --n 1 --kappa 0.5 --K 64 --grid 60 --seed 5 --out " +
                single.string()) == 0);
    std::istringstream csv(slurp(single / "sample_panel.csv"));
    std::string line;
    int lines = 0;
    while (std::getline(csv, line)) ++lines;
    CHECK(lines == 2);  // header + one row
}

TEST_CASE("diagram-dump round-trips through the loader") {
    const auto dir = fresh_dir("dump");
    REQUIRE(run("diagram-dump --what me --lambda 2 --kappa 0.95 --grid 50 --out " +
                dir.string()) == 0);
    const auto d = bridgevol::diagram::load_diagram_file((dir / "me_diagram.csv").string());
    CHECK(d.kind == bridgevol::diagram::DiagramKind::most_efficient);
    CHECK(d.lambda == 2.0);
    CHECK(d.kappa == 0.95);
    CHECK(d.table.rows() == 50);

    REQUIRE(run("diagram-dump --what weight --lambda 2 --kappa 0.5 --grid 40 --out " +
                dir.string()) == 0);
    std::istringstream csv(slurp(dir / "weight_grid.csv"));
    std::string header;
    std::getline(csv, header);
    CHECK(header == "theta,phi,g");
}

TEST_CASE("estimate: synthetic ticks recover sigma^2 T") {
    const auto dir = fresh_dir("roundtrip");
    // One year of daily intervals at sigma = 0.2/sqrt(year). Grid extremes
    // bias the mean down by a few percent at 2000 ticks per interval; the
    // bracket allows 3 SE plus that bias.
    const double sigma = 0.2, T = 0.004;
    REQUIRE(run("simulate --what ticks --n 250 --K 2000 --sigma 0.2 --T 0.004 --price0 50"
                " --gamma 0.03 --seed 77 --out " +
                dir.string()) == 0);
    REQUIRE(run("estimate --input " + (dir / "ticks.csv").string() +
                " --input-kind ticks --interval 0.004 --estimator gk --lambda 2 --kappa 0"
                " --grid 80 --out " +
                dir.string()) == 0);
    const auto report = nlohmann::json::parse(slurp(dir / "estimate_report.json"));
    const double mean = report["mean"];
    const double se = report["standard_error"];
    CHECK(report["n"] == 250);
    CHECK(std::fabs(mean - sigma * sigma * T) < 3.0 * se + 0.05 * sigma * sigma * T);
    const double annualized = report["annualized_mean"];
    CHECK(annualized == doctest::Approx(mean / T).epsilon(1e-12));

    // Bridge estimator on the same ticks.
    const auto dir2 = fresh_dir("roundtrip_bridge");
    REQUIRE(run("estimate --input " + (dir / "ticks.csv").string() +
                " --input-kind ticks --interval 0.004 --estimator me --lambda 2 --kappa 0.5"
                " --grid 80 --out " +
                dir2.string()) == 0);
    const auto report2 = nlohmann::json::parse(slurp(dir2 / "estimate_report.json"));
    const double mean2 = report2["mean"];
    const double se2 = report2["standard_error"];
    CHECK(std::fabs(mean2 - sigma * sigma * T) < 3.0 * se2 + 0.05 * sigma * sigma * T);
}

TEST_CASE("estimate: OHLC input with a bad row keeps going and reports it") {
    const auto dir = fresh_dir("badrow");
    std::ostringstream csv;
    csv << "open,high,low,close,t_start,t_end\n";
    for (int i = 0; i < 200; ++i) {
        if (i == 57) {
            csv << "100,101,notanumber,100.5," << i << "," << i + 1 << "\n";
            continue;
        }
        csv << "100," << 100 * std::exp(0.01 + 0.0001 * (i % 7)) << ","
            << 100 * std::exp(-0.012) << "," << 100 * std::exp(0.002) << "," << i << ","
            << i + 1 << "\n";
    }
    bridgevol::io::write_text_file((dir / "ohlc_input.csv").string(), csv.str());
    REQUIRE(run("estimate --input " + (dir / "ohlc_input.csv").string() +
                " --input-kind ohlc --estimator park --lambda 2 --kappa 0 --out " +
                dir.string()) == 0);
    const auto report = nlohmann::json::parse(slurp(dir / "estimate_report.json"));
    CHECK(report["n"] == 199);
    CHECK(report["warnings"].size() == 1);
    std::istringstream estimates(slurp(dir / "estimates.csv"));
    std::string line;
    int rows = -1;  // discount header
    while (std::getline(estimates, line)) ++rows;
    CHECK(rows == 199);
}

TEST_CASE("exit codes: config, input and success are distinct") {
    const auto dir = fresh_dir("codes");
    // Unknown estimator -> config error.
    CHECK(run("estimate --input /nonexistent.csv --estimator bogus --out " + dir.string()) ==
          2);
    // Missing input file -> input error.
    CHECK(run("estimate --input /nonexistent.csv --estimator park --kappa 0 --out " +
              dir.string()) == 3);
    // Empty input file -> input error.
    bridgevol::io::write_text_file((dir / "empty.csv").string(), "");
    CHECK(run("estimate --input " + (dir / "empty.csv").string() +
              " --estimator park --kappa 0 --out " + dir.string()) == 3);
    // OHLC input cannot serve a bridge diagram.
    bridgevol::io::write_text_file((dir / "ok.csv").string(),
                                   "open,high,low,close,t_start,t_end\n100,101,99,100,0,1\n");
    CHECK(run("estimate --input " + (dir / "ok.csv").string() +
              " --estimator park --kappa 0.5 --out " + dir.string()) == 3);
    CHECK(run("simulate --what nonsense --out " + dir.string()) == 2);
    CHECK(run("simulate --what path --K 128 --out " + dir.string()) == 0);
}

TEST_CASE("config file values are overridden by explicit flags") {
    const auto dir = fresh_dir("config");
    bridgevol::io::write_text_file((dir / "run.conf").string(),
                                   "# panel defaults\nn = 3\nkappa = 0.5\nK = 32\nseed = 4\n"
                                   "grid = 60\nout = " +
                                       dir.string() + "\n");
    REQUIRE(run("sample-panel --config " + (dir / "run.conf").string() + " --n 5") == 0);
    std::istringstream csv(slurp(dir / "sample_panel.csv"));
    std::string line;
    int lines = 0;
    while (std::getline(csv, line)) ++lines;
    CHECK(lines == 6);  // header + five rows (flag wins over config)
}
