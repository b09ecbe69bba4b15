#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_common.hpp"

#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    std::string cmd = std::string(BURDEN_CLI_PATH) + " " + args + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path temp_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("burden_cli_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

TEST_CASE("validate: golden bundle exits 0, nonexistent path exits 1") {
    CHECK(run_cli("validate " GOLDEN_BUNDLE_DIR) == 0);
    CHECK(run_cli("validate /no/such/bundle") == 1);
}

TEST_CASE("validate: corrupted stage shares exit 2") {
    fs::path dir = temp_dir("corrupt");
    fs::copy(GOLDEN_BUNDLE_DIR, dir,
             fs::copy_options::recursive | fs::copy_options::overwrite_existing);
    std::string content = slurp(dir / "stage_distribution.csv");
    std::string from = "incident,NSCLC,IV,0.55";
    auto pos = content.find(from);
    REQUIRE(pos != std::string::npos);
    content.replace(pos, from.size(), "incident,NSCLC,IV,0.50");
    std::ofstream(dir / "stage_distribution.csv") << content;
    CHECK(run_cli("validate " + dir.string()) == 2);
    fs::remove_all(dir);
}

TEST_CASE("run: emits all report tables with identical numbers across formats") {
    fs::path out = temp_dir("run");
    CHECK(run_cli("run " GOLDEN_BUNDLE_DIR " --out " + out.string() +
                  " --format csv,json,md --dump-intermediates") == 0);
    for (const char* name :
         {"table2", "s17_incident_costs", "s18_prevalent_costs", "s21_sector_burden",
          "daly_s5", "composition_fig3"}) {
        CHECK(fs::exists(out / (std::string(name) + ".csv")));
        CHECK(fs::exists(out / (std::string(name) + ".json")));
        CHECK(fs::exists(out / (std::string(name) + ".md")));
    }
    CHECK(fs::exists(out / "prevalence_by_year.csv"));
    CHECK(fs::exists(out / "case_matrix.csv"));
    CHECK(fs::exists(out / "calibration.csv"));

    // cross-format numeric identity for the grand total row
    double expected =
        burden::report::round_to(testutil::golden_model().report.grand_total, 2);
    auto t = burden::csv::Table::read_file((out / "s21_sector_burden.csv").string());
    double csv_total = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t.text(i, "row") == "total")
            csv_total = t.number(i, "total");
    CHECK(csv_total == doctest::Approx(expected).epsilon(1e-12));

    auto j = nlohmann::json::parse(slurp(out / "s21_sector_burden.json"));
    double json_total = 0;
    for (const auto& row : j)
        if (row.at("row") == "total")
            json_total = row.at("total").get<double>();
    CHECK(json_total == csv_total);

    std::string md = slurp(out / "s21_sector_burden.md");
    CHECK(md.find(burden::report::fmt(expected)) != std::string::npos);
    fs::remove_all(out);
}

TEST_CASE("run: table2 mirrors the case matrix and grand total") {
    fs::path out = temp_dir("table2");
    REQUIRE(run_cli("run " GOLDEN_BUNDLE_DIR " --out " + out.string()) == 0);
    auto t = burden::csv::Table::read_file((out / "table2.csv").string());
    double n_total = 0, grand = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t.text(i, "row") == "cell" && t.text(i, "population") == "incident")
            n_total += t.number(i, "n");
        if (t.text(i, "row") == "cell" && t.text(i, "stage") == "IV" &&
            t.text(i, "population") == "incident")
            CHECK(t.number(i, "n") == doctest::Approx(5661));
        if (t.text(i, "row") == "total")
            grand = t.number(i, "cost_million_usd");
    }
    CHECK(n_total == doctest::Approx(12110).epsilon(0.0002));
    CHECK(grand == doctest::Approx(555.70).epsilon(1e-9));
    fs::remove_all(out);
}

TEST_CASE("simulate: same seed twice gives byte-identical output") {
    fs::path out1 = temp_dir("sim1"), out2 = temp_dir("sim2");
    std::string args = " --iterations 1500 --seed 42 --format csv,json";
    REQUIRE(run_cli("simulate " GOLDEN_BUNDLE_DIR " --out " + out1.string() + args) == 0);
    REQUIRE(run_cli("simulate " GOLDEN_BUNDLE_DIR " --out " + out2.string() + args +
                    " --threads 3") == 0);
    CHECK(slurp(out1 / "table2_intervals.csv") == slurp(out2 / "table2_intervals.csv"));
    CHECK(slurp(out1 / "table2_intervals.json") == slurp(out2 / "table2_intervals.json"));

    // metadata recorded
    auto t = burden::csv::Table::read_file((out1 / "table2_intervals.csv").string());
    REQUIRE(t.size() > 0);
    CHECK(t.number(0, "iterations") == 1500);
    CHECK(t.number(0, "seed") == 42);
    fs::remove_all(out1);
    fs::remove_all(out2);
}

TEST_CASE("simulate: custom percentiles narrow every interval") {
    fs::path wide = temp_dir("wide"), narrow = temp_dir("narrow");
    REQUIRE(run_cli("simulate " GOLDEN_BUNDLE_DIR " --out " + wide.string() +
                    " --iterations 1500 --seed 5") == 0);
    REQUIRE(run_cli("simulate " GOLDEN_BUNDLE_DIR " --out " + narrow.string() +
                    " --iterations 1500 --seed 5 --percentiles 5,95") == 0);
    auto tw = burden::csv::Table::read_file((wide / "table2_intervals.csv").string());
    auto tn = burden::csv::Table::read_file((narrow / "table2_intervals.csv").string());
    REQUIRE(tw.size() == tn.size());
    for (std::size_t i = 0; i < tw.size(); ++i) {
        CHECK(tn.number(i, "lower") >= tw.number(i, "lower"));
        CHECK(tn.number(i, "upper") <= tw.number(i, "upper"));
    }
    CHECK(run_cli("simulate " GOLDEN_BUNDLE_DIR " --out " + wide.string() +
                  " --percentiles 97.5,2.5 --iterations 10") == 2);
    fs::remove_all(wide);
    fs::remove_all(narrow);
}

TEST_CASE("run: unwritable output directory exits 1") {
    CHECK(run_cli("run " GOLDEN_BUNDLE_DIR " --out /proc/forbidden/out") == 1);
}
