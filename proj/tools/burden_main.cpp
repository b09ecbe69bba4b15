// burden: batch CLI over the modelling library.
//
//   burden validate <bundle>
//   burden run <bundle> --out DIR [--format csv,json,md] [--dump-intermediates]
//   burden simulate <bundle> --out DIR [--iterations N] [--seed S]
//                            [--percentiles a,b] [--threads T]
//
// Exit codes: 0 success, 1 I/O failure, 2 validation failure.

#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "burden/burden.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitValidation = 2;

std::set<std::string> parse_formats(const std::string& spec) {
    std::set<std::string> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) {
            if (item != "csv" && item != "json" && item != "md")
                throw burden::ParseError("unknown format '" + item + "'");
            out.insert(item);
        }
    if (out.empty())
        throw burden::ParseError("empty format list");
    return out;
}

burden::ScenarioBundle load_or_exit(const std::string& path, int& rc) {
    try {
        return burden::load_bundle(path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = kExitIo;
        throw;
    }
}

int validate_or_report(const burden::ScenarioBundle& bundle) {
    auto report = burden::validate_bundle(bundle);
    for (const auto& w : report.warnings)
        std::cerr << "warning: " << w << "\n";
    for (const auto& e : report.errors)
        std::cerr << "error: " << e << "\n";
    return report.ok() ? kExitOk : kExitValidation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lung cancer burden-of-disease model"};
    app.require_subcommand(1);

    std::string bundle_path, out_dir;
    std::string format_spec = "csv";
    std::string percentile_spec;
    bool dump_intermediates = false;
    int iterations = 0;
    std::int64_t seed = -1;
    unsigned threads = 0;

    auto* cmd_validate = app.add_subcommand("validate", "check a scenario bundle");
    cmd_validate->add_option("bundle", bundle_path, "bundle directory")->required();

    auto* cmd_run = app.add_subcommand("run", "deterministic pipeline");
    cmd_run->add_option("bundle", bundle_path, "bundle directory")->required();
    cmd_run->add_option("--out", out_dir, "output directory")->required();
    cmd_run->add_option("--format", format_spec, "comma list of csv,json,md");
    cmd_run->add_flag("--dump-intermediates", dump_intermediates,
                      "also emit intermediate matrices");

    auto* cmd_sim = app.add_subcommand("simulate", "second-order Monte Carlo");
    cmd_sim->add_option("bundle", bundle_path, "bundle directory")->required();
    cmd_sim->add_option("--out", out_dir, "output directory")->required();
    cmd_sim->add_option("--format", format_spec, "comma list of csv,json,md");
    cmd_sim->add_option("--iterations", iterations, "iteration count");
    cmd_sim->add_option("--seed", seed, "RNG seed");
    cmd_sim->add_option("--percentiles", percentile_spec, "lower,upper (e.g. 2.5,97.5)");
    cmd_sim->add_option("--threads", threads, "worker threads (0 = auto)");

    CLI11_PARSE(app, argc, argv);

    int rc = kExitOk;
    try {
        if (cmd_validate->parsed()) {
            auto bundle = load_or_exit(bundle_path, rc);
            return validate_or_report(bundle);
        }

        auto bundle = load_or_exit(bundle_path, rc);
        if (int v = validate_or_report(bundle); v != kExitOk)
            return v;
        auto formats = parse_formats(format_spec);

        if (cmd_run->parsed()) {
            auto model = burden::run_model(bundle);
            burden::report::emit_reports(model, bundle, out_dir, formats);
            if (dump_intermediates)
                burden::report::dump_intermediates(model, out_dir);
            return kExitOk;
        }

        // simulate
        int n = iterations > 0 ? iterations : bundle.manifest.mc_defaults.iterations;
        std::uint64_t s = seed >= 0 ? static_cast<std::uint64_t>(seed)
                                    : bundle.manifest.mc_defaults.seed;
        double lo = bundle.manifest.mc_defaults.lower_pct;
        double hi = bundle.manifest.mc_defaults.upper_pct;
        if (!percentile_spec.empty()) {
            if (std::sscanf(percentile_spec.c_str(), "%lf,%lf", &lo, &hi) != 2 ||
                !(lo > 0 && hi < 100 && lo < hi)) {
                std::cerr << "error: bad --percentiles '" << percentile_spec << "'\n";
                return kExitValidation;
            }
        }
        auto spec = burden::UncertaintySpec::for_bundle(bundle);
        auto summary = burden::simulate(bundle, n, s, spec, lo, hi, threads);
        burden::report::emit_simulation(summary, out_dir, formats);
        return kExitOk;
    } catch (const burden::ParseError& e) {
        if (rc == kExitOk) {
            std::cerr << "error: " << e.what() << "\n";
            rc = kExitValidation;
        }
        return rc;
    } catch (const std::exception& e) {
        if (rc == kExitOk) {
            std::cerr << "error: " << e.what() << "\n";
            rc = kExitIo;
        }
        return rc;
    }
}
