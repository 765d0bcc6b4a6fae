// Command-line front end: scenario batches, the random bound sweep, the
// hashing/breeding Monte Carlo driver, and CSV/JSON report generation.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "locc/errors.hpp"
#include "locc/report.hpp"

namespace {

// LOCC_WORKERS limits the number of concurrent trial workers.
void configure_workers() {
#ifdef _OPENMP
    if (const char* env = std::getenv("LOCC_WORKERS")) {
        const int workers = std::atoi(env);
        if (workers > 0) omp_set_num_threads(workers);
    }
#endif
}

std::vector<std::pair<std::size_t, std::size_t>> parse_dims(const std::string& list) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::size_t> singles;
    std::stringstream ss(list);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        const auto x = token.find('x');
        if (x == std::string::npos) {
            singles.push_back(std::stoull(token));
        } else {
            pairs.emplace_back(std::stoull(token.substr(0, x)),
                               std::stoull(token.substr(x + 1)));
        }
    }
    // bare values form the full cross product, e.g. "2,3,4" -> {2,3,4}^2
    for (std::size_t a : singles) {
        for (std::size_t b : singles) pairs.emplace_back(a, b);
    }
    if (pairs.empty()) throw locc::ContractError("--dims: no dimension pairs given");
    return pairs;
}

std::vector<double> parse_p(const std::string& list) {
    std::vector<double> p;
    std::stringstream ss(list);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (!token.empty()) p.push_back(std::stod(token));
    }
    return p;
}

int run_command(const std::string& file, const std::string& only) {
    std::vector<locc::Scenario> scenarios =
        file == "builtin" ? locc::builtin_scenarios() : locc::load_scenarios(file);
    std::vector<locc::ReportRow> rows;
    bool matched = false;
    for (const locc::Scenario& s : scenarios) {
        if (!only.empty() && s.name != only) continue;
        matched = true;
        auto got = locc::run_scenario(s);
        rows.insert(rows.end(), got.begin(), got.end());
    }
    if (!only.empty() && !matched)
        throw locc::ContractError("--only: no scenario named " + only);
    std::cout << locc::to_csv(rows);
    return 0;
}

int sweep_command(const std::string& kind, std::size_t n, const std::vector<double>& p,
                  std::size_t margin, std::size_t trials, std::uint64_t seed) {
    if (kind != "hashing" && kind != "breeding")
        throw locc::ContractError("sweep: kind must be hashing or breeding");
    locc::Scenario s;
    s.name = kind + "-sweep";
    s.backend = "index";
    s.protocol = kind;
    s.n = n;
    s.p = p;
    s.margin = margin;
    s.seed = seed;
    s.trials = trials;
    std::vector<locc::ReportRow> rows = locc::run_scenario(s);
    std::cout << locc::to_csv(rows);

    // identification statistics need the per-trial parity stats
    std::size_t identified = 0;
    double yield = 0.0;
    auto fn = kind == "hashing" ? locc::hashing : locc::breeding;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = trials == 1 ? seed : rows[t].seed;
        const locc::ProtocolOutcome out = fn(n, p, margin, trial_seed);
        identified += out.parity->identified ? 1 : 0;
        yield += static_cast<double>(out.parity->yield_pairs);
    }
    std::fprintf(stderr, "# identification_rate=%.6f mean_yield_per_copy=%.6f\n",
                 trials ? static_cast<double>(identified) / static_cast<double>(trials) : 0.0,
                 trials ? yield / static_cast<double>(trials) / static_cast<double>(n) : 0.0);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    configure_workers();
    CLI::App app{"1-way LOCC information/entanglement ledger toolkit"};
    app.require_subcommand(1);

    std::string scenario_file, only;
    CLI::App* run = app.add_subcommand("run", "Run scenarios from a JSON file");
    run->add_option("scenario-file", scenario_file,
                    "Scenario JSON file, or the literal 'builtin'")
        ->required();
    run->add_option("--only", only, "Run only the named scenario");

    std::size_t trials = 100;
    std::string dims_list = "2,3,4";
    std::uint64_t seed = 1;
    CLI::App* verify = app.add_subcommand("verify-bound",
                                          "Random ensemble/protocol bound sweep");
    verify->add_option("--trials", trials, "Number of random trials");
    verify->add_option("--dims", dims_list,
                       "Dimensions: bare values cross-producted (2,3,4) or pairs (2x3)");
    verify->add_option("--seed", seed, "Base seed");

    std::string sweep_kind;
    std::size_t sweep_n = 48, sweep_margin = 10, sweep_trials = 100;
    std::string sweep_p = "0.9,0.0333333333333333,0.0333333333333333,0.0333333333333333";
    std::uint64_t sweep_seed = 1;
    CLI::App* sweep = app.add_subcommand("sweep", "Monte Carlo hashing/breeding sweep");
    sweep->add_option("kind", sweep_kind, "hashing or breeding")->required();
    sweep->add_option("--n", sweep_n, "Number of source pairs");
    sweep->add_option("--p", sweep_p, "Bell-diagonal weights P1,P2,P3,P4");
    sweep->add_option("--margin", sweep_margin, "Extra parity rounds beyond ceil(n H(p))");
    sweep->add_option("--trials", sweep_trials, "Number of trials");
    sweep->add_option("--seed", sweep_seed, "Base seed");

    std::string format = "csv", out_path = "report.csv";
    CLI::App* report = app.add_subcommand("report",
                                          "Run the built-in scenarios and write a report");
    report->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    report->add_option("--out", out_path, "Output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed()) return run_command(scenario_file, only);
        if (verify->parsed()) {
            const auto rows = locc::verify_bound(trials, parse_dims(dims_list), seed);
            std::cout << locc::to_csv(rows);
            return 0;
        }
        if (sweep->parsed()) {
            return sweep_command(sweep_kind, sweep_n, parse_p(sweep_p), sweep_margin,
                                 sweep_trials, sweep_seed);
        }
        if (report->parsed()) {
            std::vector<locc::ReportRow> rows;
            for (const locc::Scenario& s : locc::builtin_scenarios()) {
                auto got = locc::run_scenario(s);
                rows.insert(rows.end(), got.begin(), got.end());
            }
            locc::write_file(out_path, format == "csv" ? locc::to_csv(rows)
                                                       : locc::to_json(rows, true));
            return 0;
        }
    } catch (const locc::BoundViolationError& e) {
        std::fprintf(stderr, "bound violation: %s\n", e.what());
        return 3;
    } catch (const locc::NumericError& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 4;
    } catch (const locc::ContractError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const locc::CapacityError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    }
    return 0;
}
