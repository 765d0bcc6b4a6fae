#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "locc/engine.hpp"
#include "locc/protocols.hpp"

namespace locc {

// One entry of a scenario file: a named protocol run on a chosen backend.
struct Scenario {
    std::string name;
    std::string backend = "index";  // "index" | "matrix"
    std::string protocol;
    // protocol parameters
    std::size_t d = 2;
    std::size_t copies = 3;
    std::size_t n = 0;
    std::size_t margin = 0;
    std::vector<double> p;
    std::string code = "bitflip3";  // "bitflip3" | "five_qubit" | file path
    std::uint64_t seed = 1;
    std::size_t trials = 1;
};

struct ReportRow {
    std::string scenario;
    double d1 = 0.0;
    double d2 = 0.0;
    double n_bits = 0.0;
    double e_i = 0.0;
    double i_a = 0.0;
    double i_b = 0.0;
    double i_total = 0.0;
    double e_f = 0.0;
    double e_distilled = 0.0;
    double gap = 0.0;
    bool saturated = false;  // |gap| <= 1e-6
    std::uint64_t seed = 0;
    double runtime_s = 0.0;  // excluded from CSV to keep it byte-deterministic
    std::optional<Ledger> ledger;  // carried for JSON transcript dumps
};

ReportRow row_from_ledger(const std::string& scenario, const Ledger& ledger,
                          std::uint64_t seed, double runtime_s);

// Parse a JSON scenario file ({"scenarios": [...]}).
std::vector<Scenario> load_scenarios(const std::string& path);
std::vector<Scenario> parse_scenarios(const std::string& json_text);

// The named scenarios covering the paper's worked examples.
std::vector<Scenario> builtin_scenarios();

// One row per trial plus an aggregate mean row. Trials run concurrently up
// to the configured worker count; row order follows the trial index.
std::vector<ReportRow> run_scenario(const Scenario& s);

// Random (ensemble, 1-way protocol) pairs; throws BoundViolationError on any
// ledger, Holevo-chain, or monotonicity violation. Each side's dimension is
// capped at 16 for this driver.
std::vector<ReportRow> verify_bound(std::size_t trials,
                                    const std::vector<std::pair<std::size_t, std::size_t>>& dims,
                                    std::uint64_t seed);

// Fixed header, 9 significant digits; excludes runtime.
std::string to_csv(const std::vector<ReportRow>& rows);

// Superset of the CSV content; includes runtime and, when requested, the
// full transcript distribution of each row.
std::string to_json(const std::vector<ReportRow>& rows, bool include_transcripts);

void write_file(const std::string& path, const std::string& content);

}  // namespace locc
