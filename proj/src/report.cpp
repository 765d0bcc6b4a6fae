#include "locc/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "locc/errors.hpp"

namespace locc {
namespace {

using nlohmann::json;

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string fmt_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

// splitmix-style per-trial seed derivation
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t trial) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (trial + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

StabilizerCode code_by_name(const std::string& name) {
    if (name == "bitflip3") return StabilizerCode::bitflip3();
    if (name == "five_qubit") return StabilizerCode::five_qubit();
    std::ifstream in(name);
    if (!in) throw ContractError("scenario: unknown code and unreadable file: " + name);
    std::stringstream text;
    text << in.rdbuf();
    return StabilizerCode::load(text.str());
}

// Runs one trial of the scenario; ledger plus human-oriented extras dropped.
Ledger one_trial(const Scenario& s, std::uint64_t trial_seed) {
    const bool matrix = s.backend == "matrix";
    if (s.backend != "matrix" && s.backend != "index")
        throw ContractError("scenario: backend must be matrix or index");

    if (s.protocol == "two_copy_discrimination") {
        return matrix ? two_copy_discrimination_matrix(s.d)
                      : two_copy_discrimination(s.d).ledger;
    }
    if (s.protocol == "full_info_then_keep") {
        return matrix ? full_info_then_keep_matrix(s.copies)
                      : full_info_then_keep(s.copies).ledger;
    }
    if (s.protocol == "bxor_chain") {
        return matrix ? bxor_chain_matrix(s.copies) : bxor_chain(s.copies).ledger;
    }
    if (s.protocol == "qutrit_two_copy_partial") {
        return matrix ? qutrit_two_copy_partial_matrix() : qutrit_two_copy_partial().ledger;
    }
    if (s.protocol == "ebit_assisted_discrimination") {
        return matrix ? ebit_assisted_discrimination_matrix(s.d)
                      : ebit_assisted_discrimination(s.d).ledger;
    }
    if (s.protocol == "error_correct_distill") {
        if (matrix) {
            if (s.code != "bitflip3")
                throw ContractError("scenario: the matrix backend supports code bitflip3 only");
            return error_correct_distill_matrix();
        }
        return error_correct_distill(code_by_name(s.code)).ledger;
    }
    if (s.protocol == "recurrence") {
        if (matrix) throw ContractError("scenario: recurrence runs on the index backend");
        return recurrence_ledger(s.p).ledger;
    }
    if (s.protocol == "hashing" || s.protocol == "breeding") {
        if (matrix)
            throw ContractError("scenario: hashing/breeding run on the index backend");
        auto fn = s.protocol == "hashing" ? hashing : breeding;
        return fn(s.n, s.p, s.margin, trial_seed).ledger;
    }
    throw ContractError("scenario: unknown protocol: " + s.protocol);
}

}  // namespace

ReportRow row_from_ledger(const std::string& scenario, const Ledger& ledger,
                          std::uint64_t seed, double runtime_s) {
    ReportRow r;
    r.scenario = scenario;
    // every scenario here is dimension-symmetric: log2(d1 d2) = n_bits
    r.d1 = std::exp2(ledger.n_bits / 2.0);
    r.d2 = r.d1;
    r.n_bits = ledger.n_bits;
    r.e_i = ledger.e_i;
    r.i_a = ledger.i_a;
    r.i_b = ledger.i_b;
    r.i_total = ledger.i_total;
    r.e_f = ledger.e_f;
    r.e_distilled = ledger.e_distilled;
    r.gap = ledger.gap;
    r.saturated = std::abs(ledger.gap) <= 1e-6;
    r.seed = seed;
    r.runtime_s = runtime_s;
    r.ledger = ledger;
    return r;
}

std::vector<Scenario> parse_scenarios(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ContractError(std::string("scenario file: ") + e.what());
    }
    if (!doc.contains("scenarios") || !doc["scenarios"].is_array())
        throw ContractError("scenario file: missing 'scenarios' array");
    std::vector<Scenario> out;
    for (const json& item : doc["scenarios"]) {
        try {
            Scenario s;
            s.name = item.at("name").get<std::string>();
            s.protocol = item.at("protocol").get<std::string>();
            if (item.contains("backend")) s.backend = item["backend"].get<std::string>();
            if (item.contains("d")) s.d = item["d"].get<std::size_t>();
            if (item.contains("copies")) s.copies = item["copies"].get<std::size_t>();
            if (item.contains("n")) s.n = item["n"].get<std::size_t>();
            if (item.contains("margin")) s.margin = item["margin"].get<std::size_t>();
            if (item.contains("p")) s.p = item["p"].get<std::vector<double>>();
            if (item.contains("code")) s.code = item["code"].get<std::string>();
            if (item.contains("seed")) s.seed = item["seed"].get<std::uint64_t>();
            if (item.contains("trials")) s.trials = item["trials"].get<std::size_t>();
            out.push_back(std::move(s));
        } catch (const json::exception& e) {
            throw ContractError(std::string("scenario file: ") + e.what());
        }
    }
    return out;
}

std::vector<Scenario> load_scenarios(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ContractError("scenario file: cannot open " + path);
    std::stringstream text;
    text << in.rdbuf();
    return parse_scenarios(text.str());
}

std::vector<Scenario> builtin_scenarios() {
    std::vector<Scenario> out;
    auto add = [&out](const std::string& name, const std::string& backend,
                      const std::string& protocol) -> Scenario& {
        Scenario s;
        s.name = name;
        s.backend = backend;
        s.protocol = protocol;
        out.push_back(std::move(s));
        return out.back();
    };
    add("ex1-full-info", "matrix", "full_info_then_keep").copies = 3;
    add("ex1-bxor-chain", "matrix", "bxor_chain").copies = 3;
    add("ex2-bxor-chain-4", "matrix", "bxor_chain").copies = 4;
    add("ex3-qutrit-partial", "matrix", "qutrit_two_copy_partial");
    add("ex3-qutrit-full", "matrix", "two_copy_discrimination").d = 3;
    add("qubit-two-copy", "index", "two_copy_discrimination").d = 2;
    add("ebit-assisted-d2", "index", "ebit_assisted_discrimination").d = 2;
    add("ebit-assisted-d3", "index", "ebit_assisted_discrimination").d = 3;
    add("bitflip3-matrix", "matrix", "error_correct_distill").code = "bitflip3";
    add("five-qubit-index", "index", "error_correct_distill").code = "five_qubit";
    add("recurrence-0.7", "index", "recurrence").p = {0.7, 0.1, 0.1, 0.1};
    Scenario& h = add("hashing-48", "index", "hashing");
    h.n = 48;
    h.margin = 10;
    h.p = {0.9, 0.1 / 3, 0.1 / 3, 0.1 / 3};
    h.seed = 7;
    h.trials = 8;
    Scenario& b = add("breeding-24", "index", "breeding");
    b.n = 24;
    b.margin = 10;
    b.p = {0.9, 0.1 / 3, 0.1 / 3, 0.1 / 3};
    b.seed = 7;
    b.trials = 8;
    return out;
}

std::vector<ReportRow> run_scenario(const Scenario& s) {
    if (s.trials == 0) return {};
    std::vector<ReportRow> rows(s.trials);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (long long t = 0; t < static_cast<long long>(s.trials); ++t) {
        try {
            const std::uint64_t trial_seed =
                s.trials == 1 ? s.seed : mix_seed(s.seed, static_cast<std::uint64_t>(t));
            const double t0 = now_seconds();
            const Ledger ledger = one_trial(s, trial_seed);
            rows[static_cast<std::size_t>(t)] =
                row_from_ledger(s.name, ledger, trial_seed, now_seconds() - t0);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    ReportRow mean;
    mean.scenario = s.name + "/mean";
    mean.seed = s.seed;
    for (const ReportRow& r : rows) {
        mean.d1 += r.d1;
        mean.d2 += r.d2;
        mean.n_bits += r.n_bits;
        mean.e_i += r.e_i;
        mean.i_a += r.i_a;
        mean.i_b += r.i_b;
        mean.i_total += r.i_total;
        mean.e_f += r.e_f;
        mean.e_distilled += r.e_distilled;
        mean.gap += r.gap;
        mean.runtime_s += r.runtime_s;
    }
    const double k = static_cast<double>(s.trials);
    mean.d1 /= k;
    mean.d2 /= k;
    mean.n_bits /= k;
    mean.e_i /= k;
    mean.i_a /= k;
    mean.i_b /= k;
    mean.i_total /= k;
    mean.e_f /= k;
    mean.e_distilled /= k;
    mean.gap /= k;
    mean.saturated = std::abs(mean.gap) <= 1e-6;
    rows.push_back(std::move(mean));
    return rows;
}

std::vector<ReportRow> verify_bound(
    std::size_t trials, const std::vector<std::pair<std::size_t, std::size_t>>& dims,
    std::uint64_t seed) {
    if (trials == 0) return {};
    if (dims.empty()) throw ContractError("verify_bound: need at least one dimension pair");
    for (auto [da, db] : dims) {
        if (da < 2 || db < 2) throw ContractError("verify_bound: dimensions must be >= 2");
        if (da > 16 || db > 16)
            throw CapacityError("verify_bound: per-side dimension capped at 16");
    }

    std::vector<ReportRow> rows(trials);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (long long t = 0; t < static_cast<long long>(trials); ++t) {
        try {
            const std::uint64_t trial_seed = mix_seed(seed, static_cast<std::uint64_t>(t));
            const auto [da, db] = dims[static_cast<std::size_t>(t) % dims.size()];
            const double t0 = now_seconds();
            Rng rng = Rng::substream(trial_seed, 0);
            const std::size_t size = 2 + rng.below(3);
            const Ensemble ensemble =
                random_pure_ensemble({da, db}, size, Rng::substream(trial_seed, 1).next_u64());
            const std::size_t ka = 2 + rng.below(da);
            const std::size_t kb = 2 + rng.below(db);
            std::vector<ProtocolStep> steps;
            steps.push_back(AliceMeasure{
                random_instrument(da, ka, Side::A, Rng::substream(trial_seed, 2).next_u64())});
            const std::uint64_t bob_seed = Rng::substream(trial_seed, 3).next_u64();
            steps.push_back(
                BobMeasure{[db, kb, bob_seed](const std::vector<int>& alice,
                                              const std::vector<int>&) {
                    const std::uint64_t s =
                        bob_seed ^ (0x9e3779b97f4a7c15ull *
                                    static_cast<std::uint64_t>(alice.empty() ? 0 : alice.back() + 1));
                    return random_instrument(db, kb, Side::B, s);
                }});
            OneWayProtocol protocol(std::move(steps));
            const Ledger ledger = run_protocol(ensemble, protocol);
            const ChainAuditReport audit = holevo_chain_audit(ensemble, protocol);
            if (!audit.ok)
                throw BoundViolationError("verify_bound: Holevo chain audit failed");
            std::ostringstream name;
            name << "verify-bound-" << da << "x" << db;
            rows[static_cast<std::size_t>(t)] =
                row_from_ledger(name.str(), ledger, trial_seed, now_seconds() - t0);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return rows;
}

std::string to_csv(const std::vector<ReportRow>& rows) {
    std::ostringstream out;
    out << "scenario,d1,d2,n_bits,E_i,I_A,I_B,I_total,E_f,E_distilled,gap,saturated,seed\n";
    for (const ReportRow& r : rows) {
        out << r.scenario << ',' << fmt_real(r.d1) << ',' << fmt_real(r.d2) << ','
            << fmt_real(r.n_bits) << ',' << fmt_real(r.e_i) << ',' << fmt_real(r.i_a) << ','
            << fmt_real(r.i_b) << ',' << fmt_real(r.i_total) << ',' << fmt_real(r.e_f) << ','
            << fmt_real(r.e_distilled) << ',' << fmt_real(r.gap) << ','
            << (r.saturated ? "true" : "false") << ',' << r.seed << '\n';
    }
    return out.str();
}

std::string to_json(const std::vector<ReportRow>& rows, bool include_transcripts) {
    json doc;
    doc["rows"] = json::array();
    for (const ReportRow& r : rows) {
        json row;
        row["scenario"] = r.scenario;
        row["d1"] = r.d1;
        row["d2"] = r.d2;
        row["n_bits"] = r.n_bits;
        row["E_i"] = r.e_i;
        row["I_A"] = r.i_a;
        row["I_B"] = r.i_b;
        row["I_total"] = r.i_total;
        row["E_f"] = r.e_f;
        row["E_distilled"] = r.e_distilled;
        row["gap"] = r.gap;
        row["saturated"] = r.saturated;
        row["seed"] = r.seed;
        row["runtime_s"] = r.runtime_s;
        if (include_transcripts && r.ledger && r.ledger->transcript_distribution) {
            const JointDistribution& d = *r.ledger->transcript_distribution;
            json axes = json::array();
            for (const auto& axis : d.axes()) {
                axes.push_back({{"name", axis.name}, {"size", axis.size}});
            }
            row["transcript_distribution"] = {{"axes", axes},
                                              {"probabilities", d.probabilities()}};
            row["per_step_avg_ent"] = r.ledger->per_step_avg_ent;
        }
        doc["rows"].push_back(std::move(row));
    }
    return doc.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ContractError("cannot open output file: " + path);
    out << content;
}

}  // namespace locc
