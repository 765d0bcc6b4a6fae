#include "locc/engine.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>

#include "locc/errors.hpp"

namespace locc {

namespace {

constexpr double kCompletenessTol = 1e-8;
constexpr double kLedgerTol = 1e-7;
constexpr double kDistillFidelityTol = 1e-7;

double unitarity_defect(const ComplexMatrix& u) {
    return matmul(u.dagger(), u).minus(ComplexMatrix::identity(u.rows())).max_abs();
}

double branch_avg_entanglement(const BranchEnsemble& branches) {
    double total = 0.0;
    for (const auto& branch : branches) {
        for (const auto& item : branch.items) total += item.prob * ent_entropy(item.state);
    }
    return total;
}

struct TranscriptTables {
    std::map<std::vector<int>, std::size_t> alice_ids;
    std::map<std::vector<int>, std::size_t> bob_ids;
};

TranscriptTables index_transcripts(const BranchEnsemble& branches) {
    TranscriptTables t;
    for (const auto& branch : branches) {
        t.alice_ids.emplace(branch.transcript.alice, 0);
        t.bob_ids.emplace(branch.transcript.bob, 0);
    }
    std::size_t i = 0;
    for (auto& [key, id] : t.alice_ids) id = i++;
    i = 0;
    for (auto& [key, id] : t.bob_ids) id = i++;
    return t;
}

JointDistribution transcript_distribution(const BranchEnsemble& branches, std::size_t n_x,
                                          const TranscriptTables& t) {
    const std::size_t n_k = t.alice_ids.size();
    const std::size_t n_z = t.bob_ids.size();
    std::vector<double> table(n_x * n_k * n_z, 0.0);
    double total = 0.0;
    for (const auto& branch : branches) {
        const std::size_t k = t.alice_ids.at(branch.transcript.alice);
        const std::size_t z = t.bob_ids.at(branch.transcript.bob);
        for (const auto& item : branch.items) {
            table[(item.x * n_k + k) * n_z + z] += item.prob;
            total += item.prob;
        }
    }
    // renormalize mass lost to branch pruning
    if (total > 0.0) {
        for (auto& v : table) v /= total;
    }
    return JointDistribution({{"X", n_x}, {"K", n_k}, {"Z", n_z}}, std::move(table));
}

// Credit for a branch whose components are transcript-identified copies of a
// single maximally entangled state: log2 of the flat Schmidt rank.
double branch_distilled_bits(const Branch& branch) {
    const auto& items = branch.items;
    if (items.empty()) return 0.0;
    for (std::size_t i = 1; i < items.size(); ++i) {
        if (items[0].state.overlap_abs(items[i].state) < 1.0 - kDistillFidelityTol) return 0.0;
    }
    auto spectrum = eigh(items[0].state.reduced(Side::A)).eigenvalues;
    std::size_t rank = 0;
    for (double lambda : spectrum) {
        if (lambda > 1e-9) ++rank;
    }
    if (rank < 2) return 0.0;
    const double flat = 1.0 / static_cast<double>(rank);
    for (std::size_t i = 0; i < rank; ++i) {
        if (std::abs(spectrum[i] - flat) > kDistillFidelityTol) return 0.0;
    }
    return std::log2(static_cast<double>(rank));
}

BranchEnsemble apply_local_unitary(const BranchEnsemble& branches, const LocalUnitary& step) {
    if (unitarity_defect(step.ua) > kCompletenessTol ||
        unitarity_defect(step.ub) > kCompletenessTol) {
        throw ContractError("LocalUnitary: operator not unitary within 1e-8");
    }
    BranchEnsemble out = branches;
    for (auto& branch : out) {
        for (auto& item : branch.items) item.state = apply_local(item.state, step.ua, step.ub);
    }
    return out;
}

BranchEnsemble apply_discard(const BranchEnsemble& branches, const Discard& step) {
    BranchEnsemble out;
    out.reserve(branches.size());
    for (const auto& branch : branches) {
        Branch nb{branch.transcript, {}};
        for (const auto& item : branch.items) {
            const auto& dims = item.state.dims();
            std::size_t prod_a = 1, prod_b = 1;
            for (auto d : step.dims_a) prod_a *= d;
            for (auto d : step.dims_b) prod_b *= d;
            if (prod_a != dims.da || prod_b != dims.db) {
                throw ShapeError("Discard: factor structure does not match state dims");
            }
            std::vector<std::size_t> factors = step.dims_a;
            factors.insert(factors.end(), step.dims_b.begin(), step.dims_b.end());
            std::vector<bool> keep(step.keep_a.begin(), step.keep_a.end());
            keep.insert(keep.end(), step.keep_b.begin(), step.keep_b.end());

            ComplexMatrix kept = partial_trace_factors(item.state.projector(), factors, keep);
            auto spec = eigh(kept);
            if (spec.eigenvalues.empty() || spec.eigenvalues[0] < 1.0 - 1e-7) {
                throw ContractError("Discard: subsystems are not in a product state");
            }
            std::size_t kept_a = 1, kept_b = 1;
            for (std::size_t i = 0; i < step.dims_a.size(); ++i)
                if (step.keep_a[i]) kept_a *= step.dims_a[i];
            for (std::size_t i = 0; i < step.dims_b.size(); ++i)
                if (step.keep_b[i]) kept_b *= step.dims_b[i];
            std::vector<Cx> amps(kept.rows());
            double norm2 = 0.0;
            for (std::size_t r = 0; r < kept.rows(); ++r) {
                amps[r] = spec.eigenvectors.at(r, 0);
                norm2 += std::norm(amps[r]);
            }
            const double inv = 1.0 / std::sqrt(norm2);
            for (auto& a : amps) a *= inv;
            nb.items.push_back({item.x, item.prob, PureState(std::move(amps), {kept_a, kept_b})});
        }
        out.push_back(std::move(nb));
    }
    return out;
}

}  // namespace

Instrument::Instrument(std::vector<ComplexMatrix> ops, Side s) : operators(std::move(ops)), side(s) {
    if (operators.empty()) throw ContractError("Instrument: no operators");
    const std::size_t d = operators.front().rows();
    ComplexMatrix sum(d, d);
    for (const auto& op : operators) {
        if (op.rows() != d || op.cols() != d) throw ShapeError("Instrument: operator shape mismatch");
        sum = sum.plus(matmul(op.dagger(), op));
    }
    if (sum.minus(ComplexMatrix::identity(d)).max_abs() > kCompletenessTol) {
        throw ContractError("Instrument: completeness sum M†M != I within 1e-8");
    }
}

OneWayProtocol::OneWayProtocol(std::vector<ProtocolStep> steps) : steps_(std::move(steps)) {
    bool bob_seen = false;
    for (const auto& step : steps_) {
        if (std::holds_alternative<BobMeasure>(step)) bob_seen = true;
        if (std::holds_alternative<AliceMeasure>(step) && bob_seen) {
            throw ContractError("OneWayProtocol: AliceMeasure after BobMeasure violates 1-way order");
        }
    }
}

bool Transcript::operator<(const Transcript& o) const {
    if (alice != o.alice) return alice < o.alice;
    return bob < o.bob;
}

PureState apply_local(const PureState& s, const ComplexMatrix& ua, const ComplexMatrix& ub) {
    const std::size_t da = s.dims().da, db = s.dims().db;
    if (ua.rows() != da || ub.rows() != db) throw ShapeError("apply_local: dims mismatch");
    // amplitudes as a da x db matrix: (UA (x) UB) psi = UA Psi UB^T
    ComplexMatrix psi(da, db, s.amplitudes());
    ComplexMatrix ub_t(db, db);
    for (std::size_t r = 0; r < db; ++r)
        for (std::size_t c = 0; c < db; ++c) ub_t.at(r, c) = ub.at(c, r);
    ComplexMatrix out = matmul(matmul(ua, psi), ub_t);
    return PureState(out.entries(), s.dims());
}

std::pair<std::vector<Cx>, double> apply_one_sided(const PureState& s, const ComplexMatrix& m,
                                                   Side side) {
    const std::size_t da = s.dims().da, db = s.dims().db;
    ComplexMatrix psi(da, db, s.amplitudes());
    ComplexMatrix out(0, 0);
    if (side == Side::A) {
        if (m.rows() != da || m.cols() != da) throw ShapeError("apply_one_sided: dim mismatch");
        out = matmul(m, psi);
    } else {
        if (m.rows() != db || m.cols() != db) throw ShapeError("apply_one_sided: dim mismatch");
        ComplexMatrix m_t(db, db);
        for (std::size_t r = 0; r < db; ++r)
            for (std::size_t c = 0; c < db; ++c) m_t.at(r, c) = m.at(c, r);
        out = matmul(psi, m_t);
    }
    double norm2 = 0.0;
    for (const auto& a : out.entries()) norm2 += std::norm(a);
    return {out.entries(), norm2};
}

BranchEnsemble apply_instrument(const BranchEnsemble& branches, const Instrument& inst) {
    BranchEnsemble out;
    for (const auto& branch : branches) {
        for (std::size_t y = 0; y < inst.outcomes(); ++y) {
            Branch nb{branch.transcript, {}};
            if (inst.side == Side::A) {
                nb.transcript.alice.push_back(static_cast<int>(y));
            } else {
                nb.transcript.bob.push_back(static_cast<int>(y));
            }
            for (const auto& item : branch.items) {
                auto [amps, norm2] = apply_one_sided(item.state, inst.operators[y], inst.side);
                const double joint = item.prob * norm2;
                if (joint < kBranchPruneThreshold) continue;
                const double inv = 1.0 / std::sqrt(norm2);
                for (auto& a : amps) a *= inv;
                nb.items.push_back({item.x, joint, PureState(std::move(amps), item.state.dims())});
            }
            if (!nb.items.empty()) out.push_back(std::move(nb));
        }
    }
    return out;
}

namespace {

BranchEnsemble initial_branches(const Ensemble& e) {
    Branch root{{}, {}};
    for (std::size_t x = 0; x < e.items().size(); ++x) {
        const auto& item = e.items()[x];
        if (item.probability < kBranchPruneThreshold) continue;
        root.items.push_back({x, item.probability, std::get<PureState>(item.state)});
    }
    return {std::move(root)};
}

BranchEnsemble apply_step(const BranchEnsemble& branches, const ProtocolStep& step) {
    if (const auto* u = std::get_if<LocalUnitary>(&step)) return apply_local_unitary(branches, *u);
    if (const auto* a = std::get_if<AliceMeasure>(&step)) {
        if (a->instrument.side != Side::A) throw ContractError("AliceMeasure: instrument side must be A");
        return apply_instrument(branches, a->instrument);
    }
    if (const auto* b = std::get_if<BobMeasure>(&step)) {
        // Bob's choice may depend on Alice's transcript and his own past outcomes
        BranchEnsemble out;
        for (const auto& branch : branches) {
            Instrument inst = b->choose(branch.transcript.alice, branch.transcript.bob);
            if (inst.side != Side::B) throw ContractError("BobMeasure: instrument side must be B");
            auto sub = apply_instrument({branch}, inst);
            out.insert(out.end(), sub.begin(), sub.end());
        }
        return out;
    }
    return apply_discard(branches, std::get<Discard>(step));
}

}  // namespace

Ledger run_protocol(const Ensemble& e, const OneWayProtocol& p) {
    if (!e.all_pure()) throw ContractError("run_protocol: pure-component ensemble required");

    Ledger ledger;
    ledger.n_bits = std::log2(static_cast<double>(e.dims().da)) +
                    std::log2(static_cast<double>(e.dims().db));
    ledger.e_i = avg_entanglement(e);

    BranchEnsemble branches = initial_branches(e);
    double prev_ent = branch_avg_entanglement(branches);
    for (const auto& step : p.steps()) {
        branches = apply_step(branches, step);
        const double ent = branch_avg_entanglement(branches);
        ledger.per_step_avg_ent.push_back(ent);
        if (ent > prev_ent + kLedgerTol) {
            throw BoundViolationError("run_protocol: average entanglement increased by a step");
        }
        prev_ent = ent;
    }

    const auto tables = index_transcripts(branches);
    const auto dist = transcript_distribution(branches, e.size(), tables);
    ledger.i_a = dist.mutual_info({"X"}, {"K"});
    ledger.i_total = dist.mutual_info({"X"}, {"K", "Z"});
    ledger.i_b = ledger.i_total - ledger.i_a;  // chain rule: I(X;Z|K)
    ledger.e_f = branch_avg_entanglement(branches);
    ledger.e_distilled = 0.0;
    for (const auto& branch : branches) {
        double p_branch = 0.0;
        for (const auto& item : branch.items) p_branch += item.prob;
        ledger.e_distilled += p_branch * branch_distilled_bits(branch);
    }
    ledger.gap = ledger.n_bits - ledger.e_i - ledger.e_f - ledger.i_total;
    ledger.transcript_distribution = dist;

    if (ledger.gap < -kLedgerTol) {
        throw BoundViolationError("run_protocol: ledger inequality violated, gap = " +
                                  std::to_string(ledger.gap));
    }
    if (ledger.e_distilled > ledger.e_f + 1e-9) {
        throw BoundViolationError("run_protocol: E_distilled exceeds E_f");
    }
    return ledger;
}

ChainAuditReport holevo_chain_audit(const Ensemble& e, const OneWayProtocol& p) {
    if (!e.all_pure()) throw ContractError("holevo_chain_audit: pure-component ensemble required");

    // split at the first BobMeasure
    std::size_t split = p.steps().size();
    for (std::size_t i = 0; i < p.steps().size(); ++i) {
        if (std::holds_alternative<BobMeasure>(p.steps()[i])) {
            split = i;
            break;
        }
    }

    ChainAuditReport report;

    // chi of Alice's reduced ensemble
    {
        ComplexMatrix avg(e.dims().da, e.dims().da);
        double avg_entropy = 0.0;
        for (const auto& item : e.items()) {
            ComplexMatrix red = std::get<PureState>(item.state).reduced(Side::A);
            avg = avg.plus(red.scaled(item.probability));
            avg_entropy += item.probability * vn_entropy(red);
        }
        report.chi_a = vn_entropy(avg) - avg_entropy;
    }

    BranchEnsemble branches = initial_branches(e);
    for (std::size_t i = 0; i < split; ++i) branches = apply_step(branches, p.steps()[i]);

    {
        const auto tables = index_transcripts(branches);
        const auto dist = transcript_distribution(branches, e.size(), tables);
        report.i_a_realized = dist.mutual_info({"X"}, {"K"});
    }

    // per-outcome Bob bounds from the post-Alice branches
    std::map<std::vector<int>, std::size_t> k_of;
    for (const auto& branch : branches) {
        const auto key = branch.transcript.alice;
        if (k_of.count(key)) continue;
        const std::size_t id = report.per_k.size();
        k_of.emplace(key, id);
        report.per_k.push_back({});
        auto& slot = report.per_k.back();

        ComplexMatrix sigma_b(e.dims().db, e.dims().db);
        double avg_entropy = 0.0;
        for (const auto& item : branch.items) {
            slot.p_k += item.prob;
            ComplexMatrix red = item.state.reduced(Side::B);
            sigma_b = sigma_b.plus(red.scaled(item.prob));
            avg_entropy += item.prob * ent_entropy(item.state);
        }
        if (slot.p_k <= 0.0) continue;
        sigma_b = sigma_b.scaled(1.0 / slot.p_k);
        slot.chi_b = vn_entropy(sigma_b) - avg_entropy / slot.p_k;
    }

    // realized I_B per K from the full run
    for (std::size_t i = split; i < p.steps().size(); ++i) branches = apply_step(branches, p.steps()[i]);
    {
        // conditional mutual information at each fixed Alice transcript
        std::map<std::vector<int>, std::map<std::pair<std::size_t, std::vector<int>>, double>> per_k;
        for (const auto& branch : branches) {
            for (const auto& item : branch.items) {
                per_k[branch.transcript.alice][{item.x, branch.transcript.bob}] += item.prob;
            }
        }
        for (const auto& [key, cells] : per_k) {
            auto it = k_of.find(key);
            if (it == k_of.end()) continue;
            auto& slot = report.per_k[it->second];
            // tabulate conditional p(x, z | K = key)
            std::map<std::vector<int>, std::size_t> z_ids;
            for (const auto& [cell, w] : cells) z_ids.emplace(cell.second, 0);
            std::size_t zi = 0;
            for (auto& [z, id] : z_ids) id = zi++;
            std::vector<double> table(e.size() * z_ids.size(), 0.0);
            double total = 0.0;
            for (const auto& [cell, w] : cells) {
                table[cell.first * z_ids.size() + z_ids.at(cell.second)] += w;
                total += w;
            }
            for (auto& v : table) v /= total;
            JointDistribution cond({{"X", e.size()}, {"Z", z_ids.size()}}, std::move(table));
            slot.i_b_realized = cond.mutual_info({"X"}, {"Z"});
        }
    }

    report.worst_violation = report.i_a_realized - report.chi_a;
    for (const auto& slot : report.per_k) {
        report.worst_violation = std::max(report.worst_violation, slot.i_b_realized - slot.chi_b);
    }
    report.ok = report.worst_violation <= 1e-7;
    return report;
}

Instrument random_instrument(std::size_t dim, std::size_t outcomes, Side side, std::uint64_t seed) {
    if (outcomes < 1) throw ContractError("random_instrument: outcomes must be >= 1");
    Rng rng(seed);
    using EMat = Eigen::Matrix<Cx, Eigen::Dynamic, Eigen::Dynamic>;
    EMat g(static_cast<Eigen::Index>(outcomes * dim), static_cast<Eigen::Index>(dim));
    for (Eigen::Index r = 0; r < g.rows(); ++r)
        for (Eigen::Index c = 0; c < g.cols(); ++c) g(r, c) = Cx{rng.gaussian(), rng.gaussian()};
    Eigen::HouseholderQR<EMat> qr(g);
    EMat q = qr.householderQ() * EMat::Identity(g.rows(), static_cast<Eigen::Index>(dim));

    std::vector<ComplexMatrix> ops;
    ops.reserve(outcomes);
    for (std::size_t k = 0; k < outcomes; ++k) {
        ComplexMatrix m(dim, dim);
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c)
                m.at(r, c) = q(static_cast<Eigen::Index>(k * dim + r), static_cast<Eigen::Index>(c));
        ops.push_back(std::move(m));
    }
    return Instrument(std::move(ops), side);
}

Ensemble random_pure_ensemble(BipartiteDims dims, std::size_t size, std::uint64_t seed) {
    if (size < 1) throw ContractError("random_pure_ensemble: size must be >= 1");
    Rng rng(seed);
    auto probs = rng.simplex(size);
    std::vector<Ensemble::Item> items;
    for (std::size_t i = 0; i < size; ++i) {
        std::vector<Cx> amps(dims.total());
        double norm2 = 0.0;
        for (auto& a : amps) {
            a = Cx{rng.gaussian(), rng.gaussian()};
            norm2 += std::norm(a);
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& a : amps) a *= inv;
        items.push_back({probs[i], PureState(std::move(amps), dims)});
    }
    return Ensemble(std::move(items));
}

ComplexMatrix embed_factor_op(const ComplexMatrix& op, const std::vector<std::size_t>& dims,
                              std::size_t site) {
    if (site >= dims.size()) throw ShapeError("embed_factor_op: site out of range");
    if (op.rows() != dims[site]) throw ShapeError("embed_factor_op: operator dim mismatch");
    ComplexMatrix out = ComplexMatrix::identity(1);
    for (std::size_t i = 0; i < dims.size(); ++i) {
        out = kron(out, (i == site) ? op : ComplexMatrix::identity(dims[i]));
    }
    return out;
}

ComplexMatrix permutation_gate(const std::vector<std::size_t>& dims,
                               const std::function<void(std::vector<std::size_t>&)>& f) {
    std::size_t total = 1;
    for (auto d : dims) total *= d;
    ComplexMatrix out(total, total);
    std::vector<std::size_t> digits(dims.size());
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        for (std::size_t i = dims.size(); i-- > 0;) {
            digits[i] = rem % dims[i];
            rem /= dims[i];
        }
        f(digits);
        std::size_t dst = 0;
        for (std::size_t i = 0; i < dims.size(); ++i) dst = dst * dims[i] + digits[i];
        out.at(dst, idx) = 1.0;
    }
    return out;
}

ComplexMatrix csum_add_gate(const std::vector<std::size_t>& dims, std::size_t control,
                            std::size_t target) {
    if (dims[control] != dims[target]) throw ShapeError("csum_add_gate: factor dims differ");
    const std::size_t d = dims[control];
    return permutation_gate(dims, [control, target, d](std::vector<std::size_t>& digits) {
        digits[target] = (digits[target] + digits[control]) % d;
    });
}

ComplexMatrix csum_sub_gate(const std::vector<std::size_t>& dims, std::size_t control,
                            std::size_t target) {
    if (dims[control] != dims[target]) throw ShapeError("csum_sub_gate: factor dims differ");
    const std::size_t d = dims[control];
    return permutation_gate(dims, [control, target, d](std::vector<std::size_t>& digits) {
        digits[target] = (digits[target] + d - digits[control]) % d;
    });
}

Instrument z_instrument(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& sites,
                        Side side) {
    std::size_t total = 1, n_outcomes = 1;
    for (auto d : dims) total *= d;
    for (auto s : sites) n_outcomes *= dims[s];
    std::vector<ComplexMatrix> ops(n_outcomes, ComplexMatrix(total, total));
    std::vector<std::size_t> digits(dims.size());
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        for (std::size_t i = dims.size(); i-- > 0;) {
            digits[i] = rem % dims[i];
            rem /= dims[i];
        }
        std::size_t outcome = 0;
        for (auto s : sites) outcome = outcome * dims[s] + digits[s];
        ops[outcome].at(idx, idx) = 1.0;
    }
    return Instrument(std::move(ops), side);
}

Instrument fourier_instrument(const std::vector<std::size_t>& dims, std::size_t site, Side side) {
    const std::size_t d = dims[site];
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    std::vector<ComplexMatrix> ops;
    for (std::size_t a = 0; a < d; ++a) {
        // projector onto |f_a> = (1/sqrt d) sum_j w^{aj} |j>
        ComplexMatrix proj(d, d);
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c) {
                const double phase = kTwoPi * static_cast<double>(a) *
                                     (static_cast<double>(r) - static_cast<double>(c)) /
                                     static_cast<double>(d);
                proj.at(r, c) = Cx{std::cos(phase), std::sin(phase)} / static_cast<double>(d);
            }
        ops.push_back(embed_factor_op(proj, dims, site));
    }
    return Instrument(std::move(ops), side);
}

Instrument offset_instrument(const std::vector<std::size_t>& dims, std::size_t site1,
                             std::size_t site2, Side side) {
    if (dims[site1] != dims[site2]) throw ShapeError("offset_instrument: factor dims differ");
    const std::size_t d = dims[site1];
    std::size_t total = 1;
    for (auto dim : dims) total *= dim;
    std::vector<ComplexMatrix> ops(d, ComplexMatrix(total, total));
    std::vector<std::size_t> digits(dims.size());
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        for (std::size_t i = dims.size(); i-- > 0;) {
            digits[i] = rem % dims[i];
            rem /= dims[i];
        }
        const std::size_t delta = (digits[site2] + d - digits[site1]) % d;
        ops[delta].at(idx, idx) = 1.0;
    }
    return Instrument(std::move(ops), side);
}

Instrument unitary_instrument(const ComplexMatrix& u, Side side) {
    return Instrument({u}, side);
}

}  // namespace locc
