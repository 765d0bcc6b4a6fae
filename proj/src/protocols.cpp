#include "locc/protocols.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "locc/errors.hpp"
#include "locc/info.hpp"
#include "locc/rng.hpp"

namespace locc {
namespace {

double log2d(std::size_t d) { return std::log2(static_cast<double>(d)); }

// ---- exact index-level accounting ------------------------------------------
//
// A protocol branch at the index level is a sequence of announced comparisons.
// Each comparison publishes one of Alice's local digits (uniform, carrying no
// information on its own) and Bob's matching digit, whose offset from Alice's
// encodes the revealed value: difference for amplitude comparisons, sum for
// phase comparisons.

struct Reveal {
    std::size_t d;
    std::size_t value;
    bool is_sum;  // true: Bob announces value - a; false: value + a (mod d)
};

struct IndexCase {
    double prob;
    std::vector<Reveal> reveals;
    double e_f;                             // surviving ebits in this case
    std::vector<std::size_t> survivor_key;  // descriptor of the surviving registers
};

Ledger index_ledger(const std::vector<IndexCase>& cases, double n_bits, double e_i) {
    if (cases.empty()) throw ContractError("index_ledger: empty case list");
    const std::size_t t = cases.front().reveals.size();
    std::vector<std::size_t> radix(t);
    for (std::size_t r = 0; r < t; ++r) radix[r] = cases.front().reveals[r].d;
    std::size_t k_size = 1;
    for (std::size_t r = 0; r < t; ++r) k_size *= radix[r];
    const std::size_t n_x = cases.size();

    std::vector<double> table(n_x * k_size * k_size, 0.0);
    for (std::size_t x = 0; x < n_x; ++x) {
        const IndexCase& c = cases[x];
        if (c.reveals.size() != t) throw ContractError("index_ledger: ragged reveal lists");
        for (std::size_t k = 0; k < k_size; ++k) {
            // decode Alice's digit tuple, most significant first
            std::size_t z = 0, rest = k;
            for (std::size_t r = 0; r < t; ++r) {
                std::size_t place = 1;
                for (std::size_t q = r + 1; q < t; ++q) place *= radix[q];
                const std::size_t a = rest / place;
                rest %= place;
                const Reveal& rv = c.reveals[r];
                const std::size_t b = rv.is_sum ? (rv.value + rv.d - a % rv.d) % rv.d
                                                : (rv.value + a) % rv.d;
                z = z * rv.d + b;
            }
            table[(x * k_size + k) * k_size + z] +=
                c.prob / static_cast<double>(k_size);
        }
    }
    JointDistribution dist({{"X", n_x}, {"K", k_size}, {"Z", k_size}}, table);

    Ledger ledger;
    ledger.n_bits = n_bits;
    ledger.e_i = e_i;
    ledger.i_a = dist.mutual_info({"X"}, {"K"});
    ledger.i_total = dist.mutual_info({"X"}, {"K", "Z"});
    ledger.i_b = ledger.i_total - ledger.i_a;
    for (const IndexCase& c : cases) ledger.e_f += c.prob * c.e_f;

    // distillation credit: within a transcript branch every consistent x must
    // leave identical surviving registers
    for (std::size_t k = 0; k < k_size; ++k) {
        for (std::size_t z = 0; z < k_size; ++z) {
            double p_branch = 0.0;
            const IndexCase* first = nullptr;
            bool uniform = true;
            for (std::size_t x = 0; x < n_x; ++x) {
                const double p = table[(x * k_size + k) * k_size + z];
                if (p <= 0.0) continue;
                p_branch += p;
                if (!first) {
                    first = &cases[x];
                } else if (cases[x].survivor_key != first->survivor_key ||
                           cases[x].e_f != first->e_f) {
                    uniform = false;
                }
            }
            if (first && uniform) ledger.e_distilled += p_branch * first->e_f;
        }
    }
    ledger.gap = ledger.n_bits - ledger.e_i - ledger.e_f - ledger.i_total;
    if (ledger.gap < -1e-7) throw BoundViolationError("index_ledger: negative ledger gap");
    ledger.transcript_distribution = std::move(dist);
    return ledger;
}

std::vector<std::size_t> survivor_key_of(const std::vector<BellIndex>& pairs) {
    std::vector<std::size_t> key;
    for (const BellIndex& b : pairs) {
        key.push_back(b.n);
        key.push_back(b.m);
    }
    return key;
}

// Coarse parity readout: outcome bit g = sum of the listed digits mod 2,
// outcomes indexed with group 0 as the least significant bit.
Instrument parity_instrument(const std::vector<std::size_t>& dims,
                             const std::vector<std::vector<std::size_t>>& groups, Side side) {
    std::size_t dim = 1;
    for (std::size_t d : dims) dim *= d;
    const std::size_t n_out = std::size_t{1} << groups.size();
    std::vector<ComplexMatrix> ops(n_out, ComplexMatrix(dim, dim));
    for (std::size_t basis = 0; basis < dim; ++basis) {
        std::size_t rest = basis, out = 0;
        std::vector<std::size_t> digit(dims.size());
        for (std::size_t i = 0; i < dims.size(); ++i) {
            std::size_t place = 1;
            for (std::size_t j = i + 1; j < dims.size(); ++j) place *= dims[j];
            digit[i] = rest / place;
            rest %= place;
        }
        for (std::size_t g = 0; g < groups.size(); ++g) {
            std::size_t parity = 0;
            for (std::size_t site : groups[g]) parity += digit[site];
            out |= (parity % 2) << g;
        }
        ops[out].at(basis, basis) = 1.0;
    }
    return Instrument(std::move(ops), side);
}

ComplexMatrix qubit_x() {
    ComplexMatrix x(2, 2);
    x.at(0, 1) = 1.0;
    x.at(1, 0) = 1.0;
    return x;
}

ComplexMatrix identity_matrix(std::size_t dim) {
    ComplexMatrix id(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) id.at(i, i) = 1.0;
    return id;
}

}  // namespace

// ---- named protocols, index backend -----------------------------------------

ProtocolOutcome two_copy_discrimination(std::size_t d) {
    if (d < 2) throw ContractError("two_copy_discrimination: d must be >= 2");
    std::vector<IndexCase> cases;
    const double p = 1.0 / static_cast<double>(d * d);
    for (std::size_t n = 0; n < d; ++n) {
        for (std::size_t m = 0; m < d; ++m) {
            BellIndex c1(d, n, m), c2(d, n, m);
            auto [o1, o2] = csum_d(c1, c2);
            cases.push_back({p,
                             {{d, z_compare(o2), false}, {d, x_compare(o1), true}},
                             0.0,
                             {}});
        }
    }
    ProtocolOutcome out;
    out.ledger = index_ledger(cases, 4.0 * log2d(d), 2.0 * log2d(d));
    out.identified = {"amplitude index m", "phase index n"};
    return out;
}

ProtocolOutcome full_info_then_keep(std::size_t n_copies) {
    if (n_copies < 3) throw ContractError("full_info_then_keep: need at least 3 copies");
    std::vector<IndexCase> cases;
    for (std::size_t n = 0; n < 2; ++n) {
        for (std::size_t m = 0; m < 2; ++m) {
            auto [o1, o2] = bxor(BellIndex(2, n, m), BellIndex(2, n, m));
            std::vector<BellIndex> survivors(n_copies - 2, BellIndex(2, n, m));
            cases.push_back({0.25,
                             {{2, z_compare(o1), false}, {2, x_compare(o2), true}},
                             static_cast<double>(n_copies - 2),
                             survivor_key_of(survivors)});
        }
    }
    ProtocolOutcome out;
    out.ledger = index_ledger(cases, 2.0 * static_cast<double>(n_copies),
                              static_cast<double>(n_copies));
    out.identified = {"amplitude index m", "phase index n"};
    out.distilled_dims.assign(n_copies - 2, 2);
    return out;
}

ProtocolOutcome bxor_chain(std::size_t n_copies) {
    if (n_copies < 3) throw ContractError("bxor_chain: need at least 3 copies");
    const bool odd = (n_copies % 2) == 1;
    std::vector<IndexCase> cases;
    for (std::size_t n = 0; n < 2; ++n) {
        for (std::size_t m = 0; m < 2; ++m) {
            std::vector<BellIndex> pairs(n_copies, BellIndex(2, n, m));
            // three-step primitive on (i, i+1, i+2): returns pairs i, i+1 to
            // (0,0) and leaves the unknown label on pair i+2
            const std::size_t chain_end = odd ? n_copies : n_copies - 1;
            for (std::size_t i = 0; i + 2 < chain_end; i += 2) {
                std::tie(pairs[i], pairs[i + 1]) = bxor(pairs[i], pairs[i + 1]);
                std::tie(pairs[i + 2], pairs[i]) = bxor(pairs[i + 2], pairs[i]);
                std::tie(pairs[i + 1], pairs[i + 2]) = bxor(pairs[i + 1], pairs[i + 2]);
            }
            std::vector<Reveal> reveals;
            std::vector<BellIndex> survivors;
            if (odd) {
                reveals.push_back({2, z_compare(pairs[n_copies - 1]), false});
                survivors.assign(pairs.begin(), pairs.end() - 1);
            } else {
                auto [o1, o2] = bxor(pairs[n_copies - 2], pairs[n_copies - 1]);
                reveals.push_back({2, z_compare(o1), false});
                reveals.push_back({2, x_compare(o2), true});
                survivors.assign(pairs.begin(), pairs.end() - 2);
            }
            cases.push_back({0.25, reveals, static_cast<double>(survivors.size()),
                             survivor_key_of(survivors)});
        }
    }
    ProtocolOutcome out;
    out.ledger = index_ledger(cases, 2.0 * static_cast<double>(n_copies),
                              static_cast<double>(n_copies));
    out.identified = odd ? std::vector<std::string>{"amplitude index m"}
                         : std::vector<std::string>{"amplitude index m", "phase index n"};
    out.distilled_dims.assign(odd ? n_copies - 1 : n_copies - 2, 2);
    return out;
}

ProtocolOutcome qutrit_two_copy_partial() {
    std::vector<IndexCase> cases;
    for (std::size_t n = 0; n < 3; ++n) {
        for (std::size_t m = 0; m < 3; ++m) {
            auto [o1, o2] = csum_d(BellIndex(3, n, m), BellIndex(3, n, m));
            // the local offset comparison reveals the amplitude index of the
            // second output; the surviving register is the same rank-3
            // maximally entangled state for every n (the n-dependence is a
            // global phase), so its descriptor is label-free
            (void)o1;
            cases.push_back({1.0 / 9.0, {{3, o2.m, false}}, log2d(3), {0}});
        }
    }
    ProtocolOutcome out;
    out.ledger = index_ledger(cases, 4.0 * log2d(3), 2.0 * log2d(3));
    out.identified = {"amplitude index m"};
    out.distilled_dims = {3};
    return out;
}

ProtocolOutcome ebit_assisted_discrimination(std::size_t d) {
    if (d < 2) throw ContractError("ebit_assisted_discrimination: d must be >= 2");
    std::vector<IndexCase> cases;
    const double p = 1.0 / static_cast<double>(d * d);
    for (std::size_t n = 0; n < d; ++n) {
        for (std::size_t m = 0; m < d; ++m) {
            auto [anc, unk] = csum_d(BellIndex(d, 0, 0), BellIndex(d, n, m));
            cases.push_back({p,
                             {{d, z_compare(anc), false}, {d, x_compare(unk), true}},
                             0.0,
                             {}});
        }
    }
    ProtocolOutcome out;
    out.ledger = index_ledger(cases, 4.0 * log2d(d), 2.0 * log2d(d));
    out.identified = {"amplitude index m (via the ancilla)", "phase index n"};
    return out;
}

ProtocolOutcome error_correct_distill(const StabilizerCode& code) {
    const std::size_t n = code.n();
    const std::size_t m = code.m();
    std::vector<IndexCase> cases;
    const double p = 1.0 / static_cast<double>(code.correctable().size());
    for (const PauliString& err : code.correctable()) {
        BellString s(std::vector<BellIndex>(n, BellIndex(2, 0, 0)));
        const auto syndrome = bilateral_syndrome(code, pauli_shift(err, s));
        std::vector<Reveal> reveals;
        for (std::size_t digit : syndrome) reveals.push_back({2, digit, false});
        // after Bob's correction the logical register is the same rank-2^m
        // maximally entangled state in every case
        cases.push_back({p, reveals, static_cast<double>(m), {0}});
    }
    ProtocolOutcome out;
    out.ledger = index_ledger(cases, 2.0 * static_cast<double>(n), static_cast<double>(n));
    out.identified = {"which correctable error acted on Bob's halves"};
    out.distilled_dims = {std::size_t{1} << m};
    return out;
}

ProtocolOutcome recurrence_ledger(const std::vector<double>& p) {
    if (p.size() != 4) throw ContractError("recurrence_ledger: need a 4-vector");
    check_distribution(p);
    for (double v : p) {
        if (v >= 1.0 - 1e-12)
            throw ContractError("recurrence_ledger: deterministic source, the round reveals "
                                "nothing and purifies nothing");
    }
    std::vector<IndexCase> cases;
    for (int i = 1; i <= 4; ++i) {
        for (int j = 1; j <= 4; ++j) {
            const double prob = p[static_cast<std::size_t>(i - 1)] *
                                p[static_cast<std::size_t>(j - 1)];
            if (prob == 0.0) continue;
            auto [o1, o2] = bxor(bell_label_index(i), bell_label_index(j));
            const std::size_t agree = z_compare(o2);
            const double e_f = agree == 0 ? 1.0 : 0.0;
            std::vector<std::size_t> key =
                agree == 0 ? survivor_key_of({o1}) : std::vector<std::size_t>{};
            cases.push_back({prob, {{2, agree, false}}, e_f, std::move(key)});
        }
    }
    ProtocolOutcome out;
    out.ledger = index_ledger(cases, 4.0, 2.0);
    auto [p_next, success] = recurrence_map(p);
    std::ostringstream line;
    line << "success probability " << success << ", post-selected distribution (";
    for (std::size_t i = 0; i < 4; ++i) line << (i ? ", " : "") << p_next[i];
    line << ")";
    out.identified = {"agreement of the two amplitude indices", line.str()};
    return out;
}

// ---- named protocols, matrix backend ----------------------------------------

Ledger two_copy_discrimination_matrix(std::size_t d) {
    if (d < 2) throw ContractError("two_copy_discrimination_matrix: d must be >= 2");
    const std::vector<std::size_t> dims{d, d};
    const ComplexMatrix gate = csum_sub_gate(dims, 1, 0);  // copy1 digit -= copy2 digit
    std::vector<ProtocolStep> steps;
    steps.push_back(LocalUnitary{gate, gate});
    steps.push_back(AliceMeasure{z_instrument(dims, {1}, Side::A)});
    steps.push_back(AliceMeasure{fourier_instrument(dims, 0, Side::A)});
    steps.push_back(BobMeasure{[dims](const std::vector<int>&, const std::vector<int>&) {
        return z_instrument(dims, {1}, Side::B);
    }});
    steps.push_back(BobMeasure{[dims](const std::vector<int>&, const std::vector<int>&) {
        return fourier_instrument(dims, 0, Side::B);
    }});
    return run_protocol(uniform_bell_ensemble(d, 2), OneWayProtocol(std::move(steps)));
}

Ledger full_info_then_keep_matrix(std::size_t n_copies) {
    if (n_copies < 3 || n_copies > 4)
        throw ContractError("full_info_then_keep_matrix: supported for 3 or 4 copies");
    const std::vector<std::size_t> dims(n_copies, 2);
    const ComplexMatrix gate = csum_add_gate(dims, 0, 1);  // bilateral XOR copy1 -> copy2
    std::vector<ProtocolStep> steps;
    steps.push_back(LocalUnitary{gate, gate});
    steps.push_back(AliceMeasure{z_instrument(dims, {0}, Side::A)});
    steps.push_back(AliceMeasure{fourier_instrument(dims, 1, Side::A)});
    steps.push_back(BobMeasure{[dims](const std::vector<int>&, const std::vector<int>&) {
        return z_instrument(dims, {0}, Side::B);
    }});
    steps.push_back(BobMeasure{[dims](const std::vector<int>&, const std::vector<int>&) {
        return fourier_instrument(dims, 1, Side::B);
    }});
    return run_protocol(uniform_bell_ensemble(2, n_copies), OneWayProtocol(std::move(steps)));
}

Ledger bxor_chain_matrix(std::size_t n_copies) {
    if (n_copies < 3 || n_copies > 4)
        throw ContractError("bxor_chain_matrix: supported for 3 or 4 copies");
    const std::vector<std::size_t> dims(n_copies, 2);
    auto cnot = [&dims](std::size_t control, std::size_t target) {
        return csum_add_gate(dims, control, target);
    };
    std::vector<ProtocolStep> steps;
    steps.push_back(LocalUnitary{cnot(0, 1), cnot(0, 1)});
    steps.push_back(LocalUnitary{cnot(2, 0), cnot(2, 0)});
    steps.push_back(LocalUnitary{cnot(1, 2), cnot(1, 2)});
    if (n_copies == 3) {
        steps.push_back(AliceMeasure{z_instrument(dims, {2}, Side::A)});
        steps.push_back(BobMeasure{[dims](const std::vector<int>&, const std::vector<int>&) {
            return z_instrument(dims, {2}, Side::B);
        }});
    } else {
        steps.push_back(LocalUnitary{cnot(2, 3), cnot(2, 3)});
        steps.push_back(AliceMeasure{z_instrument(dims, {2}, Side::A)});
        steps.push_back(AliceMeasure{fourier_instrument(dims, 3, Side::A)});
        steps.push_back(BobMeasure{[dims](const std::vector<int>&, const std::vector<int>&) {
            return z_instrument(dims, {2}, Side::B);
        }});
        steps.push_back(BobMeasure{[dims](const std::vector<int>&, const std::vector<int>&) {
            return fourier_instrument(dims, 3, Side::B);
        }});
    }
    return run_protocol(uniform_bell_ensemble(2, n_copies), OneWayProtocol(std::move(steps)));
}

Ledger qutrit_two_copy_partial_matrix() {
    const std::vector<std::size_t> dims{3, 3};
    const ComplexMatrix gate = csum_sub_gate(dims, 1, 0);
    std::vector<ProtocolStep> steps;
    steps.push_back(LocalUnitary{gate, gate});
    steps.push_back(AliceMeasure{offset_instrument(dims, 0, 1, Side::A)});
    steps.push_back(BobMeasure{[dims](const std::vector<int>&, const std::vector<int>&) {
        return offset_instrument(dims, 0, 1, Side::B);
    }});
    return run_protocol(uniform_bell_ensemble(3, 2), OneWayProtocol(std::move(steps)));
}

Ledger ebit_assisted_discrimination_matrix(std::size_t d) {
    if (d < 2) throw ContractError("ebit_assisted_discrimination_matrix: d must be >= 2");
    std::vector<Ensemble::Item> items;
    const PureState ancilla = gen_bell(d, 0, 0);
    const double p = 1.0 / static_cast<double>(d * d);
    for (std::size_t n = 0; n < d; ++n) {
        for (std::size_t m = 0; m < d; ++m) {
            items.push_back({p, tensor_canonical(gen_bell(d, n, m), ancilla)});
        }
    }
    const std::vector<std::size_t> dims{d, d};
    const ComplexMatrix gate = csum_sub_gate(dims, 0, 1);  // ancilla digit -= unknown digit
    std::vector<ProtocolStep> steps;
    steps.push_back(LocalUnitary{gate, gate});
    steps.push_back(AliceMeasure{z_instrument(dims, {1}, Side::A)});
    steps.push_back(AliceMeasure{fourier_instrument(dims, 0, Side::A)});
    steps.push_back(BobMeasure{[dims](const std::vector<int>&, const std::vector<int>&) {
        return z_instrument(dims, {1}, Side::B);
    }});
    steps.push_back(BobMeasure{[dims](const std::vector<int>&, const std::vector<int>&) {
        return fourier_instrument(dims, 0, Side::B);
    }});
    return run_protocol(Ensemble(std::move(items)), OneWayProtocol(std::move(steps)));
}

Ledger error_correct_distill_matrix() {
    const StabilizerCode code = StabilizerCode::bitflip3();
    const std::vector<std::size_t> dims{2, 2, 2};
    const ComplexMatrix id8 = identity_matrix(8);
    const PureState base = tensor_power_canonical(bell(1), 3);

    std::vector<Ensemble::Item> items;
    for (const PauliString& err : code.correctable()) {
        ComplexMatrix u = id8;
        for (std::size_t site = 0; site < 3; ++site) {
            if (err.x[site]) u = matmul(embed_factor_op(qubit_x(), dims, site), u);
        }
        items.push_back({1.0 / static_cast<double>(code.correctable().size()),
                         apply_local(base, id8, u)});
    }

    const std::vector<std::vector<std::size_t>> groups{{0, 1}, {1, 2}};
    std::vector<ProtocolStep> steps;
    steps.push_back(AliceMeasure{parity_instrument(dims, groups, Side::A)});
    steps.push_back(BobMeasure{[dims](const std::vector<int>&, const std::vector<int>&) {
        return parity_instrument(dims, {{0, 1}, {1, 2}}, Side::B);
    }});
    steps.push_back(BobMeasure{[dims, code, id8](const std::vector<int>& alice,
                                                 const std::vector<int>& bob) {
        const int diff = alice.back() ^ bob.back();
        const PauliString& err = code.lookup(
            {static_cast<std::size_t>(diff & 1), static_cast<std::size_t>((diff >> 1) & 1)});
        ComplexMatrix u = id8;
        for (std::size_t site = 0; site < 3; ++site) {
            if (err.x[site]) u = matmul(embed_factor_op(qubit_x(), dims, site), u);
        }
        return unitary_instrument(u, Side::B);
    }});
    return run_protocol(Ensemble(std::move(items)), OneWayProtocol(std::move(steps)));
}

// ---- parity decoding ---------------------------------------------------------

namespace {

std::size_t word_count(std::size_t bits) { return (bits + 63) / 64; }

int get_bit(const std::vector<std::uint64_t>& v, std::size_t i) {
    return static_cast<int>((v[i / 64] >> (i % 64)) & 1u);
}

void flip_bit(std::vector<std::uint64_t>& v, std::size_t i) {
    v[i / 64] ^= std::uint64_t{1} << (i % 64);
}

int dot_parity(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < a.size(); ++w) acc ^= a[w] & b[w];
    return static_cast<int>(std::popcount(acc) & 1u);
}

struct BitsHash {
    std::size_t operator()(const std::vector<std::uint64_t>& v) const {
        std::size_t h = 0xcbf29ce484222325ull;
        for (std::uint64_t w : v) h = (h ^ w) * 0x100000001b3ull;
        return h;
    }
};

// log prior of a packed 2n-bit string under iid label probabilities
double string_loglik(const std::vector<std::uint64_t>& bits, std::size_t n,
                     const double* logp) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        s += logp[get_bit(bits, j) + 2 * get_bit(bits, n + j)];
    }
    return s;
}

void label_log_probs(const std::vector<double>& p, double* logp) {
    // label order B1..B4 = (phase, amp) (0,0),(1,0),(0,1),(1,1)
    for (std::size_t i = 0; i < 4; ++i) {
        logp[i] = p[i] > 0.0 ? std::log2(p[i]) : -1e18;
    }
}

double candidate_entropy(const std::unordered_map<std::vector<std::uint64_t>, double, BitsHash>&
                             candidates) {
    double best = -1e300;
    for (const auto& [bits, ll] : candidates) best = std::max(best, ll);
    double norm = 0.0;
    for (const auto& [bits, ll] : candidates) norm += std::exp2(ll - best);
    double h = 0.0;
    for (const auto& [bits, ll] : candidates) {
        const double q = std::exp2(ll - best) / norm;
        if (q > 0.0) h -= q * std::log2(q);
    }
    return h;
}

// order the exported candidate list best-first (ties by string for determinism)
void sort_candidates(DecodeResult& result) {
    std::vector<std::size_t> idx(result.candidates.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (result.candidate_logliks[a] != result.candidate_logliks[b])
            return result.candidate_logliks[a] > result.candidate_logliks[b];
        return result.candidates[a] < result.candidates[b];
    });
    std::vector<std::vector<std::uint64_t>> cands;
    std::vector<double> lls;
    cands.reserve(idx.size());
    lls.reserve(idx.size());
    for (std::size_t i : idx) {
        cands.push_back(std::move(result.candidates[i]));
        lls.push_back(result.candidate_logliks[i]);
    }
    result.candidates = std::move(cands);
    result.candidate_logliks = std::move(lls);
}

// The iid log-prior of a packed string decomposes into popcounts:
// sum_j logp[phi_j + 2 mu_j] = a n + b |phi| + c |mu| + d |phi & mu|.
struct PopcountScorer {
    std::size_t n = 0;
    std::size_t words = 0;       // words of the full 2n-bit string
    std::size_t half_words = 0;  // words of one n-bit half
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    PopcountScorer(std::size_t n_, const double* logp) : n(n_) {
        words = word_count(2 * n);
        half_words = word_count(n);
        a = logp[0];
        b = logp[1] - logp[0];
        c = logp[2] - logp[0];
        d = logp[3] - logp[2] - logp[1] + logp[0];
    }

    void extract_halves(const std::uint64_t* cand, std::uint64_t* phi,
                        std::uint64_t* mu) const {
        const std::size_t shift = n % 64;
        const std::size_t base = n / 64;
        for (std::size_t w = 0; w < half_words; ++w) {
            phi[w] = cand[w];
            std::uint64_t lo = cand[base + w] >> shift;
            if (shift && base + w + 1 < words) lo |= cand[base + w + 1] << (64 - shift);
            mu[w] = lo;
        }
        const std::size_t tail = n % 64;
        if (tail) {
            const std::uint64_t mask = (std::uint64_t{1} << tail) - 1;
            phi[half_words - 1] &= mask;
            mu[half_words - 1] &= mask;
        }
    }

    double score(const std::uint64_t* cand, std::uint64_t* phi, std::uint64_t* mu) const {
        extract_halves(cand, phi, mu);
        int pp = 0, pm = 0, pb = 0;
        for (std::size_t w = 0; w < half_words; ++w) {
            pp += std::popcount(phi[w]);
            pm += std::popcount(mu[w]);
            pb += std::popcount(phi[w] & mu[w]);
        }
        return a * static_cast<double>(n) + b * pp + c * pm + d * pb;
    }
};

// Bounded best-candidates list with 64-bit-hash deduplication; the list
// minimum only ever rises, so a re-offered evicted entry is safely skipped.
struct TopCandidates {
    std::size_t capacity;
    std::vector<double> scores;
    std::vector<std::vector<std::uint64_t>> entries;
    std::unordered_map<std::uint64_t, char> seen;

    explicit TopCandidates(std::size_t cap) : capacity(cap) {}

    static std::uint64_t hash_bits(const std::uint64_t* cand, std::size_t words) {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (std::size_t w = 0; w < words; ++w) h = (h ^ cand[w]) * 0x100000001b3ull;
        return h;
    }

    double floor_ = -1e300;  // min of the list once full; only ever rises

    void offer(const std::uint64_t* cand, std::size_t words, double score) {
        if (scores.size() >= capacity && score <= floor_) return;
        const std::uint64_t h = hash_bits(cand, words);
        if (!seen.emplace(h, 1).second) return;
        if (scores.size() < capacity) {
            scores.push_back(score);
            entries.emplace_back(cand, cand + words);
            if (scores.size() == capacity) refresh_floor();
            return;
        }
        std::size_t lowest = 0;
        for (std::size_t i = 1; i < scores.size(); ++i) {
            if (scores[i] < scores[lowest]) lowest = i;
        }
        scores[lowest] = score;
        entries[lowest].assign(cand, cand + words);
        refresh_floor();
    }

    void refresh_floor() {
        floor_ = scores.front();
        for (double s : scores) floor_ = std::min(floor_, s);
    }
};

}  // namespace

DecodeResult decode_parities(std::size_t n, const std::vector<ParityConstraint>& constraints,
                             const std::vector<double>& p, std::uint64_t seed,
                             const DecodeResult* warm) {
    if (p.size() != 4) throw ContractError("decode_parities: need a 4-vector prior");
    check_distribution(p);
    const std::size_t bits = 2 * n;
    const std::size_t words = word_count(bits);
    double logp[4];
    label_log_probs(p, logp);

    const PopcountScorer scorer(n, logp);
    TopCandidates top(48);
    std::vector<std::uint64_t> phi(scorer.half_words), mu(scorer.half_words);
    auto offer = [&](const std::uint64_t* cand) {
        top.offer(cand, words, scorer.score(cand, phi.data(), mu.data()));
    };

    Rng rng = Rng::substream(seed, 0x9e3779b9);
    std::vector<std::size_t> order(bits);
    std::iota(order.begin(), order.end(), std::size_t{0});

    auto run_iteration = [&]() {
        // randomized information set: eliminate w.r.t. a fresh column order
        for (std::size_t i = bits; i > 1; --i) {
            std::swap(order[i - 1], order[rng.below(i)]);
        }
        std::vector<std::vector<std::uint64_t>> rows;
        std::vector<int> vals;
        rows.reserve(constraints.size());
        for (const ParityConstraint& c : constraints) {
            if (c.row.size() != words) throw ContractError("decode_parities: bad row width");
            rows.push_back(c.row);
            vals.push_back(c.value);
        }
        std::vector<std::size_t> pivot_cols;
        std::vector<std::size_t> pivot_rows;
        std::size_t next_row = 0;
        for (std::size_t oi = 0; oi < bits && next_row < rows.size(); ++oi) {
            const std::size_t col = order[oi];
            std::size_t hit = rows.size();
            for (std::size_t r = next_row; r < rows.size(); ++r) {
                if (get_bit(rows[r], col)) {
                    hit = r;
                    break;
                }
            }
            if (hit == rows.size()) continue;
            std::swap(rows[hit], rows[next_row]);
            std::swap(vals[hit], vals[next_row]);
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (r != next_row && get_bit(rows[r], col)) {
                    for (std::size_t w = 0; w < words; ++w) rows[r][w] ^= rows[next_row][w];
                    vals[r] ^= vals[next_row];
                }
            }
            pivot_cols.push_back(col);
            pivot_rows.push_back(next_row);
            ++next_row;
        }
        const std::size_t rank = pivot_cols.size();

        // particular solution with all free columns zero
        std::vector<std::uint64_t> base(words, 0);
        for (std::size_t r = 0; r < rank; ++r) {
            if (vals[pivot_rows[r]]) flip_bit(base, pivot_cols[r]);
        }
        // flipping free column f must also flip every pivot whose reduced row
        // contains f; precompute that correction mask per free column
        std::vector<bool> is_pivot(bits, false);
        for (std::size_t c : pivot_cols) is_pivot[c] = true;
        std::vector<std::size_t> free_cols;
        std::vector<std::vector<std::uint64_t>> free_masks;
        for (std::size_t c = 0; c < bits; ++c) {
            if (is_pivot[c]) continue;
            std::vector<std::uint64_t> mask(words, 0);
            flip_bit(mask, c);
            for (std::size_t r = 0; r < rank; ++r) {
                if (get_bit(rows[pivot_rows[r]], c)) flip_bit(mask, pivot_cols[r]);
            }
            free_cols.push_back(c);
            free_masks.push_back(std::move(mask));
        }

        // Lee-Brickell enumeration up to weight 3 over the free columns
        offer(base.data());
        std::vector<std::uint64_t> tmp(words), tmp2(words), tmp3(words);
        const std::size_t f_count = free_masks.size();
        for (std::size_t f1 = 0; f1 < f_count; ++f1) {
            for (std::size_t w = 0; w < words; ++w) tmp[w] = base[w] ^ free_masks[f1][w];
            offer(tmp.data());
            for (std::size_t f2 = f1 + 1; f2 < f_count; ++f2) {
                for (std::size_t w = 0; w < words; ++w) tmp2[w] = tmp[w] ^ free_masks[f2][w];
                offer(tmp2.data());
                for (std::size_t f3 = f2 + 1; f3 < f_count; ++f3) {
                    for (std::size_t w = 0; w < words; ++w)
                        tmp3[w] = tmp2[w] ^ free_masks[f3][w];
                    offer(tmp3.data());
                }
            }
        }
    };

    // softmax entropy over the current candidate list; the list stores unique
    // strings, so the scores can be used directly
    auto list_ambiguity = [&]() {
        std::unordered_map<std::vector<std::uint64_t>, double, BitsHash> m;
        for (std::size_t i = 0; i < top.entries.size(); ++i) m.emplace(top.entries[i], top.scores[i]);
        return candidate_entropy(m);
    };

    // Start with a light randomized-information-set search; spend the heavy
    // budget only when the posterior over candidates is not yet concentrated,
    // which is when missing a low-probability string would actually matter.
    // Large instances get a reduced budget: the per-iteration enumeration
    // grows cubically with the number of free columns.
    std::size_t light_iterations = bits <= 128 ? 40 : 12;
    std::size_t heavy_iterations = bits <= 128 ? 300 : 36;
    if (warm != nullptr) {
        // keep every still-consistent candidate from the previous decode and
        // only top up with a short fresh search
        for (const auto& cand : warm->candidates) {
            if (cand.size() != words) continue;
            bool ok = true;
            for (const ParityConstraint& c : constraints) {
                if (dot_parity(cand, c.row) != c.value) {
                    ok = false;
                    break;
                }
            }
            if (ok) offer(cand.data());
        }
        light_iterations = bits <= 128 ? 8 : 4;
        heavy_iterations = bits <= 128 ? 60 : 12;
    }
    std::size_t done = 0;
    for (; done < light_iterations; ++done) run_iteration();
    if (list_ambiguity() > 0.05) {
        for (; done < heavy_iterations; ++done) run_iteration();
    }


    DecodeResult result;
    double best = -1e300;
    std::unordered_map<std::vector<std::uint64_t>, double, BitsHash> found;
    for (std::size_t i = 0; i < top.entries.size(); ++i) {
        found.emplace(top.entries[i], top.scores[i]);
        const auto& cand = top.entries[i];
        const double ll = top.scores[i];
        if (ll > best || (ll == best && (result.map_string.empty() || cand < result.map_string))) {
            best = ll;
            result.map_string = cand;
        }
    }
    if (result.map_string.empty()) result.map_string.assign(words, 0);
    result.map_loglik = best;
    result.ambiguity_bits = candidate_entropy(found);
    for (const auto& [cand, ll] : found) {
        result.candidates.push_back(cand);
        result.candidate_logliks.push_back(ll);
    }
    sort_candidates(result);
    return result;
}

DecodeResult decode_parities_exact(std::size_t n, const std::vector<ParityConstraint>& constraints,
                                   const std::vector<double>& p) {
    if (n > 12) throw CapacityError("decode_parities_exact: n must be <= 12");
    if (p.size() != 4) throw ContractError("decode_parities_exact: need a 4-vector prior");
    check_distribution(p);
    const std::size_t bits = 2 * n;
    const std::size_t words = word_count(bits);
    double logp[4];
    label_log_probs(p, logp);

    std::unordered_map<std::vector<std::uint64_t>, double, BitsHash> consistent;
    std::vector<std::uint64_t> cand(words, 0);
    const std::size_t total = std::size_t{1} << bits;
    for (std::size_t s = 0; s < total; ++s) {
        cand[0] = s;  // bits <= 24 fit in the first word
        bool ok = true;
        for (const ParityConstraint& c : constraints) {
            if (dot_parity(cand, c.row) != c.value) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        const double ll = string_loglik(cand, n, logp);
        if (ll > -1e17) consistent.emplace(cand, ll);
    }
    if (consistent.empty()) {
        // every consistent string had zero prior; fall back to ignoring it
        for (std::size_t s = 0; s < total; ++s) {
            cand[0] = s;
            bool ok = true;
            for (const ParityConstraint& c : constraints) {
                if (dot_parity(cand, c.row) != c.value) {
                    ok = false;
                    break;
                }
            }
            if (ok) consistent.emplace(cand, string_loglik(cand, n, logp));
        }
    }

    DecodeResult result;
    double best = -1e300;
    for (const auto& [bits_v, ll] : consistent) {
        if (ll > best || (ll == best && (result.map_string.empty() || bits_v < result.map_string))) {
            best = ll;
            result.map_string = bits_v;
        }
    }
    result.map_loglik = best;
    result.ambiguity_bits = candidate_entropy(consistent);
    for (const auto& [bits_v, ll] : consistent) {
        result.candidates.push_back(bits_v);
        result.candidate_logliks.push_back(ll);
    }
    sort_candidates(result);
    return result;
}

// ---- hashing and breeding ----------------------------------------------------

namespace {

// Incremental parity-collection state shared by hashing and breeding;
// breeding cascades onto fresh known ancillas instead of sacrificing a
// subset member.
struct ParityRun {
    std::size_t n = 0;
    std::size_t words = 0;
    bool breeding_mode = false;
    Rng rng{0};
    std::vector<ParityConstraint> constraints;
    std::vector<std::uint64_t> hidden;  // packed 2n bits
    std::vector<std::vector<std::uint64_t>> phase_rows;
    std::vector<std::vector<std::uint64_t>> amp_rows;
    std::vector<bool> alive;

    ParityRun(std::size_t n_, const std::vector<double>& p, bool breeding, Rng rng_)
        : n(n_), words(word_count(2 * n_)), breeding_mode(breeding), rng(rng_) {
        hidden.assign(words, 0);
        for (std::size_t j = 0; j < n; ++j) {
            const double u = rng.uniform();
            double acc = 0.0;
            std::size_t label = 3;
            for (std::size_t l = 0; l < 4; ++l) {
                acc += p[l];
                if (u < acc) {
                    label = l;
                    break;
                }
            }
            if (label & 1) flip_bit(hidden, j);      // phase bit
            if (label & 2) flip_bit(hidden, n + j);  // amplitude bit
        }
        phase_rows.assign(n, std::vector<std::uint64_t>(words, 0));
        amp_rows.assign(n, std::vector<std::uint64_t>(words, 0));
        for (std::size_t j = 0; j < n; ++j) {
            flip_bit(phase_rows[j], j);
            flip_bit(amp_rows[j], n + j);
        }
        alive.assign(n, true);
    }

    std::size_t alive_count() const {
        std::size_t c = 0;
        for (bool a : alive) c += a ? 1 : 0;
        return c;
    }

    // Current labels of the kept pairs implied by an original label string:
    // pair j currently carries phase P_j . s and amplitude M_j . s.
    std::vector<std::uint8_t> survivor_labels(const std::vector<std::uint64_t>& s) const {
        std::vector<std::uint8_t> out;
        for (std::size_t j = 0; j < n; ++j) {
            if (!alive[j]) continue;
            out.push_back(static_cast<std::uint8_t>(dot_parity(phase_rows[j], s) |
                                                    (dot_parity(amp_rows[j], s) << 1)));
        }
        return out;
    }

    bool can_round() const { return breeding_mode || alive_count() > 0; }

    void do_round() {
        const bool amp_round = rng.coin();
        std::vector<std::size_t> subset;
        while (subset.empty()) {
            for (std::size_t j = 0; j < n; ++j) {
                if (alive[j] && rng.coin()) subset.push_back(j);
            }
        }
        const std::size_t target = breeding_mode ? 0 : subset[rng.below(subset.size())];
        apply_round(amp_round, subset, target);
    }

    // revealed functional of a prospective round: sum of the chosen rows
    std::vector<std::uint64_t> round_functional(bool amp_round,
                                                const std::vector<std::size_t>& subset) const {
        std::vector<std::uint64_t> r(words, 0);
        for (std::size_t j : subset) {
            const auto& src = amp_round ? amp_rows[j] : phase_rows[j];
            for (std::size_t w = 0; w < words; ++w) r[w] ^= src[w];
        }
        return r;
    }

    void apply_round(bool amp_round, const std::vector<std::size_t>& subset, std::size_t target) {
        std::vector<std::uint64_t> row(words, 0);
        if (breeding_mode) {
            // fresh ancilla with known zero label: its rows start empty
            std::vector<std::uint64_t> anc_phase(words, 0), anc_amp(words, 0);
            for (std::size_t j : subset) {
                if (amp_round) {
                    // bxor(j -> ancilla)
                    for (std::size_t w = 0; w < words; ++w) {
                        anc_amp[w] ^= amp_rows[j][w];
                        phase_rows[j][w] ^= anc_phase[w];
                    }
                } else {
                    // bxor(ancilla -> j)
                    for (std::size_t w = 0; w < words; ++w) {
                        anc_phase[w] ^= phase_rows[j][w];
                        amp_rows[j][w] ^= anc_amp[w];
                    }
                }
            }
            row = amp_round ? anc_amp : anc_phase;
        } else {
            const std::size_t t = target;
            for (std::size_t j : subset) {
                if (j == t) continue;
                if (amp_round) {
                    // bxor(j -> t): t's amplitude accumulates
                    for (std::size_t w = 0; w < words; ++w) {
                        amp_rows[t][w] ^= amp_rows[j][w];
                        phase_rows[j][w] ^= phase_rows[t][w];
                    }
                } else {
                    // bxor(t -> j): t's phase accumulates
                    for (std::size_t w = 0; w < words; ++w) {
                        phase_rows[t][w] ^= phase_rows[j][w];
                        amp_rows[j][w] ^= amp_rows[t][w];
                    }
                }
            }
            row = amp_round ? amp_rows[t] : phase_rows[t];
            alive[t] = false;
        }
        constraints.push_back({row, dot_parity(row, hidden)});
    }
};

ProtocolOutcome parity_protocol(std::size_t n, const std::vector<double>& p, std::size_t margin,
                                std::uint64_t seed, bool breeding_mode) {
    const char* name = breeding_mode ? "breeding" : "hashing";
    if (p.size() != 4) throw ContractError(std::string(name) + ": need a 4-vector");
    check_distribution(p);
    if (n < 4) throw ContractError(std::string(name) + ": need at least 4 pairs");
    const double h = shannon(p);
    if (h >= 1.0 - 1e-12) {
        throw ContractError(std::string(name) +
                            ": label entropy must be below 1 bit per pair, the parity "
                            "budget cannot cover the string otherwise");
    }

    std::size_t base_rounds = static_cast<std::size_t>(
        std::ceil(h * static_cast<double>(n) - 1e-9));
    base_rounds += margin;
    if (!breeding_mode) base_rounds = std::min(base_rounds, n);

    ParityRun run(n, p, breeding_mode, Rng::substream(seed, 1));
    for (std::size_t r = 0; r < base_rounds && run.can_round(); ++r) run.do_round();

    // What the parties must pin down is the joint label of the pairs they
    // keep, not the bits of pairs already consumed (those no longer affect
    // any state they hold). Marginalize the decoder's candidate strings onto
    // the kept pairs' current labels and measure ambiguity there.
    struct Projection {
        double ambiguity = 0.0;  // entropy over kept-pair label assignments
        double map_mass = 1.0;   // posterior mass of the leading assignment
        std::vector<std::uint8_t> map_labels;
    };
    auto project = [&run](const DecodeResult& dec) {
        Projection proj;
        if (dec.candidate_logliks.empty()) return proj;
        const double best = dec.candidate_logliks.front();
        std::map<std::vector<std::uint8_t>, double> mass;
        for (std::size_t i = 0; i < dec.candidates.size(); ++i) {
            mass[run.survivor_labels(dec.candidates[i])] +=
                std::exp2(dec.candidate_logliks[i] - best);
        }
        double norm = 0.0;
        for (const auto& [key, w] : mass) norm += w;
        double h = 0.0, top = -1.0;
        for (const auto& [key, w] : mass) {
            const double q = w / norm;
            if (q > 0.0) h -= q * std::log2(q);
            if (w > top) {
                top = w;
                proj.map_labels = key;
                proj.map_mass = q;
            }
        }
        proj.ambiguity = h;
        return proj;
    };

    // The comparison record is public, so both parties can tell when it still
    // leaves more than one plausible assignment for the kept pairs. Keep
    // spending rounds until that resolves or the supply of comparisons runs
    // out (hashing: no intact pair left to sacrifice; breeding: cap the
    // ancilla overhead at one extra round per pair).
    constexpr double kAmbiguityStop = 0.06;
    const std::uint64_t decode_seed = seed ^ 0xabcdef12345ull;
    DecodeResult decoded = decode_parities(n, run.constraints, p, decode_seed);
    Projection proj = project(decoded);
    std::size_t extra_cap = breeding_mode ? n : std::numeric_limits<std::size_t>::max();
    // An extension round need not be random: every quantity below is computed
    // from the public record, so the parties can agree on the comparison whose
    // announced parity is most uncertain under the candidate posterior, which
    // maximizes the expected information gain per sacrificed pair.
    auto targeted_round = [&](const DecodeResult& dec) {
        if (dec.candidates.empty()) {
            run.do_round();
            return;
        }
        const double best_ll = dec.candidate_logliks.front();
        std::vector<double> w(dec.candidates.size());
        double norm = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            w[i] = std::exp2(dec.candidate_logliks[i] - best_ll);
            norm += w[i];
        }
        std::vector<std::size_t> avail;
        for (std::size_t j = 0; j < n; ++j) {
            if (run.alive[j]) avail.push_back(j);
        }
        // per-pair label entropy, used to sacrifice the most uncertain member
        auto pair_entropy = [&](std::size_t j) {
            double mass[4] = {0, 0, 0, 0};
            for (std::size_t i = 0; i < w.size(); ++i) {
                const int lbl = dot_parity(run.phase_rows[j], dec.candidates[i]) |
                                (dot_parity(run.amp_rows[j], dec.candidates[i]) << 1);
                mass[lbl] += w[i];
            }
            double h = 0.0;
            for (double m : mass) {
                const double q = m / norm;
                if (q > 0.0) h -= q * std::log2(q);
            }
            return h;
        };
        double best_score = -1.0;
        bool best_amp = false;
        std::vector<std::size_t> best_subset;
        std::size_t best_target = 0;
        auto consider = [&](bool amp, std::vector<std::size_t> subset, std::size_t target) {
            const auto r = run.round_functional(amp, subset);
            double m1 = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) {
                if (dot_parity(r, dec.candidates[i])) m1 += w[i];
            }
            const double q = m1 / norm;
            double score = 0.0;
            if (q > 0.0 && q < 1.0) score = -(q * std::log2(q) + (1 - q) * std::log2(1 - q));
            if (score > best_score + 1e-12) {
                best_score = score;
                best_amp = amp;
                best_subset = std::move(subset);
                best_target = target;
            }
        };
        for (const bool amp : {false, true}) {
            for (std::size_t ai = 0; ai < avail.size(); ++ai) {
                consider(amp, {avail[ai]}, avail[ai]);
                for (std::size_t bi = ai + 1; bi < avail.size(); ++bi) {
                    const std::size_t a = avail[ai], b = avail[bi];
                    const std::size_t tgt =
                        breeding_mode ? a : (pair_entropy(a) >= pair_entropy(b) ? a : b);
                    consider(amp, {a, b}, tgt);
                }
            }
        }
        if (best_score <= 1e-9) {
            run.do_round();  // posterior already split by nothing available; fall back
        } else {
            run.apply_round(best_amp, best_subset, best_target);
        }
    };

    while (1.0 - proj.map_mass > kAmbiguityStop && extra_cap > 0 && run.can_round()) {
        targeted_round(decoded);
        decoded = decode_parities(n, run.constraints, p, decode_seed, &decoded);
        proj = project(decoded);
        --extra_cap;
    }
    const std::size_t rounds = run.constraints.size();

    ParityRunStats stats;
    stats.rounds = rounds;
    stats.identified = 1.0 - proj.map_mass <= kAmbiguityStop &&
                       proj.map_labels == run.survivor_labels(run.hidden);
    stats.residual_ambiguity = proj.ambiguity;
    for (std::size_t j = 0; j < n; ++j) {
        stats.hidden_labels.push_back(bell_index_label(
            BellIndex(2, static_cast<std::size_t>(get_bit(run.hidden, j)),
                      static_cast<std::size_t>(get_bit(run.hidden, n + j)))));
        stats.decoded_labels.push_back(bell_index_label(
            BellIndex(2, static_cast<std::size_t>(get_bit(decoded.map_string, j)),
                      static_cast<std::size_t>(get_bit(decoded.map_string, n + j)))));
    }
    std::size_t yield = 0;
    if (breeding_mode) {
        yield = n;
    } else {
        for (bool a : run.alive) yield += a ? 1 : 0;
    }
    stats.yield_pairs = yield;

    Ledger ledger;
    if (breeding_mode) {
        ledger.n_bits = 2.0 * static_cast<double>(n + rounds);
        ledger.e_i = static_cast<double>(n + rounds);
    } else {
        ledger.n_bits = 2.0 * static_cast<double>(n);
        ledger.e_i = static_cast<double>(n);
    }
    ledger.e_f = static_cast<double>(yield);
    // information estimate: prior entropy minus what the candidate set leaves
    // unresolved, capped by the number of announced comparison bits
    double info = h * static_cast<double>(n) - proj.ambiguity;
    info = std::clamp(info, 0.0, static_cast<double>(rounds));
    ledger.i_a = 0.0;
    ledger.i_b = info;
    ledger.i_total = info;
    ledger.e_distilled = stats.identified ? static_cast<double>(yield) : 0.0;
    ledger.gap = ledger.n_bits - ledger.e_i - ledger.e_f - ledger.i_total;
    if (ledger.gap < -1e-7) throw BoundViolationError(std::string(name) + ": negative ledger gap");

    ProtocolOutcome out;
    out.ledger = std::move(ledger);
    out.identified = {stats.identified
                          ? "the joint Bell labels of every kept pair"
                          : "parity constraints only (kept pairs not uniquely resolved)"};
    if (stats.identified) out.distilled_dims.assign(yield, 2);
    out.parity = std::move(stats);
    return out;
}

}  // namespace

ProtocolOutcome hashing(std::size_t n, const std::vector<double>& p, std::size_t margin,
                        std::uint64_t seed) {
    return parity_protocol(n, p, margin, seed, false);
}

ProtocolOutcome breeding(std::size_t n, const std::vector<double>& p, std::size_t margin,
                         std::uint64_t seed) {
    return parity_protocol(n, p, margin, seed, true);
}

}  // namespace locc
