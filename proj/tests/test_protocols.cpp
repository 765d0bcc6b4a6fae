#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "locc/errors.hpp"
#include "locc/protocols.hpp"
#include "locc/rng.hpp"

using namespace locc;

namespace {

const double kLog2_3 = std::log2(3.0);

// Compare an index-level ledger against a full matrix-backend ledger.
void check_ledgers_agree(const Ledger& index, const Ledger& matrix, double tol = 1e-7) {
    CHECK(index.n_bits == doctest::Approx(matrix.n_bits).epsilon(tol));
    CHECK(index.e_i == doctest::Approx(matrix.e_i).epsilon(tol));
    CHECK(index.e_f == doctest::Approx(matrix.e_f).epsilon(tol));
    CHECK(index.i_a == doctest::Approx(matrix.i_a).epsilon(tol));
    CHECK(index.i_b == doctest::Approx(matrix.i_b).epsilon(tol));
    CHECK(index.i_total == doctest::Approx(matrix.i_total).epsilon(tol));
    CHECK(index.e_distilled == doctest::Approx(matrix.e_distilled).epsilon(tol));
    CHECK(index.gap == doctest::Approx(matrix.gap).epsilon(tol));
}

}  // namespace

TEST_CASE("two-copy discrimination: index ledger matches the matrix backend, d = 2 and 3") {
    for (std::size_t d : {std::size_t{2}, std::size_t{3}}) {
        const auto out = two_copy_discrimination(d);
        check_ledgers_agree(out.ledger, two_copy_discrimination_matrix(d));
        const double logd = std::log2(static_cast<double>(d));
        CHECK(out.ledger.i_total == doctest::Approx(2.0 * logd).epsilon(1e-9));
        CHECK(out.ledger.e_f == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(out.ledger.gap == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(out.distilled_dims.empty());
    }
    CHECK_THROWS_AS((void)two_copy_discrimination(1), ContractError);
}

TEST_CASE("full info then keep (3 copies): ledger agreement and values") {
    const auto out = full_info_then_keep(3);
    check_ledgers_agree(out.ledger, full_info_then_keep_matrix(3));
    CHECK(out.ledger.n_bits == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(out.ledger.e_i == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(out.ledger.i_total == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(out.ledger.e_f == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(out.ledger.e_distilled == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(out.ledger.gap == doctest::Approx(0.0).epsilon(1e-9));
    CHECK_THROWS_AS((void)full_info_then_keep(2), ContractError);
}

TEST_CASE("bilateral-XOR chain: 3 and 4 copies against the matrix backend") {
    const auto odd = bxor_chain(3);
    check_ledgers_agree(odd.ledger, bxor_chain_matrix(3));
    CHECK(odd.ledger.i_total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(odd.ledger.e_distilled == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(odd.ledger.gap == doctest::Approx(0.0).epsilon(1e-9));

    const auto even = bxor_chain(4);
    check_ledgers_agree(even.ledger, bxor_chain_matrix(4));
    CHECK(even.ledger.i_total == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(even.ledger.e_distilled == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(even.ledger.gap == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("qutrit two-copy partial discrimination") {
    const auto out = qutrit_two_copy_partial();
    check_ledgers_agree(out.ledger, qutrit_two_copy_partial_matrix());
    CHECK(out.ledger.n_bits == doctest::Approx(4.0 * kLog2_3).epsilon(1e-9));
    CHECK(out.ledger.e_i == doctest::Approx(2.0 * kLog2_3).epsilon(1e-9));
    CHECK(out.ledger.i_total == doctest::Approx(kLog2_3).epsilon(1e-9));
    CHECK(out.ledger.e_distilled == doctest::Approx(kLog2_3).epsilon(1e-9));
    CHECK(out.ledger.gap == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(out.distilled_dims == std::vector<std::size_t>{3});
}

TEST_CASE("ebit-assisted discrimination, d = 2 and 3") {
    for (std::size_t d : {std::size_t{2}, std::size_t{3}}) {
        const auto out = ebit_assisted_discrimination(d);
        check_ledgers_agree(out.ledger, ebit_assisted_discrimination_matrix(d));
        const double logd = std::log2(static_cast<double>(d));
        CHECK(out.ledger.i_total == doctest::Approx(2.0 * logd).epsilon(1e-9));
        CHECK(out.ledger.gap == doctest::Approx(0.0).epsilon(1e-9));
    }
}

TEST_CASE("error-correct-and-distill: bitflip3 against the matrix backend") {
    const auto out = error_correct_distill(StabilizerCode::bitflip3());
    check_ledgers_agree(out.ledger, error_correct_distill_matrix());
    CHECK(out.ledger.n_bits == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(out.ledger.e_i == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(out.ledger.i_total == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(out.ledger.e_f == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(out.ledger.e_distilled == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(out.ledger.gap == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(out.distilled_dims == std::vector<std::size_t>{2});
}

TEST_CASE("error-correct-and-distill: five-qubit code, 16 syndromes fill the ledger") {
    const auto out = error_correct_distill(StabilizerCode::five_qubit());
    CHECK(out.ledger.n_bits == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(out.ledger.e_i == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(out.ledger.i_total == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(out.ledger.e_f == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(out.ledger.e_distilled == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(out.ledger.gap == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("one recurrence round: exact ledger values") {
    // uniform source: the comparison succeeds half the time, reveals 1 bit
    const auto unif = recurrence_ledger({0.25, 0.25, 0.25, 0.25});
    CHECK(unif.ledger.n_bits == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(unif.ledger.e_i == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(unif.ledger.i_total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(unif.ledger.e_f == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(unif.ledger.gap == doctest::Approx(0.5).epsilon(1e-9));

    // independently enumerated oracle for p = (0.7, 0.1, 0.1, 0.1):
    // success 0.68, revealed bit entropy h2(0.68), gap strictly positive
    const auto out = recurrence_ledger({0.7, 0.1, 0.1, 0.1});
    const double h_success = -(0.68 * std::log2(0.68) + 0.32 * std::log2(0.32));
    CHECK(out.ledger.i_total == doctest::Approx(h_success).epsilon(1e-9));
    CHECK(out.ledger.e_f == doctest::Approx(0.68).epsilon(1e-9));
    CHECK(out.ledger.gap == doctest::Approx(2.0 - 0.68 - h_success).epsilon(1e-9));
    CHECK(out.ledger.gap > 0.0);

    // deterministic sources are rejected: nothing is revealed or purified
    CHECK_THROWS_AS((void)recurrence_ledger({1.0, 0.0, 0.0, 0.0}), ContractError);
    CHECK_THROWS_AS((void)recurrence_ledger({0.5, 0.5}), ContractError);
}

TEST_CASE("parity decoder matches the exhaustive-posterior reference on small instances") {
    const std::vector<double> p{0.8, 0.1, 0.05, 0.05};
    for (std::uint64_t trial = 0; trial < 12; ++trial) {
        Rng rng = Rng::substream(2024, trial);
        const std::size_t n = 6 + rng.below(3);  // 6..8 pairs -> 12..16 bits
        const std::size_t bits = 2 * n;
        const std::size_t words = (bits + 63) / 64;
        // hidden string drawn from p per pair: phase bits 0..n-1, amp n..2n-1
        std::vector<std::uint64_t> hidden(words, 0);
        for (std::size_t j = 0; j < n; ++j) {
            const double u = rng.uniform();
            std::size_t label = 0;
            double acc = 0.0;
            for (; label < 3; ++label) {
                acc += p[label];
                if (u < acc) break;
            }
            const std::size_t nbit = label & 1, mbit = label >> 1;
            if (nbit) hidden[j / 64] |= 1ULL << (j % 64);
            if (mbit) hidden[(n + j) / 64] |= 1ULL << ((n + j) % 64);
        }
        std::vector<ParityConstraint> constraints;
        const std::size_t rounds = n + 2 + rng.below(3);
        for (std::size_t r = 0; r < rounds; ++r) {
            ParityConstraint c;
            c.row.assign(words, 0);
            int parity = 0;
            for (std::size_t b = 0; b < bits; ++b) {
                if (rng.coin()) {
                    c.row[b / 64] |= 1ULL << (b % 64);
                    parity ^= static_cast<int>((hidden[b / 64] >> (b % 64)) & 1ULL);
                }
            }
            c.value = parity;
            constraints.push_back(std::move(c));
        }
        const auto exact = decode_parities_exact(n, constraints, p);
        const auto fast = decode_parities(n, constraints, p, 99 + trial);
        // the randomized decoder must find a string of the same posterior
        // log-likelihood as the exhaustive maximum
        CHECK(fast.map_loglik == doctest::Approx(exact.map_loglik).epsilon(1e-9));
        REQUIRE(!exact.candidates.empty());
        REQUIRE(!fast.candidates.empty());
        CHECK(fast.candidates.front() == fast.map_string);
    }
    CHECK_THROWS_AS((void)decode_parities_exact(13, {}, p), CapacityError);
}

TEST_CASE("hashing with a noiseless source: every round is pure sacrifice") {
    const auto out = hashing(12, {1.0, 0.0, 0.0, 0.0}, 3, 5);
    REQUIRE(out.parity.has_value());
    CHECK(out.parity->rounds == 3);
    CHECK(out.parity->yield_pairs == 9);
    CHECK(out.parity->identified);
    CHECK(out.parity->residual_ambiguity == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(out.ledger.n_bits == doctest::Approx(24.0).epsilon(1e-12));
    CHECK(out.ledger.e_i == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(out.ledger.e_f == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(out.ledger.i_total == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(out.ledger.e_distilled == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(out.ledger.gap == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("breeding with a noiseless source and no margin is a perfect ledger") {
    const auto out = breeding(8, {1.0, 0.0, 0.0, 0.0}, 0, 5);
    REQUIRE(out.parity.has_value());
    CHECK(out.parity->rounds == 0);
    CHECK(out.parity->yield_pairs == 8);
    CHECK(out.parity->identified);
    CHECK(out.ledger.gap == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(out.ledger.e_f == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("hashing and breeding premise checks") {
    const std::vector<double> ok{0.9, 0.1 / 3, 0.1 / 3, 0.1 / 3};
    CHECK_THROWS_AS((void)hashing(8, {0.5, 0.5}, 1, 1), ContractError);
    CHECK_THROWS_AS((void)hashing(8, {0.25, 0.25, 0.25, 0.25}, 1, 1), ContractError);  // H = 1
    CHECK_THROWS_AS((void)hashing(3, ok, 1, 1), ContractError);
    CHECK_THROWS_AS((void)breeding(8, {0.5, 0.6, 0.0, -0.1}, 1, 1), ContractError);
}

TEST_CASE("hashing is deterministic per seed and its ledger always balances") {
    const std::vector<double> p{0.9, 0.1 / 3, 0.1 / 3, 0.1 / 3};
    const auto a = hashing(16, p, 4, 31337);
    const auto b = hashing(16, p, 4, 31337);
    CHECK(a.parity->rounds == b.parity->rounds);
    CHECK(a.parity->hidden_labels == b.parity->hidden_labels);
    CHECK(a.parity->decoded_labels == b.parity->decoded_labels);
    CHECK(a.ledger.gap == doctest::Approx(b.ledger.gap).epsilon(1e-15));

    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto out = hashing(16, p, 4, seed);
        CHECK(out.ledger.gap >= -1e-7);
        CHECK(out.ledger.e_distilled <= out.ledger.e_f + 1e-12);
        CHECK(out.parity->rounds >= 4 + static_cast<std::size_t>(
                                            std::ceil(16.0 * shannon(p) - 1e-9)));
        const auto breed = breeding(16, p, 4, seed);
        CHECK(breed.ledger.gap >= -1e-7);
        CHECK(breed.parity->yield_pairs == 16);
    }
}

TEST_CASE("recovered labels match the hidden labels whenever a run reports identification") {
    const std::vector<double> p{0.9, 0.1 / 3, 0.1 / 3, 0.1 / 3};
    int identified = 0;
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        // breeding keeps every source pair, so an identified run must have
        // decoded the full hidden label string
        const auto out = breeding(20, p, 8, seed);
        if (!out.parity->identified) continue;
        ++identified;
        REQUIRE(out.parity->decoded_labels.size() == out.parity->hidden_labels.size());
        CHECK(out.parity->decoded_labels == out.parity->hidden_labels);
    }
    CHECK(identified > 10);  // margin 8 on 20 pairs identifies most runs
}
