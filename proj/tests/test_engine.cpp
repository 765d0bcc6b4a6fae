#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "locc/engine.hpp"
#include "locc/errors.hpp"
#include "locc/rng.hpp"

using namespace locc;

namespace {

double completeness_defect(const Instrument& inst) {
    const std::size_t d = inst.dim();
    ComplexMatrix sum(d, d);
    for (const auto& op : inst.operators) sum = sum.plus(matmul(op.dagger(), op));
    return sum.minus(ComplexMatrix::identity(d)).max_abs();
}

}  // namespace

TEST_CASE("Instrument constructor enforces completeness and shapes") {
    // valid: two orthogonal projectors
    const auto p0 = ComplexMatrix::diagonal({Cx(1, 0), Cx(0, 0)});
    const auto p1 = ComplexMatrix::diagonal({Cx(0, 0), Cx(1, 0)});
    CHECK_NOTHROW(Instrument({p0, p1}, Side::A));
    // incomplete
    CHECK_THROWS_AS(Instrument({p0, p0}, Side::A), ContractError);
    // empty
    CHECK_THROWS_AS(Instrument({}, Side::A), ContractError);
    // ragged shapes
    CHECK_THROWS_AS(Instrument({p0, ComplexMatrix::identity(3)}, Side::A), ShapeError);
}

TEST_CASE("builder instruments are complete") {
    const std::vector<std::size_t> dims{2, 3};
    CHECK(completeness_defect(z_instrument(dims, {0}, Side::A)) < 1e-10);
    CHECK(completeness_defect(z_instrument(dims, {0, 1}, Side::B)) < 1e-10);
    CHECK(completeness_defect(fourier_instrument(dims, 1, Side::A)) < 1e-10);
    CHECK(completeness_defect(offset_instrument({3, 3}, 0, 1, Side::B)) < 1e-10);
    CHECK(z_instrument(dims, {0, 1}, Side::B).outcomes() == 6);
    CHECK(fourier_instrument(dims, 1, Side::A).outcomes() == 3);
    CHECK(offset_instrument({3, 3}, 0, 1, Side::B).outcomes() == 3);
    // offset projectors have rank d: trace d each
    const auto off = offset_instrument({3, 3}, 0, 1, Side::A);
    for (const auto& op : off.operators) CHECK(std::abs(op.trace() - Cx(3, 0)) < 1e-12);
}

TEST_CASE("random_instrument: completeness for several shapes, deterministic per seed") {
    Rng seeds(42);
    for (std::size_t dim : {2u, 3u, 5u}) {
        for (std::size_t outcomes : {1u, 2u, 4u}) {
            const auto inst = random_instrument(dim, outcomes, Side::A, seeds.next_u64());
            CHECK(inst.outcomes() == outcomes);
            CHECK(completeness_defect(inst) < 1e-8);
        }
    }
    const auto a = random_instrument(3, 2, Side::B, 777);
    const auto b = random_instrument(3, 2, Side::B, 777);
    for (std::size_t k = 0; k < 2; ++k)
        CHECK(a.operators[k].minus(b.operators[k]).max_abs() == 0.0);
}

TEST_CASE("csum gates: add and sub are mutual inverses and permute the basis") {
    const std::vector<std::size_t> dims{3, 3};
    const auto add = csum_add_gate(dims, 0, 1);
    const auto sub = csum_sub_gate(dims, 0, 1);
    CHECK(matmul(add, sub).minus(ComplexMatrix::identity(9)).max_abs() < 1e-12);
    // |c=1, t=1> -> |c=1, t=2> under add
    CHECK(std::abs(add.at(1 * 3 + 2, 1 * 3 + 1) - Cx(1, 0)) < 1e-15);
    CHECK_THROWS_AS((void)csum_add_gate({2, 3}, 0, 1), ShapeError);
}

TEST_CASE("embed_factor_op and permutation_gate") {
    const ComplexMatrix X(2, 2, {Cx(0, 0), Cx(1, 0), Cx(1, 0), Cx(0, 0)});
    const auto embedded = embed_factor_op(X, {2, 2}, 1);
    CHECK(embedded.minus(kron(ComplexMatrix::identity(2), X)).max_abs() < 1e-12);
    const auto embedded0 = embed_factor_op(X, {2, 2}, 0);
    CHECK(embedded0.minus(kron(X, ComplexMatrix::identity(2))).max_abs() < 1e-12);
    CHECK_THROWS_AS((void)embed_factor_op(X, {2, 2}, 2), ShapeError);

    // swap of two qubits as a permutation gate
    const auto swap = permutation_gate({2, 2}, [](std::vector<std::size_t>& d) {
        std::swap(d[0], d[1]);
    });
    CHECK(std::abs(swap.at(1, 2) - Cx(1, 0)) < 1e-15);
    CHECK(std::abs(swap.at(2, 1) - Cx(1, 0)) < 1e-15);
    CHECK(matmul(swap, swap).minus(ComplexMatrix::identity(4)).max_abs() < 1e-12);
}

TEST_CASE("apply_local and apply_one_sided agree with explicit kron action") {
    Rng rng(9);
    const auto s = gen_bell(2, 1, 1);
    const auto ua = random_instrument(2, 1, Side::A, rng.next_u64()).operators[0];
    const auto ub = random_instrument(2, 1, Side::B, rng.next_u64()).operators[0];
    const auto fast = apply_local(s, ua, ub);
    // explicit: (ua (x) ub) |s>
    const auto full = kron(ua, ub);
    std::vector<Cx> expect(4, Cx(0, 0));
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) expect[r] += full.at(r, c) * s.amplitudes()[c];
    for (std::size_t r = 0; r < 4; ++r) CHECK(std::abs(fast.amplitudes()[r] - expect[r]) < 1e-12);

    const auto p0 = ComplexMatrix::diagonal({Cx(1, 0), Cx(0, 0)});
    auto [amps, norm2] = apply_one_sided(s, p0, Side::A);
    CHECK(norm2 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(amps[0 * 2 + 1]) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::abs(amps[1 * 2 + 0]) < 1e-15);
}

TEST_CASE("1-way ordering contract: Alice may not measure after Bob") {
    const std::vector<std::size_t> dims{2};
    std::vector<ProtocolStep> bad;
    bad.push_back(BobMeasure{[dims](const std::vector<int>&, const std::vector<int>&) {
        return z_instrument(dims, {0}, Side::B);
    }});
    bad.push_back(AliceMeasure{z_instrument(dims, {0}, Side::A)});
    CHECK_THROWS_AS(OneWayProtocol(std::move(bad)), ContractError);
}

TEST_CASE("run_protocol: empty protocol ledger on the uniform Bell ensemble") {
    const auto ledger = run_protocol(uniform_bell_ensemble(2, 1), OneWayProtocol({}));
    CHECK(ledger.n_bits == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(ledger.e_i == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ledger.e_f == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ledger.i_total == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ledger.gap == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(ledger.e_distilled == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("run_protocol: both parties read the computational basis of one unknown Bell pair") {
    const std::vector<std::size_t> dims{2};
    std::vector<ProtocolStep> steps;
    steps.push_back(AliceMeasure{z_instrument(dims, {0}, Side::A)});
    steps.push_back(BobMeasure{[dims](const std::vector<int>&, const std::vector<int>&) {
        return z_instrument(dims, {0}, Side::B);
    }});
    const auto ledger = run_protocol(uniform_bell_ensemble(2, 1), OneWayProtocol(std::move(steps)));
    // the compared outcomes reveal exactly the amplitude bit m
    CHECK(ledger.i_total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ledger.e_f == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(ledger.gap == doctest::Approx(0.0).epsilon(1e-9));
    // Alice's own outcome alone says nothing about the label
    CHECK(ledger.i_a == doctest::Approx(0.0).epsilon(1e-9));
    // entanglement never increased along the way
    for (std::size_t i = 1; i < ledger.per_step_avg_ent.size(); ++i)
        CHECK(ledger.per_step_avg_ent[i] <= ledger.per_step_avg_ent[i - 1] + 1e-7);
}

TEST_CASE("Discard drops verified product factors and keeps the ledger consistent") {
    // Bell pair plus a known |0>|0> ancilla pair on each side
    PureState anc({Cx(1, 0), Cx(0, 0), Cx(0, 0), Cx(0, 0)}, BipartiteDims{2, 2});
    const auto state = tensor_canonical(bell(1), anc);
    Ensemble e({{1.0, state}});
    std::vector<ProtocolStep> steps;
    steps.push_back(Discard{{2, 2}, {true, false}, {2, 2}, {true, false}});
    const auto ledger = run_protocol(e, OneWayProtocol(std::move(steps)));
    CHECK(ledger.n_bits == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(ledger.e_i == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ledger.e_f == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ledger.gap == doctest::Approx(2.0).epsilon(1e-9));

    // discarding an entangled factor is rejected
    std::vector<ProtocolStep> bad;
    bad.push_back(Discard{{2, 2}, {false, true}, {2, 2}, {true, true}});
    Ensemble e2({{1.0, tensor_canonical(bell(1), bell(1))}});
    CHECK_THROWS_AS((void)run_protocol(e2, OneWayProtocol(std::move(bad))), ContractError);
}

TEST_CASE("run_protocol rejects mixed-component ensembles") {
    Ensemble mixed({{1.0, bell_diagonal({0.25, 0.25, 0.25, 0.25})}});
    CHECK_THROWS_AS((void)run_protocol(mixed, OneWayProtocol({})), ContractError);
}

TEST_CASE("holevo_chain_audit passes on random ensembles and random 1-way protocols") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        Rng rng = Rng::substream(5150, seed);
        const std::size_t da = 2 + rng.below(3);
        const std::size_t db = 2 + rng.below(3);
        const auto e = random_pure_ensemble({da, db}, 2 + rng.below(3), rng.next_u64());
        std::vector<ProtocolStep> steps;
        steps.push_back(AliceMeasure{random_instrument(da, 2 + rng.below(da), Side::A,
                                                       rng.next_u64())});
        const std::uint64_t bob_seed = rng.next_u64();
        steps.push_back(BobMeasure{[db, bob_seed](const std::vector<int>& alice,
                                                  const std::vector<int>&) {
            return random_instrument(db, 2, Side::B,
                                     bob_seed ^ static_cast<std::uint64_t>(alice.at(0)));
        }});
        const OneWayProtocol protocol(std::move(steps));
        const auto audit = holevo_chain_audit(e, protocol);
        CHECK(audit.ok);
        CHECK(audit.i_a_realized <= audit.chi_a + 1e-7);
        for (const auto& pk : audit.per_k) CHECK(pk.i_b_realized <= pk.chi_b + 1e-7);

        // and the ledger inequality holds with monotone per-step entanglement
        const auto ledger = run_protocol(e, protocol);
        CHECK(ledger.gap >= -1e-7);
        for (std::size_t i = 1; i < ledger.per_step_avg_ent.size(); ++i)
            CHECK(ledger.per_step_avg_ent[i] <= ledger.per_step_avg_ent[i - 1] + 1e-7);
    }
}

TEST_CASE("LocalUnitary contract: non-unitary operators rejected") {
    std::vector<ProtocolStep> steps;
    steps.push_back(LocalUnitary{ComplexMatrix::diagonal({Cx(1, 0), Cx(0.5, 0)}),
                                 ComplexMatrix::identity(2)});
    const OneWayProtocol protocol(std::move(steps));
    CHECK_THROWS_AS((void)run_protocol(uniform_bell_ensemble(2, 1), protocol), ContractError);
}
