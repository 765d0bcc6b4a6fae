#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "locc/bell_calculus.hpp"
#include "locc/engine.hpp"
#include "locc/errors.hpp"
#include "locc/states.hpp"

using namespace locc;

namespace {

// Two labelled pairs as a full state vector in canonical A1 A2 | B1 B2 order.
PureState two_pair_state(const BellIndex& p1, const BellIndex& p2) {
    return tensor_canonical(gen_bell(p1.d, p1.n, p1.m), gen_bell(p2.d, p2.n, p2.m));
}

// Outcome probabilities of measuring one instrument on each side.
std::vector<std::vector<double>> joint_probs(const PureState& s, const Instrument& alice,
                                             const Instrument& bob) {
    std::vector<std::vector<double>> out(alice.outcomes(), std::vector<double>(bob.outcomes(), 0.0));
    for (std::size_t a = 0; a < alice.outcomes(); ++a) {
        auto [amp_a, pa] = apply_one_sided(s, alice.operators[a], Side::A);
        if (pa < 1e-14) continue;
        std::vector<Cx> norm(amp_a);
        const double inv = 1.0 / std::sqrt(pa);
        for (auto& c : norm) c *= inv;
        PureState after(norm, s.dims());
        for (std::size_t b = 0; b < bob.outcomes(); ++b) {
            auto [amp_b, pb] = apply_one_sided(after, bob.operators[b], Side::B);
            out[a][b] = pa * pb;
        }
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("bxor label map: all 16 qubit transitions against the full-matrix gate") {
    const std::vector<std::size_t> dims{2, 2};
    // bilateral XOR with control = pair 1 (source), target = pair 2
    const ComplexMatrix gate = csum_add_gate(dims, 0, 1);
    for (std::size_t n1 = 0; n1 < 2; ++n1)
        for (std::size_t m1 = 0; m1 < 2; ++m1)
            for (std::size_t n2 = 0; n2 < 2; ++n2)
                for (std::size_t m2 = 0; m2 < 2; ++m2) {
                    const BellIndex src(2, n1, m1), tgt(2, n2, m2);
                    const auto [o1, o2] = bxor(src, tgt);
                    // formula check
                    CHECK(o1 == BellIndex(2, n1 ^ n2, m1));
                    CHECK(o2 == BellIndex(2, n2, m1 ^ m2));
                    // matrix oracle: both parties apply the gate
                    const auto before = two_pair_state(src, tgt);
                    const auto after = apply_local(before, gate, gate);
                    CHECK(after.overlap_abs(two_pair_state(o1, o2)) ==
                          doctest::Approx(1.0).epsilon(1e-9));
                }
    CHECK_THROWS_AS((void)bxor(BellIndex(3, 0, 0), BellIndex(3, 0, 0)), ContractError);
}

TEST_CASE("csum label map: all 81 qutrit transitions against the full-matrix gate") {
    const std::vector<std::size_t> dims{3, 3};
    // bilateral controlled-sum, control = pair 2 (target label), both parties
    // apply the same modular-difference gate
    const ComplexMatrix gate = csum_sub_gate(dims, 1, 0);
    for (std::size_t n1 = 0; n1 < 3; ++n1)
        for (std::size_t m1 = 0; m1 < 3; ++m1)
            for (std::size_t n2 = 0; n2 < 3; ++n2)
                for (std::size_t m2 = 0; m2 < 3; ++m2) {
                    const BellIndex src(3, n1, m1), tgt(3, n2, m2);
                    const auto [o1, o2] = csum_d(src, tgt);
                    CHECK(o1 == BellIndex(3, n1, (m1 + 3 - m2) % 3));
                    CHECK(o2 == BellIndex(3, (n1 + n2) % 3, m2));
                    const auto before = two_pair_state(src, tgt);
                    const auto after = apply_local(before, gate, gate);
                    CHECK(after.overlap_abs(two_pair_state(o1, o2)) ==
                          doctest::Approx(1.0).epsilon(1e-9));
                }
    // qubit csum coincides with bxor up to output ordering conventions
    CHECK_THROWS_AS((void)csum_d(BellIndex(2, 0, 0), BellIndex(3, 0, 0)), ContractError);
}

TEST_CASE("z_compare outcome matches the measured modular offset, d = 2 and 3") {
    for (std::size_t d : {std::size_t{2}, std::size_t{3}}) {
        const std::vector<std::size_t> dims{d};
        const Instrument za = z_instrument(dims, {0}, Side::A);
        const Instrument zb = z_instrument(dims, {0}, Side::B);
        for (std::size_t n = 0; n < d; ++n)
            for (std::size_t m = 0; m < d; ++m) {
                const BellIndex idx(d, n, m);
                const std::size_t announced = z_compare(idx);
                CHECK(announced == m);
                const auto probs = joint_probs(gen_bell(d, n, m), za, zb);
                for (std::size_t a = 0; a < d; ++a)
                    for (std::size_t b = 0; b < d; ++b) {
                        if (probs[a][b] < 1e-12) continue;
                        CHECK((b + d - a) % d == announced);  // Bob - Alice mod d
                    }
            }
    }
}

TEST_CASE("x_compare outcome matches the Fourier-basis measurement, d = 2 and 3") {
    for (std::size_t d : {std::size_t{2}, std::size_t{3}}) {
        const std::vector<std::size_t> dims{d};
        const Instrument fa = fourier_instrument(dims, 0, Side::A);
        const Instrument fb = fourier_instrument(dims, 0, Side::B);
        for (std::size_t n = 0; n < d; ++n)
            for (std::size_t m = 0; m < d; ++m) {
                const BellIndex idx(d, n, m);
                const std::size_t announced = x_compare(idx);
                CHECK(announced == n);
                const auto probs = joint_probs(gen_bell(d, n, m), fa, fb);
                for (std::size_t a = 0; a < d; ++a)
                    for (std::size_t b = 0; b < d; ++b) {
                        if (probs[a][b] < 1e-12) continue;
                        CHECK((a + b) % d == announced);  // Alice + Bob mod d
                    }
            }
    }
}

TEST_CASE("PauliString parse and symplectic form") {
    const auto p = PauliString::parse("XZZXI");
    CHECK(p.length() == 5);
    CHECK(p.x == std::vector<std::size_t>{1, 0, 0, 1, 0});
    CHECK(p.z == std::vector<std::size_t>{0, 1, 1, 0, 0});
    // Y = ZX carries both exponents
    const auto y = PauliString::parse("Y");
    CHECK(y.x == std::vector<std::size_t>{1});
    CHECK(y.z == std::vector<std::size_t>{1});
    CHECK_THROWS_AS((void)PauliString::parse("XQ"), ContractError);

    // anticommuting single-site pairs have symplectic 1
    CHECK(symplectic(PauliString::parse("XI"), PauliString::parse("ZI")) == 1);
    CHECK(symplectic(PauliString::parse("XI"), PauliString::parse("IZ")) == 0);
    CHECK(symplectic(PauliString::parse("Y"), PauliString::parse("X")) == 1);
    CHECK(symplectic(PauliString::parse("Y"), PauliString::parse("Z")) == 1);
    CHECK(symplectic(PauliString::parse("XX"), PauliString::parse("ZZ")) == 0);
    CHECK(symplectic(PauliString::parse("XZZXI"), PauliString::parse("IXZZX")) == 0);
}

TEST_CASE("pauli_shift label arithmetic matches applying the Pauli on Bob's side") {
    // single-qubit matrices
    const ComplexMatrix X(2, 2, {Cx(0, 0), Cx(1, 0), Cx(1, 0), Cx(0, 0)});
    const ComplexMatrix Z(2, 2, {Cx(1, 0), Cx(0, 0), Cx(0, 0), Cx(-1, 0)});
    const ComplexMatrix id2 = ComplexMatrix::identity(2);
    const ComplexMatrix Y = matmul(Z, X);  // convention Y = ZX up to phase
    struct Case {
        const char* text;
        const ComplexMatrix* op;
    };
    for (const Case& c : {Case{"X", &X}, Case{"Z", &Z}, Case{"Y", &Y}, Case{"I", &id2}}) {
        const auto e = PauliString::parse(c.text);
        for (std::size_t n = 0; n < 2; ++n)
            for (std::size_t m = 0; m < 2; ++m) {
                BellString s({BellIndex(2, n, m)});
                const auto shifted = pauli_shift(e, s).pairs[0];
                // X adds to m, Z adds to n
                CHECK(shifted == BellIndex(2, (n + e.z[0]) % 2, (m + e.x[0]) % 2));
                const auto after = apply_local(gen_bell(2, n, m), id2, *c.op);
                CHECK(after.overlap_abs(gen_bell(2, shifted.n, shifted.m)) ==
                      doctest::Approx(1.0).epsilon(1e-9));
            }
    }
    // multi-site: shift acts sitewise
    BellString s({BellIndex(2, 0, 0), BellIndex(2, 1, 1)});
    const auto shifted = pauli_shift(PauliString::parse("XZ"), s);
    CHECK(shifted.pairs[0] == BellIndex(2, 0, 1));
    CHECK(shifted.pairs[1] == BellIndex(2, 0, 1));
}

TEST_CASE("bitflip3 code: syndromes, lookup, bilateral comparison") {
    const auto code = StabilizerCode::bitflip3();
    CHECK(code.n() == 3);
    CHECK(code.m() == 1);
    REQUIRE(code.correctable().size() == 4);

    std::set<std::vector<std::size_t>> seen;
    for (const auto& e : code.correctable()) {
        const auto syn = code.syndrome_of(e);
        CHECK(seen.insert(syn).second);  // distinct
        CHECK(code.lookup(syn) == e);
        // bilateral syndrome of the shifted all-(0,0) string reproduces it
        BellString fresh(std::vector<BellIndex>(3, BellIndex(2, 0, 0)));
        CHECK(bilateral_syndrome(code, pauli_shift(e, fresh)) == syn);
    }
    // hand values: X on qubit 0 flips generator ZZI only
    CHECK(code.syndrome_of(PauliString::parse("XII")) == std::vector<std::size_t>{1, 0});
    CHECK(code.syndrome_of(PauliString::parse("IXI")) == std::vector<std::size_t>{1, 1});
    CHECK(code.syndrome_of(PauliString::parse("IIX")) == std::vector<std::size_t>{0, 1});
    CHECK_THROWS_AS((void)code.lookup({7, 7}), ContractError);
}

TEST_CASE("five-qubit code: 16 distinct syndromes covering I plus all single Paulis") {
    const auto code = StabilizerCode::five_qubit();
    CHECK(code.n() == 5);
    CHECK(code.m() == 1);
    REQUIRE(code.correctable().size() == 16);
    std::set<std::vector<std::size_t>> seen;
    for (const auto& e : code.correctable()) {
        const auto syn = code.syndrome_of(e);
        CHECK(syn.size() == 4);
        CHECK(seen.insert(syn).second);
        CHECK(code.lookup(syn) == e);
        BellString fresh(std::vector<BellIndex>(5, BellIndex(2, 0, 0)));
        CHECK(bilateral_syndrome(code, pauli_shift(e, fresh)) == syn);
    }
    CHECK(seen.size() == 16);
}

TEST_CASE("StabilizerCode::load parses the shipped generator files") {
    const auto bitflip = StabilizerCode::load(read_file("data/codes/bitflip3.txt"));
    CHECK(bitflip.n() == 3);
    CHECK(bitflip.m() == 1);
    CHECK(bitflip.correctable().size() == 4);

    const auto five = StabilizerCode::load(read_file("data/codes/five_qubit.txt"));
    CHECK(five.n() == 5);
    CHECK(five.correctable().size() == 16);
    // same generator set as the builtin
    CHECK(five.generators() == StabilizerCode::five_qubit().generators());
}

TEST_CASE("StabilizerCode constructor contracts") {
    const auto g1 = PauliString::parse("ZZI");
    const auto g2 = PauliString::parse("IZZ");
    const auto id3 = PauliString::identity(2, 3);
    // non-commuting generators
    CHECK_THROWS_AS(StabilizerCode(2, {PauliString::parse("XI"), PauliString::parse("ZI")}, {}),
                    ContractError);
    // generator length mismatch
    CHECK_THROWS_AS(StabilizerCode(3, {PauliString::parse("ZZ")}, {id3}), ContractError);
    // too many generators
    CHECK_THROWS_AS(StabilizerCode(1, {PauliString::parse("Z"), PauliString::parse("Z")},
                                   {PauliString::identity(2, 1)}),
                    ContractError);
    // empty correctable set
    CHECK_THROWS_AS(StabilizerCode(3, {g1, g2}, {}), ContractError);
    // syndrome collision (two errors with identical syndromes)
    CHECK_THROWS_AS(StabilizerCode(3, {g1, g2},
                                   {id3, PauliString::parse("XII"), PauliString::parse("XZI")}),
                    ContractError);
}

TEST_CASE("recurrence_map: exact posteriors") {
    // deterministic perfect source stays perfect, never fails
    const auto [p_perfect, s_perfect] = recurrence_map({1.0, 0.0, 0.0, 0.0});
    CHECK(s_perfect == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p_perfect[0] == doctest::Approx(1.0).epsilon(1e-15));

    // independently enumerated oracle for p = (0.7, 0.1, 0.1, 0.1):
    // success = 0.68, posterior = (25, 7, 1, 1)/34
    const auto [p_next, success] = recurrence_map({0.7, 0.1, 0.1, 0.1});
    CHECK(success == doctest::Approx(0.68).epsilon(1e-12));
    CHECK(p_next[0] == doctest::Approx(25.0 / 34.0).epsilon(1e-12));
    CHECK(p_next[1] == doctest::Approx(7.0 / 34.0).epsilon(1e-12));
    CHECK(p_next[2] == doctest::Approx(1.0 / 34.0).epsilon(1e-12));
    CHECK(p_next[3] == doctest::Approx(1.0 / 34.0).epsilon(1e-12));
    CHECK(p_next[0] > 0.7);  // the round purifies

    // uniform input is a fixed point with success 1/2
    const auto [p_unif, s_unif] = recurrence_map({0.25, 0.25, 0.25, 0.25});
    CHECK(s_unif == doctest::Approx(0.5).epsilon(1e-12));
    for (double v : p_unif) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));

    CHECK_THROWS_AS((void)recurrence_map({0.5, 0.5}), ContractError);
}

TEST_CASE("bell label <-> index mapping roundtrip") {
    for (int label = 1; label <= 4; ++label)
        CHECK(bell_index_label(bell_label_index(label)) == label);
    CHECK(bell_label_index(1) == BellIndex(2, 0, 0));
    CHECK(bell_label_index(2) == BellIndex(2, 1, 0));
    CHECK(bell_label_index(3) == BellIndex(2, 0, 1));
    CHECK(bell_label_index(4) == BellIndex(2, 1, 1));
    CHECK_THROWS_AS((void)bell_label_index(0), ContractError);
    CHECK_THROWS_AS((void)bell_index_label(BellIndex(3, 0, 0)), ContractError);
}
