#include "locc/bell_calculus.hpp"

#include <map>
#include <sstream>

#include "locc/errors.hpp"
#include "locc/states.hpp"

namespace locc {

BellIndex::BellIndex(std::size_t d_, std::size_t n_, std::size_t m_) : d(d_), n(n_), m(m_) {
    if (d < 2) throw ContractError("BellIndex: d must be >= 2");
    if (n >= d || m >= d) throw ContractError("BellIndex: residues must be < d");
}

BellString::BellString(std::vector<BellIndex> p) : pairs(std::move(p)) {
    if (pairs.empty()) throw ContractError("BellString: empty");
    for (const auto& pair : pairs) {
        if (pair.d != pairs.front().d) throw ContractError("BellString: non-uniform d");
    }
}

std::pair<BellIndex, BellIndex> bxor(const BellIndex& source, const BellIndex& target) {
    if (source.d != 2 || target.d != 2) throw ContractError("bxor: qubit pairs only");
    return {BellIndex(2, source.n ^ target.n, source.m),
            BellIndex(2, target.n, source.m ^ target.m)};
}

std::pair<BellIndex, BellIndex> csum_d(const BellIndex& source, const BellIndex& target) {
    if (source.d != target.d) throw ContractError("csum_d: dimension mismatch");
    const std::size_t d = source.d;
    return {BellIndex(d, source.n, (source.m + d - target.m) % d),
            BellIndex(d, (source.n + target.n) % d, target.m)};
}

std::size_t z_compare(const BellIndex& pair) { return pair.m; }

std::size_t x_compare(const BellIndex& pair) { return pair.n; }

PauliString::PauliString(std::size_t d_, std::vector<std::size_t> z_, std::vector<std::size_t> x_)
    : d(d_), z(std::move(z_)), x(std::move(x_)) {
    if (d < 2) throw ContractError("PauliString: d must be >= 2");
    if (z.size() != x.size() || z.empty()) throw ContractError("PauliString: z/x length mismatch");
    for (std::size_t i = 0; i < z.size(); ++i) {
        z[i] %= d;
        x[i] %= d;
    }
}

PauliString PauliString::identity(std::size_t d, std::size_t length) {
    return PauliString(d, std::vector<std::size_t>(length, 0), std::vector<std::size_t>(length, 0));
}

PauliString PauliString::parse(const std::string& text) {
    std::vector<std::size_t> z, x;
    for (char c : text) {
        switch (c) {
            case 'I': z.push_back(0); x.push_back(0); break;
            case 'X': z.push_back(0); x.push_back(1); break;
            case 'Z': z.push_back(1); x.push_back(0); break;
            case 'Y': z.push_back(1); x.push_back(1); break;
            case ' ': case '\t': break;
            default: throw ContractError(std::string("PauliString: bad symbol '") + c + "'");
        }
    }
    if (z.empty()) throw ContractError("PauliString: empty text");
    return PauliString(2, std::move(z), std::move(x));
}

std::size_t symplectic(const PauliString& p, const PauliString& q) {
    if (p.d != q.d || p.length() != q.length()) throw ContractError("symplectic: shape mismatch");
    const std::size_t d = p.d;
    std::size_t acc = 0;
    for (std::size_t j = 0; j < p.length(); ++j) {
        acc = (acc + p.z[j] * q.x[j] % d + d - (p.x[j] * q.z[j] % d)) % d;
    }
    return acc;
}

BellString pauli_shift(const PauliString& e, const BellString& s) {
    if (e.d != s.d() || e.length() != s.size()) throw ContractError("pauli_shift: shape mismatch");
    std::vector<BellIndex> out = s.pairs;
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j].n = (out[j].n + e.z[j]) % e.d;
        out[j].m = (out[j].m + e.x[j]) % e.d;
    }
    return BellString(std::move(out));
}

StabilizerCode::StabilizerCode(std::size_t n, std::vector<PauliString> generators,
                               std::vector<PauliString> correctable)
    : n_(n), generators_(std::move(generators)), correctable_(std::move(correctable)) {
    if (generators_.size() > n_) throw ContractError("StabilizerCode: too many generators");
    for (const auto& g : generators_) {
        if (g.length() != n_) throw ContractError("StabilizerCode: generator length != n");
    }
    for (std::size_t i = 0; i < generators_.size(); ++i) {
        for (std::size_t j = i + 1; j < generators_.size(); ++j) {
            if (symplectic(generators_[i], generators_[j]) != 0) {
                throw ContractError("StabilizerCode: generators do not commute");
            }
        }
    }
    if (correctable_.empty()) throw ContractError("StabilizerCode: empty correctable set");
    std::map<std::vector<std::size_t>, std::size_t> seen;
    for (std::size_t i = 0; i < correctable_.size(); ++i) {
        if (correctable_[i].length() != n_) {
            throw ContractError("StabilizerCode: correctable error length != n");
        }
        auto syn = syndrome_of(correctable_[i]);
        if (!seen.emplace(syn, i).second) {
            throw ContractError("StabilizerCode: syndrome collision in correctable set");
        }
        syndromes_.push_back(std::move(syn));
    }
    // identity error must be correctable with syndrome 0
    const auto id_syn = syndrome_of(PauliString::identity(generators_.empty() ? 2 : generators_[0].d, n_));
    if (seen.find(id_syn) == seen.end()) {
        throw ContractError("StabilizerCode: identity error not in correctable set");
    }
}

std::vector<std::size_t> StabilizerCode::syndrome_of(const PauliString& error) const {
    std::vector<std::size_t> syn;
    syn.reserve(generators_.size());
    for (const auto& g : generators_) syn.push_back(symplectic(g, error));
    return syn;
}

const PauliString& StabilizerCode::lookup(const std::vector<std::size_t>& syndrome) const {
    for (std::size_t i = 0; i < correctable_.size(); ++i) {
        if (syndromes_[i] == syndrome) return correctable_[i];
    }
    throw ContractError("StabilizerCode: syndrome not in table");
}

StabilizerCode StabilizerCode::bitflip3() {
    std::vector<PauliString> gens = {PauliString::parse("ZZI"), PauliString::parse("IZZ")};
    std::vector<PauliString> errs = {PauliString::parse("III"), PauliString::parse("XII"),
                                     PauliString::parse("IXI"), PauliString::parse("IIX")};
    return StabilizerCode(3, std::move(gens), std::move(errs));
}

StabilizerCode StabilizerCode::five_qubit() {
    std::vector<PauliString> gens = {PauliString::parse("XZZXI"), PauliString::parse("IXZZX"),
                                     PauliString::parse("XIXZZ"), PauliString::parse("ZXIXZ")};
    std::vector<PauliString> errs = {PauliString::identity(2, 5)};
    const char symbols[3] = {'X', 'Y', 'Z'};
    for (std::size_t site = 0; site < 5; ++site) {
        for (char s : symbols) {
            std::string text(5, 'I');
            text[site] = s;
            errs.push_back(PauliString::parse(text));
        }
    }
    return StabilizerCode(5, std::move(gens), std::move(errs));
}

StabilizerCode StabilizerCode::load(const std::string& text) {
    std::vector<PauliString> gens;
    std::istringstream in(text);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        // strip comments and whitespace-only lines
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string cleaned;
        for (char c : line) {
            if (c != ' ' && c != '\t' && c != '\r') cleaned += c;
        }
        if (cleaned.empty()) continue;
        gens.push_back(PauliString::parse(cleaned));
        n = gens.back().length();
    }
    if (gens.empty()) throw ContractError("StabilizerCode::load: no generators");

    // correctable set: identity plus all single-site errors with distinct,
    // nonzero pairwise-different syndromes
    std::vector<PauliString> errs = {PauliString::identity(2, n)};
    std::map<std::vector<std::size_t>, bool> seen;
    {
        std::vector<std::size_t> zero(gens.size(), 0);
        seen[zero] = true;
    }
    const char symbols[3] = {'X', 'Y', 'Z'};
    for (std::size_t site = 0; site < n; ++site) {
        for (char s : symbols) {
            std::string text(n, 'I');
            text[site] = s;
            PauliString e = PauliString::parse(text);
            std::vector<std::size_t> syn;
            for (const auto& g : gens) syn.push_back(symplectic(g, e));
            if (seen.emplace(syn, true).second) errs.push_back(std::move(e));
        }
    }
    return StabilizerCode(n, std::move(gens), std::move(errs));
}

std::vector<std::size_t> bilateral_syndrome(const StabilizerCode& code, const BellString& s) {
    if (code.n() != s.size()) throw ContractError("bilateral_syndrome: length mismatch");
    // effective error: Z^n X^m per site reproduces s from the all-(0,0) string
    std::vector<std::size_t> z, x;
    for (const auto& pair : s.pairs) {
        z.push_back(pair.n);
        x.push_back(pair.m);
    }
    PauliString effective(s.d(), std::move(z), std::move(x));
    return code.syndrome_of(effective);
}

BellIndex bell_label_index(int label) {
    switch (label) {
        case 1: return BellIndex(2, 0, 0);
        case 2: return BellIndex(2, 1, 0);
        case 3: return BellIndex(2, 0, 1);
        case 4: return BellIndex(2, 1, 1);
        default: throw ContractError("bell_label_index: label must be 1..4");
    }
}

int bell_index_label(const BellIndex& idx) {
    if (idx.d != 2) throw ContractError("bell_index_label: qubit index required");
    if (idx.m == 0) return idx.n == 0 ? 1 : 2;
    return idx.n == 0 ? 3 : 4;
}

std::pair<std::vector<double>, double> recurrence_map(const std::vector<double>& p) {
    if (p.size() != 4) throw ContractError("recurrence_map: need a 4-vector");
    check_distribution(p);
    std::vector<double> post(4, 0.0);
    double success = 0.0;
    for (int i = 1; i <= 4; ++i) {
        for (int j = 1; j <= 4; ++j) {
            const double w =
                p[static_cast<std::size_t>(i - 1)] * p[static_cast<std::size_t>(j - 1)];
            if (w == 0.0) continue;
            auto [pair1, pair2] = bxor(bell_label_index(i), bell_label_index(j));
            if (z_compare(pair2) != 0) continue;  // post-select on agreeing outcomes
            success += w;
            post[static_cast<std::size_t>(bell_index_label(pair1) - 1)] += w;
        }
    }
    if (success > 0.0) {
        for (auto& v : post) v /= success;
    }
    return {post, success};
}

}  // namespace locc
