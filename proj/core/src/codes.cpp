#include "stbclab/codes.hpp"
#include "stbclab/rng.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace stbclab {

int GroupingScheme::total_symbols() const {
    int n = 0;
    for (const auto& g : groups)
        n += static_cast<int>(g.size());
    return n;
}

GroupingScheme GroupingScheme::single_group(int n) {
    GroupingScheme s;
    s.groups.emplace_back(n);
    std::iota(s.groups[0].begin(), s.groups[0].end(), 0);
    return s;
}

GroupingScheme GroupingScheme::per_symbol(int n) {
    GroupingScheme s;
    for (int i = 0; i < n; ++i)
        s.groups.push_back({i});
    return s;
}

GroupingScheme GroupingScheme::parse(const std::string& text) {
    GroupingScheme s;
    std::stringstream groups_in(text);
    std::string group_text;
    while (std::getline(groups_in, group_text, '|')) {
        std::vector<int> group;
        std::stringstream idx_in(group_text);
        std::string tok;
        while (std::getline(idx_in, tok, ',')) {
            size_t pos = 0;
            int v;
            try {
                v = std::stoi(tok, &pos);
            } catch (const std::exception&) {
                throw Error("grouping: bad index '" + tok + "'");
            }
            while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos])))
                ++pos;
            if (pos != tok.size() || v < 0)
                throw Error("grouping: bad index '" + tok + "'");
            group.push_back(v);
        }
        if (group.empty())
            throw Error("grouping: empty group in '" + text + "'");
        s.groups.push_back(std::move(group));
    }
    if (s.groups.empty())
        throw Error("grouping: no groups in '" + text + "'");
    return s;
}

std::string GroupingScheme::to_string() const {
    std::string out;
    for (size_t k = 0; k < groups.size(); ++k) {
        if (k) out += '|';
        for (size_t i = 0; i < groups[k].size(); ++i) {
            if (i) out += ',';
            out += std::to_string(groups[k][i]);
        }
    }
    return out;
}

void GroupingScheme::validate(int n) const {
    std::set<int> seen;
    for (const auto& g : groups) {
        if (g.empty())
            throw Error("grouping: empty group");
        for (int i : g) {
            if (i < 0 || i >= n)
                throw Error("grouping: index " + std::to_string(i) + " out of range");
            if (!seen.insert(i).second)
                throw Error("grouping: index " + std::to_string(i) + " repeated");
        }
    }
    if (static_cast<int>(seen.size()) != n)
        throw Error("grouping: does not cover all " + std::to_string(n) + " symbols");
}

namespace {

std::vector<SlotType> classify_slots(const std::vector<CMatrix>& A,
                                     const std::vector<CMatrix>& B, int t) {
    std::vector<SlotType> types(static_cast<size_t>(t), SlotType::Plain);
    for (int tau = 0; tau < t; ++tau) {
        bool a_nz = false, b_nz = false;
        for (const auto& Ai : A)
            if (Ai.col(tau).squaredNorm() != 0.0) { a_nz = true; break; }
        for (const auto& Bi : B)
            if (Bi.col(tau).squaredNorm() != 0.0) { b_nz = true; break; }
        if (a_nz && b_nz)
            types[static_cast<size_t>(tau)] = SlotType::Mixed;
        else if (b_nz)
            types[static_cast<size_t>(tau)] = SlotType::Conjugate;
        else
            types[static_cast<size_t>(tau)] = SlotType::Plain;
    }
    return types;
}

} // namespace

LinearDispersionCode::LinearDispersionCode(std::string label, int n_t, int t,
                                           std::vector<CMatrix> A,
                                           std::vector<CMatrix> B,
                                           GroupingScheme default_grouping)
    : label_(std::move(label)), n_t_(n_t), t_(t),
      A_(std::move(A)), B_(std::move(B)),
      default_grouping_(std::move(default_grouping)) {
    if (n_t_ <= 0 || t_ <= 0 || A_.empty() || A_.size() != B_.size())
        throw Error("code " + label_ + ": bad dispersion-matrix description");
    n_ = static_cast<int>(A_.size());
    double raw_energy = 0.0;
    for (int i = 0; i < n_; ++i) {
        if (A_[i].rows() != n_t_ || A_[i].cols() != t_ ||
            B_[i].rows() != n_t_ || B_[i].cols() != t_)
            throw Error("code " + label_ + ": dispersion matrix has wrong shape");
        raw_energy += A_[i].squaredNorm() + B_[i].squaredNorm();
    }
    if (raw_energy <= 0.0)
        throw Error("code " + label_ + ": all dispersion matrices are zero");
    slot_types_ = classify_slots(A_, B_, t_);
    energy_scale_ = std::sqrt(double(t_) * n_t_ / raw_energy);
    channel_gain_ = energy_scale_ / std::sqrt(double(n_t_));
    default_grouping_.validate(n_);
}

LinearDispersionCode::LinearDispersionCode(std::string label, int n_t, int t, int n,
                                           DirectGenerator gen,
                                           GroupingScheme default_grouping)
    : label_(std::move(label)), n_t_(n_t), t_(t), n_(n),
      gen_(std::move(gen)), default_grouping_(std::move(default_grouping)) {
    if (n_t_ <= 0 || t_ <= 0 || n_ <= 0 || !gen_)
        throw Error("code " + label_ + ": bad direct-generator description");
    CMatrix probe = gen_(CVector::Zero(n_t_));
    if (probe.rows() != t_ || probe.cols() != n_)
        throw Error("code " + label_ + ": generator shape mismatch");
    // E_h ||G_raw(h)||_F^2 for CN(0, I) h, exact from basis evaluations:
    // entries are linear in h and h^*, so |c|^2 + |d|^2 per entry equals
    // (|c + d|^2 + |c - d|^2) / 2 evaluated at e_j and i*e_j.
    double raw_energy = 0.0;
    for (int j = 0; j < n_t_; ++j) {
        CVector e = CVector::Zero(n_t_);
        e(j) = 1.0;
        raw_energy += gen_(e).squaredNorm();
        e(j) = cplx_i;
        raw_energy += gen_(e).squaredNorm();
    }
    raw_energy *= 0.5;
    if (raw_energy <= 0.0)
        throw Error("code " + label_ + ": generator is identically zero");
    channel_gain_ = std::sqrt(double(t_) / raw_energy);
    energy_scale_ = channel_gain_ * std::sqrt(double(n_t_));
    default_grouping_.validate(n_);
}

CMatrix LinearDispersionCode::encode(const CVector& x) const {
    if (direct_only())
        throw DirectOnlyCode("encode: code " + label_ + " has no dispersion matrices");
    if (x.size() != n_)
        throw Error("encode: expected " + std::to_string(n_) + " symbols");
    CMatrix X = CMatrix::Zero(n_t_, t_);
    for (int i = 0; i < n_; ++i)
        X += x(i) * A_[static_cast<size_t>(i)] + std::conj(x(i)) * B_[static_cast<size_t>(i)];
    return energy_scale_ * X;
}

double default_theta() {
    return 0.5 * std::atan(2.0);
}

LinearDispersionCode make_alamouti() {
    std::vector<CMatrix> A(2, CMatrix::Zero(2, 2)), B(2, CMatrix::Zero(2, 2));
    A[0](0, 0) = 1.0;  B[0](1, 1) = 1.0;   // x0, x0^*
    A[1](1, 0) = 1.0;  B[1](0, 1) = -1.0;  // x1, -x1^*
    return LinearDispersionCode("alamouti", 2, 2, std::move(A), std::move(B),
                                GroupingScheme::per_symbol(2));
}

LinearDispersionCode make_qostbc_tbh() {
    // X = [x0 -x1* x2 -x3*; x1 x0* x3 x2*; x2 -x3* x0 -x1*; x3 x2* x1 x0*]
    std::vector<CMatrix> A(4, CMatrix::Zero(4, 4)), B(4, CMatrix::Zero(4, 4));
    A[0](0, 0) = 1;  A[1](1, 0) = 1;  A[2](2, 0) = 1;  A[3](3, 0) = 1;
    B[1](0, 1) = -1; B[0](1, 1) = 1;  B[3](2, 1) = -1; B[2](3, 1) = 1;
    A[2](0, 2) = 1;  A[3](1, 2) = 1;  A[0](2, 2) = 1;  A[1](3, 2) = 1;
    B[3](0, 3) = -1; B[2](1, 3) = 1;  B[1](2, 3) = -1; B[0](3, 3) = 1;
    return LinearDispersionCode("qostbc_tbh", 4, 4, std::move(A), std::move(B),
                                GroupingScheme::parse("0,2|1,3"));
}

LinearDispersionCode make_qostbc_rot(double alpha_arg) {
    const Complex a = std::polar(1.0, alpha_arg);
    const Complex ac = std::conj(a);
    std::vector<CMatrix> A(4, CMatrix::Zero(4, 4)), B(4, CMatrix::Zero(4, 4));
    A[0](0, 0) = 1;   A[1](1, 0) = 1;   A[2](2, 0) = a;   A[3](3, 0) = a;
    B[1](0, 1) = -1;  B[0](1, 1) = 1;   B[3](2, 1) = -ac; B[2](3, 1) = ac;
    A[2](0, 2) = a;   A[3](1, 2) = a;   A[0](2, 2) = 1;   A[1](3, 2) = 1;
    B[3](0, 3) = -ac; B[2](1, 3) = ac;  B[1](2, 3) = -1;  B[0](3, 3) = 1;
    return LinearDispersionCode("qostbc_rot", 4, 4, std::move(A), std::move(B),
                                GroupingScheme::parse("0,2|1,3"));
}

LinearDispersionCode make_code_2x3(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    std::vector<CMatrix> A(4, CMatrix::Zero(2, 3)), B(4, CMatrix::Zero(2, 3));
    // X = [c x0 + s x1,  c x2 + s x3,  0;
    //      0,           -s x0 + c x1, -s x2 + c x3]
    A[0](0, 0) = c;  A[0](1, 1) = -s;
    A[1](0, 0) = s;  A[1](1, 1) = c;
    A[2](0, 1) = c;  A[2](1, 2) = -s;
    A[3](0, 1) = s;  A[3](1, 2) = c;
    return LinearDispersionCode("code_2x3", 2, 3, std::move(A), std::move(B),
                                GroupingScheme::parse("0,1|2,3"));
}

LinearDispersionCode make_code_4x6(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    // Two 2x4 blocks of the per-antenna channel map; the full 6x8 block is
    // [U1 0; U2 U1; 0 U2] with U1 carrying (h0, h1) and U2 carrying (h2, h3).
    auto u1 = [c, s](Complex a, Complex b) {
        CMatrix U(2, 4);
        U << c * a, s * a, c * b, s * b,
             c * std::conj(b), s * std::conj(b), -c * std::conj(a), -s * std::conj(a);
        return U;
    };
    auto u2 = [c, s](Complex a, Complex b) {
        CMatrix U(2, 4);
        U << -s * a, c * a, -s * b, c * b,
             -s * std::conj(b), c * std::conj(b), s * std::conj(a), -c * std::conj(a);
        return U;
    };
    auto gen = [u1, u2](const CVector& h) {
        CMatrix G = CMatrix::Zero(6, 8);
        G.block(0, 0, 2, 4) = u1(h(0), h(1));
        G.block(2, 0, 2, 4) = u2(h(2), h(3));
        G.block(2, 4, 2, 4) = u1(h(0), h(1));
        G.block(4, 4, 2, 4) = u2(h(2), h(3));
        return G;
    };
    return LinearDispersionCode("code_4x6", 4, 6, 8, gen,
                                GroupingScheme::parse("0,1|2,3|4,5|6,7"));
}

LinearDispersionCode make_oac_3x8() {
    auto gen = [](const CVector& h) {
        const Complex h0 = h(0), h1 = h(1), h2 = h(2);
        const Complex h0c = std::conj(h0), h1c = std::conj(h1), h2c = std::conj(h2);
        CMatrix G = CMatrix::Zero(8, 6);
        G(0, 0) = h0c;
        G(1, 0) = h1;  G(1, 1) = h2;
        G(2, 0) = h2c; G(2, 1) = -h1c; G(2, 2) = h0c;
        G(3, 1) = h0;  G(3, 2) = h1;   G(3, 3) = h2;
        G(4, 2) = h2c; G(4, 3) = -h1c; G(4, 4) = h0c;
        G(5, 3) = h0;  G(5, 4) = h1;   G(5, 5) = h2;
        G(6, 4) = h2c; G(6, 5) = -h1c;
        G(7, 5) = h0;
        return G;
    };
    return LinearDispersionCode("oac_3x8", 3, 8, 6, gen,
                                GroupingScheme::parse("0,2,4|1,3,5"));
}

LinearDispersionCode make_uncoded(int n_t) {
    if (n_t <= 0)
        throw Error("make_uncoded: n_t must be positive");
    std::vector<CMatrix> A, B;
    for (int i = 0; i < n_t; ++i) {
        CMatrix Ai = CMatrix::Zero(n_t, 1);
        Ai(i, 0) = 1.0;
        A.push_back(std::move(Ai));
        B.push_back(CMatrix::Zero(n_t, 1));
    }
    std::string label = n_t == 1 ? "uncoded_1x1" : "uncoded_" + std::to_string(n_t);
    return LinearDispersionCode(std::move(label), n_t, 1, std::move(A), std::move(B),
                                GroupingScheme::per_symbol(n_t));
}

std::map<std::string, LinearDispersionCode> build_registry() {
    std::map<std::string, LinearDispersionCode> reg;
    auto put = [&reg](LinearDispersionCode c) { reg.emplace(c.label(), std::move(c)); };
    put(make_alamouti());
    put(make_qostbc_tbh());
    put(make_qostbc_rot());
    put(make_code_2x3());
    put(make_code_4x6());
    put(make_oac_3x8());
    put(make_uncoded(1));
    return reg;
}

LinearDispersionCode make_code(const std::string& label,
                               const std::map<std::string, double>& params) {
    std::map<std::string, double> rest = params;
    auto take = [&rest](const char* key, double fallback) {
        auto it = rest.find(key);
        if (it == rest.end())
            return fallback;
        double v = it->second;
        rest.erase(it);
        return v;
    };
    LinearDispersionCode code = [&]() {
        if (label == "alamouti") return make_alamouti();
        if (label == "qostbc_tbh") return make_qostbc_tbh();
        if (label == "qostbc_rot") return make_qostbc_rot(take("alpha", 0.7853981633974483));
        if (label == "code_2x3") return make_code_2x3(take("theta", default_theta()));
        if (label == "code_4x6") return make_code_4x6(take("theta", default_theta()));
        if (label == "oac_3x8") return make_oac_3x8();
        if (label == "uncoded_1x1" || label == "uncoded")
            return make_uncoded(static_cast<int>(take("nt", 1)));
        throw Error("unknown code label: " + label);
    }();
    if (!rest.empty())
        throw Error("code spec: unknown parameter '" + rest.begin()->first +
                    "' for " + label);
    return code;
}

std::pair<std::string, std::map<std::string, double>>
split_code_spec(const std::string& spec) {
    std::string label = spec;
    std::map<std::string, double> params;
    if (auto colon = spec.find(':'); colon != std::string::npos) {
        label = spec.substr(0, colon);
        std::stringstream in(spec.substr(colon + 1));
        std::string kv;
        while (std::getline(in, kv, ',')) {
            auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw Error("code spec: expected key=value, got '" + kv + "'");
            try {
                params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
            } catch (const std::exception&) {
                throw Error("code spec: bad value in '" + kv + "'");
            }
        }
    }
    return {label, params};
}

LinearDispersionCode parse_code_spec(const std::string& spec) {
    auto [label, params] = split_code_spec(spec);
    return make_code(label, params);
}

double verify_energy_normalization(const LinearDispersionCode& code,
                                   const std::vector<Complex>& points,
                                   long trials, uint64_t seed) {
    if (code.direct_only())
        throw DirectOnlyCode("verify_energy_normalization: " + code.label());
    if (points.empty() || trials <= 0)
        throw Error("verify_energy_normalization: empty point set or no trials");
    TrialRng rng(seed, 0xE4E7, 0);
    double acc = 0.0;
    CVector x(code.n());
    for (long tr = 0; tr < trials; ++tr) {
        for (int i = 0; i < code.n(); ++i)
            x(i) = points[static_cast<size_t>(rng.next_u64() % points.size())];
        acc += code.encode(x).squaredNorm();
    }
    return acc / static_cast<double>(trials);
}

double verify_energy_normalization(const LinearDispersionCode& code,
                                   const Constellation& A,
                                   long trials, uint64_t seed) {
    return verify_energy_normalization(code, A.points(), trials, seed);
}

} // namespace stbclab
