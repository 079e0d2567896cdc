#include "stbclab/equivchan.hpp"
#include "stbclab/rng.hpp"

#include <cmath>

namespace stbclab {

EquivalentChannel build_equivalent_channel(const LinearDispersionCode& code,
                                           const CMatrix& H) {
    const int n_r = static_cast<int>(H.rows());
    const int n_t = code.n_t();
    const int t = code.t();
    const int n = code.n();
    if (static_cast<int>(H.cols()) != n_t || n_r < 1)
        throw Error("build_equivalent_channel: H must be n_r x n_t");

    EquivalentChannel E;
    E.code_label = code.label();
    E.n_r = n_r;
    E.n_t = n_t;
    E.t = t;
    E.h = CVector(n_r * n_t);
    for (int r = 0; r < n_r; ++r)
        for (int j = 0; j < n_t; ++j)
            E.h(r * n_t + j) = H(r, j);

    const double gain = code.channel_gain();
    E.G = CMatrix::Zero(n_r * t, n);

    if (code.direct_only()) {
        for (int r = 0; r < n_r; ++r)
            E.G.block(r * t, 0, t, n) = gain * code.generator()(H.row(r).transpose());
        return E;
    }

    const auto& A = code.A();
    const auto& B = code.B();
    const auto& slots = code.slot_types();
    for (int r = 0; r < n_r; ++r) {
        for (int tau = 0; tau < t; ++tau) {
            const int row = r * t + tau;
            switch (slots[static_cast<size_t>(tau)]) {
            case SlotType::Plain:
                for (int i = 0; i < n; ++i) {
                    Complex acc = 0.0;
                    for (int j = 0; j < n_t; ++j)
                        acc += H(r, j) * A[static_cast<size_t>(i)](j, tau);
                    E.G(row, i) = gain * acc;
                }
                break;
            case SlotType::Conjugate:
                for (int i = 0; i < n; ++i) {
                    Complex acc = 0.0;
                    for (int j = 0; j < n_t; ++j)
                        acc += std::conj(H(r, j)) * std::conj(B[static_cast<size_t>(i)](j, tau));
                    E.G(row, i) = gain * acc;
                }
                break;
            case SlotType::Mixed:
                throw InvalidColumnType("code " + code.label() + ": time slot " +
                                        std::to_string(tau) +
                                        " mixes plain and conjugated symbols");
            }
        }
    }
    return E;
}

CVector receive_transform(const LinearDispersionCode& code, const CMatrix& Y) {
    if (code.direct_only())
        throw DirectOnlyCode("receive_transform: code " + code.label() +
                             " has no per-slot conjugation layout");
    const int n_r = static_cast<int>(Y.rows());
    const int t = code.t();
    if (static_cast<int>(Y.cols()) != t)
        throw Error("receive_transform: Y must be n_r x t");
    const auto& slots = code.slot_types();
    CVector y(n_r * t);
    for (int r = 0; r < n_r; ++r) {
        for (int tau = 0; tau < t; ++tau) {
            switch (slots[static_cast<size_t>(tau)]) {
            case SlotType::Plain:
                y(r * t + tau) = Y(r, tau);
                break;
            case SlotType::Conjugate:
                y(r * t + tau) = std::conj(Y(r, tau));
                break;
            case SlotType::Mixed:
                throw InvalidColumnType("code " + code.label() + ": time slot " +
                                        std::to_string(tau) +
                                        " mixes plain and conjugated symbols");
            }
        }
    }
    return y;
}

std::pair<CMatrix, CMatrix> group_columns(const CMatrix& G,
                                          const GroupingScheme& scheme, int k) {
    if (k < 0 || k >= scheme.num_groups())
        throw Error("group_columns: group index out of range");
    const auto& mine = scheme.groups[static_cast<size_t>(k)];
    CMatrix Gk(G.rows(), static_cast<Eigen::Index>(mine.size()));
    for (size_t i = 0; i < mine.size(); ++i)
        Gk.col(static_cast<Eigen::Index>(i)) = G.col(mine[i]);
    Eigen::Index rest = G.cols() - Gk.cols();
    CMatrix Gc(G.rows(), rest);
    Eigen::Index c = 0;
    for (int g = 0; g < scheme.num_groups(); ++g) {
        if (g == k)
            continue;
        for (int idx : scheme.groups[static_cast<size_t>(g)])
            Gc.col(c++) = G.col(idx);
    }
    return {std::move(Gk), std::move(Gc)};
}

std::pair<CMatrix, CMatrix> group_columns(const EquivalentChannel& E,
                                          const GroupingScheme& scheme, int k) {
    return group_columns(E.G, scheme, k);
}

double verify_norm_identity(const LinearDispersionCode& code, long trials,
                            int n_r, uint64_t seed) {
    if (code.direct_only())
        throw DirectOnlyCode("verify_norm_identity: code " + code.label());
    TrialRng rng(seed, 0x7E57, 0);
    const double root_nt = std::sqrt(double(code.n_t()));
    double worst = 0.0;
    for (long tr = 0; tr < trials; ++tr) {
        CMatrix H = rng.cgauss_matrix(n_r, code.n_t());
        CVector x1 = rng.cgauss_vector(code.n());
        CVector x2 = rng.cgauss_vector(code.n());
        CMatrix dX = code.encode(x1) - code.encode(x2);
        EquivalentChannel E = build_equivalent_channel(code, H);
        double lhs = (H * dX).norm() / root_nt;
        double rhs = (E.G * (x1 - x2)).norm();
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

} // namespace stbclab
