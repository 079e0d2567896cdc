#include "stbclab/decoders.hpp"
#include "stbclab/numerics.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace stbclab {

namespace {

void check_budget(Eigen::Index ncol, const Constellation& A) {
    double bits = double(ncol) * std::log2(double(A.size()));
    if (bits > double(kMaxSearchBits) + 1e-9)
        throw BudgetExceeded("exhaustive search over " + std::to_string(ncol) +
                             " symbols of a " + std::to_string(A.size()) +
                             "-point constellation exceeds the " +
                             std::to_string(kMaxSearchBits) + "-bit budget");
}

struct SearchHit {
    std::vector<int> indices;
    double metric;
};

// argmin over A^ncol of ||z - sqrt(snr) M xbar||, lexicographic enumeration,
// strict improvement only: ties resolve to the lowest index vector.
SearchHit exhaustive_search(const CVector& z, const CMatrix& M,
                            const Constellation& A, double snr) {
    const int ncol = static_cast<int>(M.cols());
    const int asz = A.size();
    const double rs = std::sqrt(snr);
    std::vector<int> idx(static_cast<size_t>(ncol), 0);
    std::vector<int> best_idx = idx;
    double best = std::numeric_limits<double>::infinity();
    CVector r(z.size());
    for (;;) {
        r = z;
        for (int i = 0; i < ncol; ++i)
            r -= (rs * A.point(idx[static_cast<size_t>(i)])) * M.col(i);
        double metric = r.norm();
        if (metric < best) {
            best = metric;
            best_idx = idx;
        }
        int p = ncol - 1;
        while (p >= 0 && ++idx[static_cast<size_t>(p)] == asz) {
            idx[static_cast<size_t>(p)] = 0;
            --p;
        }
        if (p < 0)
            break;
    }
    return {std::move(best_idx), best};
}

void scatter(const std::vector<int>& group_indices, const std::vector<int>& group,
             std::vector<int>& out) {
    for (size_t i = 0; i < group.size(); ++i)
        out[static_cast<size_t>(group[i])] = group_indices[i];
}

CVector points_of(const std::vector<int>& indices, const Constellation& A) {
    CVector x(static_cast<Eigen::Index>(indices.size()));
    for (size_t i = 0; i < indices.size(); ++i)
        x(static_cast<Eigen::Index>(i)) = A.point(indices[i]);
    return x;
}

double residual_norm(const EquivalentChannel& E, const CVector& y,
                     const std::vector<int>& indices, const Constellation& A,
                     double snr) {
    return (y - std::sqrt(snr) * (E.G * points_of(indices, A))).norm();
}

std::vector<int> checked_ordering(const std::vector<int>& ordering, int N) {
    std::vector<int> seen(static_cast<size_t>(N), 0);
    if (static_cast<int>(ordering.size()) != N)
        throw Error("ordering: expected a permutation of " + std::to_string(N) + " groups");
    for (int k : ordering) {
        if (k < 0 || k >= N || seen[static_cast<size_t>(k)]++)
            throw Error("ordering: not a permutation of group indices");
    }
    return ordering;
}

} // namespace

DecodeResult ml_decode(const EquivalentChannel& E, const CVector& y,
                       const Constellation& A, double snr) {
    check_budget(E.G.cols(), A);
    auto hit = exhaustive_search(y, E.G, A, snr);
    return {std::move(hit.indices), hit.metric, {}};
}

DecodeResult zf_decode(const EquivalentChannel& E, const CVector& y,
                       const Constellation& A, double snr) {
    if (snr <= 0.0)
        throw Error("zf_decode: snr must be positive");
    CMatrix Gp = numerics::pseudo_inverse(E.G);
    CVector xt = (Gp * y) / std::sqrt(snr);
    DecodeResult res;
    res.symbol_indices.resize(static_cast<size_t>(E.n()));
    for (int i = 0; i < E.n(); ++i)
        res.symbol_indices[static_cast<size_t>(i)] = A.slice(xt(i));
    res.metric = residual_norm(E, y, res.symbol_indices, A, snr);
    return res;
}

DecodeResult mmse_decode(const EquivalentChannel& E, const CVector& y,
                         const Constellation& A, double snr) {
    if (snr <= 0.0)
        throw Error("mmse_decode: snr must be positive");
    const int n = E.n();
    const int m = E.m();
    const double rs = std::sqrt(snr);
    DecodeResult res;
    res.symbol_indices.resize(static_cast<size_t>(n));
    CMatrix Gc(m, n - 1);
    for (int k = 0; k < n; ++k) {
        Eigen::Index c = 0;
        for (int i = 0; i < n; ++i)
            if (i != k)
                Gc.col(c++) = E.G.col(i);
        CMatrix K = CMatrix::Identity(m, m) + snr * (Gc * Gc.adjoint());
        auto ldlt = K.ldlt();
        CVector Kinv_y = ldlt.solve(y);
        CVector Kinv_g = ldlt.solve(E.G.col(k));
        Complex num = E.G.col(k).dot(Kinv_y);
        Complex den = E.G.col(k).dot(Kinv_g);
        res.symbol_indices[static_cast<size_t>(k)] = A.slice(num / (rs * den));
    }
    res.metric = residual_norm(E, y, res.symbol_indices, A, snr);
    return res;
}

DecodeResult pic_decode(const EquivalentChannel& E, const CVector& y,
                        const GroupingScheme& scheme, const Constellation& A,
                        double snr) {
    scheme.validate(E.n());
    DecodeResult res;
    res.symbol_indices.resize(static_cast<size_t>(E.n()));
    double acc = 0.0;
    for (int k = 0; k < scheme.num_groups(); ++k) {
        auto [Gk, Gc] = group_columns(E.G, scheme, k);
        check_budget(Gk.cols(), A);
        CMatrix M;
        CVector z;
        if (Gc.cols() == 0) {
            // single group: P = I exactly, PIC degrades to ML
            M = Gk;
            z = y;
        } else {
            CMatrix P = numerics::complement_projector(Gc);
            M = P * Gk;
            z = P * y;
        }
        if (M.norm() <= numerics::kRankTol * Gk.norm())
            throw GroupUndecodable("pic_decode: projected channel of group " +
                                   std::to_string(k) + " vanished", k);
        auto hit = exhaustive_search(z, M, A, snr);
        scatter(hit.indices, scheme.groups[static_cast<size_t>(k)], res.symbol_indices);
        acc += hit.metric * hit.metric;
    }
    res.metric = std::sqrt(acc);
    return res;
}

DecodeResult pic_sic_decode(const EquivalentChannel& E, const CVector& y,
                            const GroupingScheme& scheme, const Constellation& A,
                            double snr, const std::vector<int>& ordering) {
    scheme.validate(E.n());
    const int N = scheme.num_groups();
    std::vector<int> ord = ordering.empty() ? default_ordering(E, scheme)
                                            : checked_ordering(ordering, N);
    DecodeResult res;
    res.symbol_indices.resize(static_cast<size_t>(E.n()));
    res.group_order = ord;
    const double rs = std::sqrt(snr);
    CVector ycur = y;
    double acc = 0.0;
    for (int s = 0; s < N; ++s) {
        const int k = ord[static_cast<size_t>(s)];
        const auto& mine = scheme.groups[static_cast<size_t>(k)];
        CMatrix Gk(E.m(), static_cast<Eigen::Index>(mine.size()));
        for (size_t i = 0; i < mine.size(); ++i)
            Gk.col(static_cast<Eigen::Index>(i)) = E.G.col(mine[i]);
        Eigen::Index rest = 0;
        for (int s2 = s + 1; s2 < N; ++s2)
            rest += static_cast<Eigen::Index>(scheme.groups[static_cast<size_t>(ord[static_cast<size_t>(s2)])].size());
        CMatrix Gc(E.m(), rest);
        Eigen::Index c = 0;
        for (int s2 = s + 1; s2 < N; ++s2)
            for (int idx : scheme.groups[static_cast<size_t>(ord[static_cast<size_t>(s2)])])
                Gc.col(c++) = E.G.col(idx);
        check_budget(Gk.cols(), A);
        CMatrix M;
        CVector z;
        if (Gc.cols() == 0) {
            M = Gk;
            z = ycur;
        } else {
            CMatrix P = numerics::complement_projector(Gc);
            M = P * Gk;
            z = P * ycur;
        }
        if (M.norm() <= numerics::kRankTol * Gk.norm())
            throw GroupUndecodable("pic_sic_decode: projected channel of group " +
                                   std::to_string(k) + " vanished at stage " +
                                   std::to_string(s), k);
        auto hit = exhaustive_search(z, M, A, snr);
        scatter(hit.indices, mine, res.symbol_indices);
        acc += hit.metric * hit.metric;
        ycur -= rs * (Gk * points_of(hit.indices, A));
    }
    res.metric = std::sqrt(acc);
    return res;
}

DecodeResult ao_decode(const EquivalentChannel& E, const CVector& y,
                       const GroupingScheme& scheme, const Constellation& A,
                       double snr) {
    scheme.validate(E.n());
    const int m = E.m();
    DecodeResult res;
    res.symbol_indices.resize(static_cast<size_t>(E.n()));
    double acc = 0.0;
    for (int k = 0; k < scheme.num_groups(); ++k) {
        auto [Gk, Gc] = group_columns(E.G, scheme, k);
        check_budget(Gk.cols(), A);
        CMatrix M;
        CVector z;
        if (Gc.cols() == 0) {
            // K = I: whitening is the identity, AO degrades to ML
            M = Gk;
            z = y;
        } else {
            CMatrix K = CMatrix::Identity(m, m) + snr * (Gc * Gc.adjoint());
            CMatrix S = numerics::inverse_sqrt_hermitian(K);
            M = S * Gk;
            z = S * y;
        }
        auto hit = exhaustive_search(z, M, A, snr);
        scatter(hit.indices, scheme.groups[static_cast<size_t>(k)], res.symbol_indices);
        acc += hit.metric * hit.metric;
    }
    res.metric = std::sqrt(acc);
    return res;
}

DecodeResult ao_sic_decode(const EquivalentChannel& E, const CVector& y,
                           const GroupingScheme& scheme, const Constellation& A,
                           double snr, const std::vector<int>& ordering) {
    scheme.validate(E.n());
    const int N = scheme.num_groups();
    const int m = E.m();
    std::vector<int> ord = ordering.empty() ? default_ordering(E, scheme)
                                            : checked_ordering(ordering, N);
    DecodeResult res;
    res.symbol_indices.resize(static_cast<size_t>(E.n()));
    res.group_order = ord;
    const double rs = std::sqrt(snr);
    CVector ycur = y;
    double acc = 0.0;
    for (int s = 0; s < N; ++s) {
        const int k = ord[static_cast<size_t>(s)];
        const auto& mine = scheme.groups[static_cast<size_t>(k)];
        CMatrix Gk(m, static_cast<Eigen::Index>(mine.size()));
        for (size_t i = 0; i < mine.size(); ++i)
            Gk.col(static_cast<Eigen::Index>(i)) = E.G.col(mine[i]);
        check_budget(Gk.cols(), A);
        // covariance over the not-yet-decoded interferers only
        CMatrix M;
        CVector z;
        bool any_interferer = s + 1 < N;
        if (!any_interferer) {
            M = Gk;
            z = ycur;
        } else {
            CMatrix K = CMatrix::Identity(m, m);
            for (int s2 = s + 1; s2 < N; ++s2)
                for (int idx : scheme.groups[static_cast<size_t>(ord[static_cast<size_t>(s2)])])
                    K += snr * (E.G.col(idx) * E.G.col(idx).adjoint());
            CMatrix S = numerics::inverse_sqrt_hermitian(K);
            M = S * Gk;
            z = S * ycur;
        }
        auto hit = exhaustive_search(z, M, A, snr);
        scatter(hit.indices, mine, res.symbol_indices);
        acc += hit.metric * hit.metric;
        ycur -= rs * (Gk * points_of(hit.indices, A));
    }
    res.metric = std::sqrt(acc);
    return res;
}

std::vector<int> default_ordering(const EquivalentChannel& E,
                                  const GroupingScheme& scheme) {
    scheme.validate(E.n());
    const int N = scheme.num_groups();
    std::vector<double> score(static_cast<size_t>(N), 0.0);
    for (int k = 0; k < N; ++k) {
        auto [Gk, Gc] = group_columns(E.G, scheme, k);
        CMatrix M = Gc.cols() == 0 ? Gk
                                   : CMatrix(numerics::complement_projector(Gc) * Gk);
        Eigen::JacobiSVD<CMatrix> svd(M);
        score[static_cast<size_t>(k)] = svd.singularValues()(svd.singularValues().size() - 1);
    }
    std::vector<int> ord(static_cast<size_t>(N));
    std::iota(ord.begin(), ord.end(), 0);
    std::stable_sort(ord.begin(), ord.end(),
                     [&score](int a, int b) { return score[static_cast<size_t>(a)] > score[static_cast<size_t>(b)]; });
    return ord;
}

DecodeResult decode(const std::string& name, const EquivalentChannel& E,
                    const CVector& y, const GroupingScheme& scheme,
                    const Constellation& A, double snr,
                    const std::vector<int>& ordering) {
    if (name == "ml") return ml_decode(E, y, A, snr);
    if (name == "zf") return zf_decode(E, y, A, snr);
    if (name == "mmse") return mmse_decode(E, y, A, snr);
    if (name == "pic") return pic_decode(E, y, scheme, A, snr);
    if (name == "pic-sic") return pic_sic_decode(E, y, scheme, A, snr, ordering);
    if (name == "ao") return ao_decode(E, y, scheme, A, snr);
    if (name == "ao-sic") return ao_sic_decode(E, y, scheme, A, snr, ordering);
    throw Error("unknown decoder: " + name);
}

bool is_decoder_name(const std::string& name) {
    return name == "ml" || name == "zf" || name == "mmse" || name == "pic" ||
           name == "pic-sic" || name == "ao" || name == "ao-sic";
}

} // namespace stbclab
