#include <doctest.h>

#include <stbclab/decoders.hpp>
#include <stbclab/numerics.hpp>
#include <stbclab/rng.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

using namespace stbclab;

namespace {

struct Scenario {
    EquivalentChannel E;
    CVector y;
    std::vector<int> sym;
};

// one random noisy trial at the given SNR
Scenario make_trial(const LinearDispersionCode& code, const Constellation& A,
                    int n_r, double snr, uint64_t seed) {
    TrialRng rng(seed, 0x7212, 0);
    Scenario sc;
    CMatrix H = rng.cgauss_matrix(n_r, code.n_t());
    sc.E = build_equivalent_channel(code, H);
    CVector x(code.n());
    sc.sym.resize(size_t(code.n()));
    for (int i = 0; i < code.n(); ++i) {
        sc.sym[size_t(i)] = rng.next_index(A.size());
        x(i) = A.point(sc.sym[size_t(i)]);
    }
    sc.y = std::sqrt(snr) * (sc.E.G * x) + rng.cgauss_vector(sc.E.m());
    return sc;
}

// naive reference enumeration, recursion instead of the odometer
void brute_recurse(const CMatrix& G, const CVector& y, const Constellation& A,
                   double rs, CVector& x, int pos, std::vector<int>& cur,
                   std::vector<int>& best, double& best_metric) {
    if (pos == G.cols()) {
        double m = (y - rs * (G * x)).squaredNorm();
        if (m < best_metric) {
            best_metric = m;
            best = cur;
        }
        return;
    }
    for (int a = 0; a < A.size(); ++a) {
        cur[size_t(pos)] = a;
        x(pos) = A.point(a);
        brute_recurse(G, y, A, rs, x, pos + 1, cur, best, best_metric);
    }
}

std::vector<int> brute_force_ml(const EquivalentChannel& E, const CVector& y,
                                const Constellation& A, double snr) {
    CVector x(E.n());
    std::vector<int> cur(size_t(E.n()), 0), best(size_t(E.n()), 0);
    double bm = std::numeric_limits<double>::infinity();
    brute_recurse(E.G, y, A, std::sqrt(snr), x, 0, cur, best, bm);
    return best;
}

} // namespace

TEST_SUITE_BEGIN("decoders");

TEST_CASE("noiseless recovery for the whole family") {
    auto A = make_qam(4);
    auto code = make_code_2x3();
    const double snr = 25.0;
    TrialRng rng(1, 0, 0);
    for (int t = 0; t < 20; ++t) {
        CMatrix H = rng.cgauss_matrix(2, 2); // n_r = 2 so ZF/MMSE apply
        auto E = build_equivalent_channel(code, H);
        std::vector<int> sym(4);
        CVector x(4);
        for (int i = 0; i < 4; ++i) {
            sym[size_t(i)] = rng.next_index(4);
            x(i) = A.point(sym[size_t(i)]);
        }
        CVector y = std::sqrt(snr) * (E.G * x);
        for (const char* name : {"ml", "zf", "mmse", "pic", "pic-sic", "ao", "ao-sic"}) {
            auto res = decode(name, E, y, code.default_grouping(), A, snr);
            CHECK(res.symbol_indices == sym);
        }
    }
}

TEST_CASE("ml matches an independent brute-force enumeration") {
    auto A = make_qam(4);
    auto code = make_qostbc_rot();
    for (uint64_t t = 0; t < 100; ++t) {
        auto sc = make_trial(code, A, 1, 8.0, t);
        auto res = ml_decode(sc.E, sc.y, A, 8.0);
        CHECK(res.symbol_indices == brute_force_ml(sc.E, sc.y, A, 8.0));
    }
}

TEST_CASE("ml budget guard") {
    auto sc = make_trial(make_code_2x3(), make_qam(256), 1, 10.0, 1);
    CHECK_THROWS_AS(ml_decode(sc.E, sc.y, make_qam(256), 10.0), BudgetExceeded);
    // per-group guard for group decoders
    CHECK_THROWS_AS(pic_decode(sc.E, sc.y, GroupingScheme::single_group(4),
                               make_qam(256), 10.0),
                    BudgetExceeded);
}

TEST_CASE("alamouti: ML equals symbol-wise ZF") {
    auto A = make_qam(4);
    auto code = make_alamouti();
    for (uint64_t t = 0; t < 1000; ++t) {
        auto sc = make_trial(code, A, 1, 6.0, t);
        auto ml = ml_decode(sc.E, sc.y, A, 6.0);
        auto zf = zf_decode(sc.E, sc.y, A, 6.0);
        CHECK(ml.symbol_indices == zf.symbol_indices);
    }
}

TEST_CASE("pic with a single group is exactly ml") {
    auto A = make_qam(4);
    auto code = make_code_2x3();
    auto single = GroupingScheme::single_group(4);
    for (uint64_t t = 0; t < 500; ++t) {
        auto sc = make_trial(code, A, 1, 8.0, t);
        auto ml = ml_decode(sc.E, sc.y, A, 8.0);
        auto pic = pic_decode(sc.E, sc.y, single, A, 8.0);
        CHECK(ml.symbol_indices == pic.symbol_indices);
        CHECK(ml.metric == pic.metric); // same code path, bitwise
    }
}

TEST_CASE("pic with per-symbol groups is the zf decoder") {
    auto A = make_qam(4);
    auto code = make_alamouti();
    auto per = GroupingScheme::per_symbol(2);
    for (uint64_t t = 0; t < 1000; ++t) {
        auto sc = make_trial(code, A, 1, 6.0, t);
        auto zf = zf_decode(sc.E, sc.y, A, 6.0);
        auto pic = pic_decode(sc.E, sc.y, per, A, 6.0);
        CHECK(zf.symbol_indices == pic.symbol_indices);
    }
    // and on a non-orthogonal code with enough receive dimensions
    auto c23 = make_code_2x3();
    auto per4 = GroupingScheme::per_symbol(4);
    for (uint64_t t = 0; t < 500; ++t) {
        auto sc = make_trial(c23, A, 2, 8.0, t);
        auto zf = zf_decode(sc.E, sc.y, A, 8.0);
        auto pic = pic_decode(sc.E, sc.y, per4, A, 8.0);
        CHECK(zf.symbol_indices == pic.symbol_indices);
    }
}

TEST_CASE("alamouti pic group metric equals the matched-filter statistic") {
    auto A = make_qam(4);
    auto code = make_alamouti();
    auto per = GroupingScheme::per_symbol(2);
    const double snr = 5.0;
    for (uint64_t t = 0; t < 300; ++t) {
        auto sc = make_trial(code, A, 1, snr, t);
        const Complex h0 = sc.E.h(0), h1 = sc.E.h(1);
        const double g2 = std::norm(h0) + std::norm(h1);
        // argmin over A of |h0^* y0 + h1 y1 - sqrt(snr/2) (|h0|^2+|h1|^2) a|
        int best = 0;
        double bm = std::numeric_limits<double>::infinity();
        for (int a = 0; a < A.size(); ++a) {
            Complex stat = std::conj(h0) * sc.y(0) + h1 * sc.y(1) -
                           std::sqrt(snr / 2.0) * g2 * A.point(a);
            if (std::abs(stat) < bm) {
                bm = std::abs(stat);
                best = a;
            }
        }
        auto pic = pic_decode(sc.E, sc.y, per, A, snr);
        CHECK(pic.symbol_indices[0] == best);
    }
}

TEST_CASE("ao with a single group is exactly ml") {
    auto A = make_qam(4);
    auto code = make_code_2x3();
    auto single = GroupingScheme::single_group(4);
    for (uint64_t t = 0; t < 500; ++t) {
        auto sc = make_trial(code, A, 1, 8.0, t);
        auto ml = ml_decode(sc.E, sc.y, A, 8.0);
        auto ao = ao_decode(sc.E, sc.y, single, A, 8.0);
        CHECK(ml.symbol_indices == ao.symbol_indices);
        CHECK(ml.metric == ao.metric);
    }
}

TEST_CASE("ao with per-symbol groups slices the unbiased mmse statistic") {
    auto A = make_qam(4);
    for (uint64_t t = 0; t < 400; ++t) {
        auto sc = make_trial(make_code_2x3(), A, 2, 8.0, t);
        auto ao = ao_decode(sc.E, sc.y, GroupingScheme::per_symbol(4), A, 8.0);
        auto mm = mmse_decode(sc.E, sc.y, A, 8.0);
        CHECK(ao.symbol_indices == mm.symbol_indices);
    }
    for (uint64_t t = 0; t < 300; ++t) {
        auto sc = make_trial(make_alamouti(), A, 1, 6.0, t);
        auto ao = ao_decode(sc.E, sc.y, GroupingScheme::per_symbol(2), A, 6.0);
        auto mm = mmse_decode(sc.E, sc.y, A, 6.0);
        CHECK(ao.symbol_indices == mm.symbol_indices);
    }
}

TEST_CASE("orthogonal groups: sic changes nothing") {
    auto A = make_qam(4);
    auto code = make_qostbc_tbh();
    const auto& scheme = code.default_grouping();
    for (uint64_t t = 0; t < 400; ++t) {
        auto sc = make_trial(code, A, 1, 8.0, t);
        auto pic = pic_decode(sc.E, sc.y, scheme, A, 8.0);
        auto sic = pic_sic_decode(sc.E, sc.y, scheme, A, 8.0);
        CHECK(pic.symbol_indices == sic.symbol_indices);
        auto ao = ao_decode(sc.E, sc.y, scheme, A, 8.0);
        auto aosic = ao_sic_decode(sc.E, sc.y, scheme, A, 8.0);
        CHECK(ao.symbol_indices == aosic.symbol_indices);
        // orthogonal groups also mean pic = ml
        auto ml = ml_decode(sc.E, sc.y, A, 8.0);
        CHECK(pic.symbol_indices == ml.symbol_indices);
    }
}

TEST_CASE("five transmitters, four receivers: pic fails, pic-sic decodes") {
    auto A = make_qam(4);
    auto code = make_uncoded(5);
    auto scheme = GroupingScheme::parse("0,1,2,3|4");
    TrialRng rng(77, 0, 0);
    CMatrix H = rng.cgauss_matrix(4, 5);
    auto E = build_equivalent_channel(code, H);
    std::vector<int> sym(5);
    CVector x(5);
    for (int i = 0; i < 5; ++i) {
        sym[size_t(i)] = rng.next_index(4);
        x(i) = A.point(sym[size_t(i)]);
    }
    const double snr = 1000.0; // near-noiseless
    CVector y = std::sqrt(snr) * (E.G * x) + 1e-6 * rng.cgauss_vector(4);
    CHECK_THROWS_AS(pic_decode(E, y, scheme, A, snr), GroupUndecodable);
    auto res = pic_sic_decode(E, y, scheme, A, snr, {0, 1});
    CHECK(res.symbol_indices == sym);
    CHECK(res.group_order == std::vector<int>{0, 1});
}

TEST_CASE("default ordering follows sigma_min with stable ties") {
    auto A = make_qam(4);
    // identity channel: both groups tie exactly, order preserved
    EquivalentChannel E;
    E.G = CMatrix::Identity(4, 4);
    E.h = CVector::Ones(4);
    auto scheme = GroupingScheme::parse("0,1|2,3");
    CHECK(default_ordering(E, scheme) == std::vector<int>{0, 1});
    CHECK(default_ordering(E, GroupingScheme::single_group(4)) ==
          std::vector<int>{0});
    // scaling one group's columns makes it decode first
    TrialRng rng(13, 0, 0);
    EquivalentChannel E2;
    E2.G = rng.cgauss_matrix(6, 4);
    E2.G.col(2) *= 10.0;
    E2.G.col(3) *= 10.0;
    CHECK(default_ordering(E2, scheme) == std::vector<int>{1, 0});
    (void)A;
}

TEST_CASE("sic rejects malformed orderings") {
    auto A = make_qam(4);
    auto sc = make_trial(make_code_2x3(), A, 1, 8.0, 3);
    auto scheme = GroupingScheme::parse("0,1|2,3");
    CHECK_THROWS_AS(pic_sic_decode(sc.E, sc.y, scheme, A, 8.0, {0}), Error);
    CHECK_THROWS_AS(pic_sic_decode(sc.E, sc.y, scheme, A, 8.0, {0, 0}), Error);
    CHECK_THROWS_AS(pic_sic_decode(sc.E, sc.y, scheme, A, 8.0, {1, 2}), Error);
}

TEST_CASE("projected interference is annihilated (within-call view)") {
    auto code = make_code_2x3();
    const auto& scheme = code.default_grouping();
    TrialRng rng(15, 0, 0);
    for (int t = 0; t < 50; ++t) {
        auto E = build_equivalent_channel(code, rng.cgauss_matrix(1, 2));
        for (int k = 0; k < scheme.num_groups(); ++k) {
            auto [Gk, Gc] = group_columns(E, scheme, k);
            CMatrix P = numerics::complement_projector(Gc);
            for (int i = 0; i < scheme.num_groups(); ++i) {
                if (i == k)
                    continue;
                auto [Gi, rest] = group_columns(E, scheme, i);
                CHECK((P * Gi).norm() < 1e-10);
            }
        }
    }
}

TEST_CASE("interference cancellation never gains power") {
    TrialRng rng(16, 0, 0);
    auto code = make_code_2x3();
    auto per = GroupingScheme::per_symbol(4);
    for (int t = 0; t < 50; ++t) {
        auto E = build_equivalent_channel(code, rng.cgauss_matrix(2, 2));
        for (int k = 0; k < 4; ++k) {
            auto [gk, Gc] = group_columns(E, per, k);
            CMatrix P = numerics::complement_projector(Gc);
            CHECK((P * gk).norm() <= gk.norm() * (1.0 + 1e-12));
        }
    }
    // orthogonal design: no loss at all
    auto al = make_alamouti();
    for (int t = 0; t < 50; ++t) {
        auto E = build_equivalent_channel(al, rng.cgauss_matrix(1, 2));
        for (int k = 0; k < 2; ++k) {
            auto [gk, Gc] = group_columns(E, GroupingScheme::per_symbol(2), k);
            CMatrix P = numerics::complement_projector(Gc);
            CHECK(std::abs((P * gk).norm() - gk.norm()) < 1e-10);
        }
    }
}

TEST_CASE("reduced unitary system decodes identically") {
    // eigendecompose the projector, drop the null rows, decode there
    auto A = make_qam(4);
    auto code = make_code_2x3();
    const auto& scheme = code.default_grouping();
    const double snr = 8.0;
    for (uint64_t t = 0; t < 200; ++t) {
        auto sc = make_trial(code, A, 1, snr, t);
        auto [Gk, Gc] = group_columns(sc.E, scheme, 0);
        CMatrix P = numerics::complement_projector(Gc);
        CMatrix M = P * Gk;
        CVector z = P * sc.y;

        Eigen::SelfAdjointEigenSolver<CMatrix> eig(P);
        Eigen::Index r = 0;
        for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
            if (eig.eigenvalues()(i) > 0.5)
                ++r;
        CMatrix Vr = eig.eigenvectors().rightCols(r); // eigenvalues ascending
        CVector z_red = Vr.adjoint() * z;
        CMatrix M_red = Vr.adjoint() * M;

        // full-rule decision
        int n_k = int(Gk.cols());
        std::vector<int> best_full(static_cast<size_t>(n_k));
        std::vector<int> best_red(static_cast<size_t>(n_k));
        double bf = std::numeric_limits<double>::infinity();
        double br = bf;
        std::vector<int> idx(static_cast<size_t>(n_k), 0);
        CVector xk(n_k);
        for (;;) {
            for (int i = 0; i < n_k; ++i)
                xk(i) = A.point(idx[size_t(i)]);
            double mf = (z - std::sqrt(snr) * (M * xk)).norm();
            double mr = (z_red - std::sqrt(snr) * (M_red * xk)).norm();
            if (mf < bf) {
                bf = mf;
                best_full = idx;
            }
            if (mr < br) {
                br = mr;
                best_red = idx;
            }
            int p = n_k - 1;
            while (p >= 0 && ++idx[size_t(p)] == A.size()) {
                idx[size_t(p)] = 0;
                --p;
            }
            if (p < 0)
                break;
        }
        CHECK(best_full == best_red);
    }
}

TEST_CASE("every interference-cancelling filter factors through the projector") {
    TrialRng rng(18, 0, 0);
    auto code = make_code_2x3();
    const auto& scheme = code.default_grouping();
    for (int t = 0; t < 100; ++t) {
        auto E = build_equivalent_channel(code, rng.cgauss_matrix(2, 2));
        auto [Gk, Gc] = group_columns(E, scheme, 0);
        CMatrix P = numerics::complement_projector(Gc);
        // random filters with rows in the left null space of Gc
        Eigen::JacobiSVD<CMatrix> svd(Gc, Eigen::ComputeFullU);
        Eigen::Index rank = 0;
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) > 1e-9 * svd.singularValues()(0))
                ++rank;
        CMatrix W = svd.matrixU().rightCols(E.m() - rank);
        CMatrix Pt = rng.cgauss_matrix(E.m(), int(E.m() - rank)) * W.adjoint();
        REQUIRE((Pt * Gc).norm() < 1e-10 * Pt.norm());
        // row-space containment: Pt P = Pt, so F = Pt works in Pt = F P
        CHECK((Pt * P - Pt).norm() / Pt.norm() < 1e-9);
    }
}

TEST_CASE("decoder dispatch by name") {
    auto A = make_qam(4);
    auto sc = make_trial(make_alamouti(), A, 1, 6.0, 9);
    CHECK_THROWS_AS(
        decode("bogus", sc.E, sc.y, GroupingScheme::per_symbol(2), A, 6.0), Error);
    CHECK(is_decoder_name("pic-sic"));
    CHECK_FALSE(is_decoder_name("sphere"));
}

TEST_SUITE_END();
