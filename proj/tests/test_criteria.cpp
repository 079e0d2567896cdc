#include <doctest.h>

#include <stbclab/criteria.hpp>
#include <stbclab/decoders.hpp>
#include <stbclab/equivchan.hpp>
#include <stbclab/numerics.hpp>
#include <stbclab/rng.hpp>

#include <cmath>

using namespace stbclab;
using namespace stbclab::criteria;

TEST_SUITE_BEGIN("criteria");

TEST_CASE("alamouti passes the full-rank check exhaustively") {
    auto rep = check_full_rank(make_alamouti(), make_qam(4), 1000);
    CHECK(rep.passed);
    CHECK(rep.exhaustive);
    CHECK(rep.trials_used == 80); // |dA|^2 - 1 = 9^2 - 1 nonzero differences
    CHECK(rep.codeword_verdict == rep.gdomain_verdict);
    CHECK(rep.min_margin > 1e-3);
}

TEST_CASE("code_2x3 with irrational tangent passes exhaustively") {
    auto rep = check_full_rank(make_code_2x3(0.5536), make_qam(4), 20000);
    CHECK(rep.passed);
    CHECK(rep.exhaustive);
    CHECK(rep.trials_used == 6560); // 9^4 - 1
    CHECK(rep.codeword_verdict == rep.gdomain_verdict);
}

TEST_CASE("code_2x3 at theta = pi/4 fails with a re-checkable witness") {
    auto code = make_code_2x3(M_PI / 4.0);
    auto rep = check_full_rank(code, make_qam(4), 20000);
    CHECK_FALSE(rep.passed);
    CHECK_FALSE(rep.gdomain_verdict); // both verdicts agree on the failure
    REQUIRE(rep.witness.has_value());
    // the reported witness reproduces the rank collapse independently
    CMatrix dX = code.encode(rep.witness->delta_x);
    CHECK(numerics::rank_ratio(dX) <= numerics::kRankTol);
    // the difference (d, -d, 0, 0) with d = (2+2i)/sqrt(2) kills the first row
    const Complex d = Complex(2.0, 2.0) / std::sqrt(2.0);
    CVector dx(4);
    dx << d, -d, 0.0, 0.0;
    CHECK(numerics::rank_ratio(code.encode(dx)) <= numerics::kRankTol);
}

TEST_CASE("qostbc without rotation is not full rank, with rotation it is") {
    auto bad = check_full_rank(make_qostbc_tbh(), make_qam(4), 20000);
    CHECK_FALSE(bad.passed);
    REQUIRE(bad.witness.has_value());
    CHECK(numerics::rank_ratio(make_qostbc_tbh().encode(bad.witness->delta_x)) <=
          numerics::kRankTol);
    auto good = check_full_rank(make_qostbc_rot(), make_qam(4), 20000);
    CHECK(good.passed);
    CHECK(good.exhaustive);
}

TEST_CASE("sampled mode reports trials and still refutes") {
    // 9^4 = 6561 > budget forces sampling
    auto rep = check_full_rank(make_code_2x3(M_PI / 4.0), make_qam(4), 500);
    CHECK_FALSE(rep.exhaustive);
    CHECK(rep.trials_used == 500);
    CHECK_FALSE(rep.passed); // the degenerate direction is dense enough to hit
}

TEST_CASE("group independence of code_2x3 pairs") {
    TrialPlan plan;
    plan.random_trials = 1000;
    auto rep = check_group_independence(make_code_2x3(0.5536),
                                        GroupingScheme::parse("0,1|2,3"), plan);
    CHECK(rep.passed);
    CHECK(rep.min_margin > 1e-6);
}

TEST_CASE("per-symbol grouping of code_2x3 fails by dimension count") {
    TrialPlan plan;
    plan.random_trials = 50;
    auto rep = check_group_independence(make_code_2x3(0.5536),
                                        GroupingScheme::per_symbol(4), plan);
    CHECK_FALSE(rep.passed);
    REQUIRE(rep.witness.has_value());
    // re-check the witness: that column sits in the span of the others
    auto code = make_code_2x3(0.5536);
    CMatrix H(1, 2);
    H(0, 0) = rep.witness->h(0);
    H(0, 1) = rep.witness->h(1);
    auto E = build_equivalent_channel(code, H);
    auto [gk, Gc] = group_columns(E, GroupingScheme::per_symbol(4),
                                  rep.witness->group);
    CMatrix P = numerics::complement_projector_svd(Gc);
    CHECK((P * gk).norm() / gk.norm() <= plan.rho_threshold);
}

TEST_CASE("code_4x6 passes pair-grouping independence") {
    TrialPlan plan;
    plan.random_trials = 1000;
    auto rep = check_group_independence(make_code_4x6(0.5536),
                                        GroupingScheme::parse("0,1|2,3|4,5|6,7"),
                                        plan);
    CHECK(rep.passed);
    CHECK(rep.min_margin > 1e-6);
}

TEST_CASE("oac pairs-of-triples grouping is independent (orthogonal groups)") {
    TrialPlan plan;
    plan.random_trials = 500;
    auto rep = check_group_independence(make_oac_3x8(),
                                        GroupingScheme::parse("0,2,4|1,3,5"), plan);
    CHECK(rep.passed);
}

TEST_CASE("passing schemes never leave pic undecodable") {
    auto code = make_code_2x3(0.5536);
    const auto& scheme = code.default_grouping();
    TrialRng rng(21, 0, 0);
    for (int t = 0; t < 2000; ++t) {
        auto E = build_equivalent_channel(code, rng.cgauss_matrix(1, 2));
        for (int k = 0; k < scheme.num_groups(); ++k) {
            auto [Gk, Gc] = group_columns(E, scheme, k);
            CMatrix P = numerics::complement_projector(Gc);
            CHECK((P * Gk).norm() > numerics::kRankTol * Gk.norm());
        }
    }
}

TEST_CASE("shang-xia constant of the alamouti code is 1/4") {
    double c = estimate_shang_xia_constant(make_alamouti(), 1, 2000);
    CHECK(std::abs(c - 0.25) < 1e-9);
}

TEST_CASE("shang-xia scaling law") {
    TrialRng rng(22, 0, 0);
    for (const char* label : {"alamouti", "qostbc_rot", "oac_3x8"}) {
        auto code = parse_code_spec(label);
        CMatrix H = rng.cgauss_matrix(1, code.n_t());
        auto E1 = build_equivalent_channel(code, H);
        auto E2 = build_equivalent_channel(code, CMatrix(2.0 * H));
        // independent determinant route
        double d1 = (E1.G.adjoint() * E1.G).determinant().real();
        double d2 = (E2.G.adjoint() * E2.G).determinant().real();
        double expect = std::pow(2.0, 2.0 * code.n()) * d1;
        CHECK(std::abs(d2 - expect) <= 1e-10 * std::abs(expect));
    }
}

TEST_CASE("shang-xia estimator enforces its dimension precondition") {
    CHECK_THROWS_AS(estimate_shang_xia_constant(make_code_2x3(), 1, 10), Error);
    // with a second receive antenna the estimate exists
    double c = estimate_shang_xia_constant(make_code_2x3(), 2, 50);
    CHECK(c >= 0.0);
}

TEST_CASE("direct-only codes cannot run the codeword-domain check") {
    CHECK_THROWS_AS(check_full_rank(make_code_4x6(), make_qam(4), 100),
                    DirectOnlyCode);
}

TEST_SUITE_END();
