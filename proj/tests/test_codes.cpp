#include <doctest.h>

#include <stbclab/codes.hpp>
#include <stbclab/rng.hpp>

#include <cmath>

using namespace stbclab;

TEST_SUITE_BEGIN("codes");

TEST_CASE("grouping scheme parse/validate/round-trip") {
    auto s = GroupingScheme::parse("0,2|1,3");
    REQUIRE(s.num_groups() == 2);
    CHECK(s.groups[0] == std::vector<int>{0, 2});
    CHECK(s.groups[1] == std::vector<int>{1, 3});
    CHECK(s.to_string() == "0,2|1,3");
    s.validate(4);
    CHECK_THROWS_AS(s.validate(3), Error);                      // out of range
    CHECK_THROWS_AS(GroupingScheme::parse("0,0|1").validate(2), Error); // repeat
    CHECK_THROWS_AS(GroupingScheme::parse("0|1").validate(3), Error);   // not covering
    CHECK_THROWS_AS(GroupingScheme::parse("0,x|1"), Error);
    CHECK(GroupingScheme::single_group(3).to_string() == "0,1,2");
    CHECK(GroupingScheme::per_symbol(3).to_string() == "0|1|2");
}

TEST_CASE("registry holds the expected codes") {
    auto reg = build_registry();
    REQUIRE(reg.count("alamouti"));
    REQUIRE(reg.count("qostbc_tbh"));
    REQUIRE(reg.count("qostbc_rot"));
    REQUIRE(reg.count("code_2x3"));
    REQUIRE(reg.count("code_4x6"));
    REQUIRE(reg.count("oac_3x8"));

    const auto& al = reg.at("alamouti");
    CHECK(al.n() == 2);
    CHECK(al.n_t() == 2);
    CHECK(al.t() == 2);
    CHECK(al.rate() == doctest::Approx(1.0));

    const auto& c23 = reg.at("code_2x3");
    CHECK(c23.n() == 4);
    CHECK(c23.n_t() == 2);
    CHECK(c23.t() == 3);
    CHECK(c23.rate() == doctest::Approx(4.0 / 3.0));
    CHECK(c23.default_grouping().to_string() == "0,1|2,3");

    const auto& c46 = reg.at("code_4x6");
    CHECK(c46.n() == 8);
    CHECK(c46.n_t() == 4);
    CHECK(c46.t() == 6);
    CHECK(c46.direct_only());

    const auto& oac = reg.at("oac_3x8");
    CHECK(oac.n() == 6);
    CHECK(oac.n_t() == 3);
    CHECK(oac.t() == 8);
    CHECK(oac.direct_only());
    CHECK(oac.default_grouping().to_string() == "0,2,4|1,3,5");
}

TEST_CASE("alamouti encoding matches the codeword layout") {
    auto code = make_alamouti();
    CHECK(code.energy_scale() == doctest::Approx(1.0));
    CVector x(2);
    const Complex a{0.3, -0.7}, b{-1.1, 0.4};
    x << a, b;
    CMatrix X = code.encode(x);
    CHECK(std::abs(X(0, 0) - a) < 1e-15);
    CHECK(std::abs(X(0, 1) + std::conj(b)) < 1e-15);
    CHECK(std::abs(X(1, 0) - b) < 1e-15);
    CHECK(std::abs(X(1, 1) - std::conj(a)) < 1e-15);
}

TEST_CASE("code_2x3 encoding matches the rotated-pair layout") {
    const double theta = 0.31;
    auto code = make_code_2x3(theta);
    CHECK(code.energy_scale() == doctest::Approx(std::sqrt(1.5)).epsilon(1e-14));
    CVector x = CVector::Zero(4);
    x(0) = 1.0;
    CMatrix X = code.encode(x);
    const double es = code.energy_scale();
    CHECK(std::abs(X(0, 0) - es * std::cos(theta)) < 1e-14);
    CHECK(std::abs(X(1, 1) + es * std::sin(theta)) < 1e-14);
    CHECK(std::abs(X(0, 1)) + std::abs(X(0, 2)) + std::abs(X(1, 0)) +
              std::abs(X(1, 2)) < 1e-14);
}

TEST_CASE("encoding the zero vector gives the zero matrix") {
    for (const auto& [label, code] : build_registry()) {
        if (code.direct_only())
            continue;
        CHECK(code.encode(CVector::Zero(code.n())).norm() == 0.0);
    }
}

TEST_CASE("direct-only codes refuse to encode") {
    CHECK_THROWS_AS(make_code_4x6().encode(CVector::Zero(8)), DirectOnlyCode);
    CHECK_THROWS_AS(make_oac_3x8().encode(CVector::Zero(6)), DirectOnlyCode);
}

TEST_CASE("per-slot column rule holds for every dispersion registry code") {
    for (const auto& [label, code] : build_registry()) {
        if (code.direct_only())
            continue;
        for (auto st : code.slot_types())
            CHECK(st != SlotType::Mixed);
    }
}

TEST_CASE("encode is additive when no conjugates are embedded") {
    auto code = make_code_2x3(default_theta());
    TrialRng rng(5, 0, 0);
    CVector x = rng.cgauss_vector(4), y = rng.cgauss_vector(4);
    CHECK((code.encode(x + y) - code.encode(x) - code.encode(y)).norm() < 1e-12);
    // complex scaling also commutes (B = 0)
    Complex c{0.3, 1.2};
    CHECK((code.encode(c * x) - c * code.encode(x)).norm() < 1e-12);
}

TEST_CASE("encode respects real-linear superposition in general") {
    auto code = make_qostbc_rot();
    TrialRng rng(6, 0, 0);
    CVector x = rng.cgauss_vector(4), y = rng.cgauss_vector(4);
    CHECK((code.encode(x + y) - code.encode(x) - code.encode(y)).norm() < 1e-12);
    CHECK((code.encode(2.5 * x) - 2.5 * code.encode(x)).norm() < 1e-12);
}

TEST_CASE("energy normalization estimates tr E{X^H X} = t*n_t") {
    auto A = make_qam(4);
    // orthogonal design: exact for every draw
    CHECK(verify_energy_normalization(make_alamouti(), A, 200) ==
          doctest::Approx(4.0).epsilon(1e-9));
    // rotated pairs: statistical agreement at t*n_t = 6
    double est = verify_energy_normalization(make_code_2x3(), A, 20000);
    CHECK(est == doctest::Approx(6.0).epsilon(0.03));
    double est16 = verify_energy_normalization(make_qostbc_tbh(), make_qam(16), 20000);
    CHECK(est16 == doctest::Approx(16.0).epsilon(0.03));
    // degenerate all-zero point set
    CHECK(verify_energy_normalization(make_alamouti(), std::vector<Complex>{{0, 0}},
                                      10) == 0.0);
    CHECK_THROWS_AS(verify_energy_normalization(make_oac_3x8(), A, 10), DirectOnlyCode);
}

TEST_CASE("code spec parsing") {
    auto c = parse_code_spec("code_2x3:theta=0.5536");
    CHECK(c.label() == "code_2x3");
    CHECK(c.n() == 4);
    CHECK_THROWS_AS(parse_code_spec("nosuch"), Error);
    CHECK_THROWS_AS(parse_code_spec("code_2x3:bogus=1"), Error);
    CHECK_THROWS_AS(parse_code_spec("code_2x3:theta"), Error);
    auto u5 = parse_code_spec("uncoded:nt=5");
    CHECK(u5.n_t() == 5);
    CHECK(u5.n() == 5);
    CHECK(u5.t() == 1);
}

TEST_CASE("default theta is half the arctangent of two") {
    CHECK(default_theta() == doctest::Approx(0.5 * std::atan(2.0)).epsilon(1e-15));
    CHECK(default_theta() == doctest::Approx(0.553574).epsilon(1e-5));
}

TEST_SUITE_END();
