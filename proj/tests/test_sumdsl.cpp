#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fano/sumdsl.hpp"

using namespace fano;
using namespace fano::sumdsl;

namespace {

const char* kP1 = "sum[l] { constraints: [l]; degree: 2*l; "
                  "term: 1 / fact(l)^2; prefactor: none }";

const char* kFam22 =
    "sum[l, m] { constraints: [l, m]; degree: l + m; "
    "term: fact(2*l + 4*m) / (fact(l)^2 * fact(m)^3 * fact(l + 2*m)); "
    "prefactor: auto }";

const char* kFam217 =
    "sum[l, m, n] { constraints: [l, m, n]; degree: l + m + n; term: "
    "(-1)^(l + m) * fact(l + m) * fact(l + n) * fact(m + n) * "
    "fact(l + m + n) * 1 / (fact(l)^4 * fact(m)^4 * fact(n)^4) * "
    "(1 + (-l + m) * (H(m + n) + (-4) * H(m))); prefactor: auto }";

}  // namespace

TEST_CASE("harmonic primitive: H_0 = 0, H_k - H_{k-1} = 1/k") {
    HarmonicCache h;
    CHECK(h(0) == 0);
    for (long k = 1; k <= 40; ++k) {
        Rational diff = h(k) - h(k - 1);
        CHECK(diff == Rational(1, k));
    }
}

TEST_CASE("sign squares to one on admissible tuples") {
    auto spec = parse("sum[l, m] { constraints: [l, m]; degree: l + m; "
                      "term: ((-1)^(l + 3*m))^2; prefactor: none }");
    // (-1)^L squared is constant 1: the series is the full count of tuples
    PowerSeries s = evaluate(spec, 6);
    for (std::size_t d = 0; d <= 6; ++d)
        CHECK(s[d] == Rational(static_cast<long>(d + 1)));
}

TEST_CASE("evaluate: projective line") {
    auto spec = parse(kP1);
    PowerSeries s = evaluate(spec, 8);
    CHECK(s[0] == 1);
    CHECK(s[2] == 1);
    CHECK(s[4] == Rational(1, 4));
    CHECK(s[6] == Rational(1, 36));
    CHECK(s[1] == 0);
    CHECK(s[3] == 0);
}

TEST_CASE("evaluate: double cover family 2-2 against printed expansion") {
    auto spec = parse(kFam22);
    PowerSeries reg = regularize(evaluate(spec, 4));
    CHECK(reg[0] == 1);
    CHECK(reg[1] == 0);
    CHECK(reg[2] == 470);
    CHECK(reg[3] == 21216);
    CHECK(reg[4] == 1562778);
}

TEST_CASE("evaluate: harmonic-number family 2-17 against printed expansion") {
    auto spec = parse(kFam217);
    PowerSeries reg = regularize(evaluate(spec, 4));
    CHECK(reg[2] == 10);
    CHECK(reg[3] == 42);
    CHECK(reg[4] == 414);
}

TEST_CASE("evaluation is degree-local") {
    auto spec = parse(kFam22);
    PowerSeries small = evaluate(spec, 5);
    PowerSeries big = evaluate(spec, 9);
    for (std::size_t d = 0; d <= 5; ++d) CHECK(small[d] == big[d]);
}

TEST_CASE("parse/serialize round-trips to a canonical fixed point") {
    for (const char* text : {kP1, kFam22, kFam217}) {
        SumSpec spec = parse(text);
        std::string canon = serialize(spec);
        SumSpec again = parse(canon);
        CHECK(again == spec);
        CHECK(serialize(again) == canon);
    }
}

TEST_CASE("parse errors carry positions") {
    // malformed factorial argument
    CHECK_THROWS_AS(parse("sum[l] { constraints: [l]; degree: l; "
                          "term: fact(l*l); prefactor: none }"),
                    ParseError);
    // unknown index variable
    try {
        parse("sum[l] { constraints: [l]; degree: l; term: fact(m); "
              "prefactor: none }");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.position > 0);
        CHECK(std::string(e.what()).find("unknown index") != std::string::npos);
    }
    // stray trailing input
    CHECK_THROWS_AS(parse(std::string(kP1) + " garbage"), ParseError);
}

TEST_CASE("check_bounded accepts bounded specs with certificates") {
    auto p1 = parse(kP1);
    auto rep = check_bounded(p1);
    REQUIRE(rep.bounded);
    REQUIRE(rep.certificates[0].size() == 1);
    // mu * l <= degree_coeff * B + constant on {degree <= B}
    const auto& cert = rep.certificates[0][0];
    CHECK(cert.mu >= 1);
    CHECK(cert.degree_coeff * 2 >= cert.mu);  // l <= B/2 scaled

    // 2-8: indices l, m; constraint m - 2l >= 0; degree m
    auto spec28 = parse("sum[l, m] { constraints: [l, -2*l + m]; degree: m; "
                        "term: fact(2*m) / (fact(l)^3 * fact(m) * "
                        "fact(-l + m) * fact(-2*l + m)); prefactor: auto }");
    CHECK(check_bounded(spec28).bounded);
}

TEST_CASE("check_bounded rejects an unbounded spec with a witness") {
    // two indices, degree = l, no constraint on m
    auto spec = parse("sum[l, m] { constraints: [l]; degree: l; "
                      "term: 1 / fact(l); prefactor: none }");
    auto rep = check_bounded(spec);
    REQUIRE(!rep.bounded);
    REQUIRE(rep.witness.size() == 2);
    CHECK(rep.witness[0] == 0);
    CHECK(rep.witness[1] != 0);
    CHECK_THROWS_AS(evaluate(spec, 4), UnboundedError);
}

TEST_CASE("negative factorial argument aborts") {
    auto spec = parse("sum[l] { constraints: [l]; degree: l; "
                      "term: fact(1 - l); prefactor: none }");
    CHECK_THROWS_AS(evaluate(spec, 5), EvalError);
}

TEST_CASE("multi-block specs sum blockwise") {
    auto spec = parse("sum[l] { constraints: [l]; degree: 2*l; "
                      "term: 1 / fact(l)^2; prefactor: none } + "
                      "sum[m] { constraints: [m - 1]; degree: m; "
                      "term: 1; prefactor: none }");
    PowerSeries s = evaluate(spec, 4);
    CHECK(s[0] == 1);          // only the P1 block
    CHECK(s[1] == 1);          // only the second block
    CHECK(s[2] == 2);          // 1 + 1
    CHECK(s[3] == 1);
    CHECK(s[4] == Rational(5, 4));
}
