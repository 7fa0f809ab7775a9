#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fano/series.hpp"

using namespace fano;

namespace {

PowerSeries from_ints(std::vector<long> cs) {
    PowerSeries s(cs.size() - 1);
    for (std::size_t i = 0; i < cs.size(); ++i) s.coeff(i) = cs[i];
    return s;
}

PowerSeries random_series(std::mt19937& rng, std::size_t order,
                          bool unit_head) {
    PowerSeries s(order);
    std::uniform_int_distribution<long> num(-9, 9), den(1, 7);
    for (std::size_t i = 0; i <= order; ++i) {
        Rational q(num(rng), den(rng));
        q.canonicalize();
        s.coeff(i) = q;
    }
    if (unit_head) s.coeff(0) = 1;
    return s;
}

}  // namespace

TEST_CASE("multiply: binomial and identity") {
    PowerSeries one_plus_t = from_ints({1, 1});
    PowerSeries sq = multiply(one_plus_t, one_plus_t);
    CHECK(sq == from_ints({1, 2}));  // truncated at order 1

    PowerSeries a(3);
    a.coeff(0) = 1;
    a.coeff(1) = 1;
    PowerSeries b(3);
    b.coeff(0) = 1;
    b.coeff(1) = 1;
    CHECK(multiply(a, b) == from_ints({1, 2, 1, 0}));

    PowerSeries g = from_ints({1, 0, 7, -3});
    CHECK(multiply(g, PowerSeries::one(3)) == g);
}

TEST_CASE("multiply: commutative and associative on random series") {
    std::mt19937 rng(1234);
    for (int trial = 0; trial < 20; ++trial) {
        PowerSeries a = random_series(rng, 8, false);
        PowerSeries b = random_series(rng, 8, false);
        PowerSeries c = random_series(rng, 8, false);
        CHECK(multiply(a, b) == multiply(b, a));
        CHECK(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
    }
}

TEST_CASE("regularize: d! scaling and invertibility") {
    PowerSeries s(2);
    s.coeff(0) = 1;
    s.coeff(2) = Rational(1, 2);
    PowerSeries r = regularize(s);
    CHECK(r == from_ints({1, 0, 1}));

    // G_{P^3} = sum t^{4d}/(d!)^4 regularizes to 1 + 24t^4 + 2520t^8 + ...
    PowerSeries g(12);
    for (long d = 0; 4 * d <= 12; ++d) {
        Rational q(1);
        for (int i = 0; i < 4; ++i) q /= Rational(factorial(d));
        g.coeff(static_cast<std::size_t>(4 * d)) = q;
    }
    PowerSeries reg = regularize(g);
    CHECK(reg[4] == 24);
    CHECK(reg[8] == 2520);
    CHECK(reg[12] == 369600);

    CHECK(regularize(PowerSeries::one(5)) == PowerSeries::one(5));

    // dividing coefficient d by d! recovers the input
    std::mt19937 rng(99);
    PowerSeries a = random_series(rng, 9, false);
    PowerSeries back = regularize(a);
    Integer fact(1);
    for (std::size_t d = 0; d <= back.order(); ++d) {
        if (d > 0) fact *= static_cast<long>(d);
        back.coeff(d) /= Rational(fact);
    }
    CHECK(back == a);
}

TEST_CASE("normalize_prefactor: cubic surface and quartic threefold") {
    // sum t^d (3d)!/(d!)^4 has prefactor 6
    PowerSeries s3(8);
    for (long d = 0; d <= 8; ++d) {
        Rational q(factorial(3 * d));
        for (int i = 0; i < 4; ++i) q /= Rational(factorial(d));
        s3.coeff(static_cast<std::size_t>(d)) = q;
    }
    auto n3 = normalize_prefactor(s3);
    CHECK(n3.prefactor == 6);
    CHECK(n3.series[0] == 1);
    CHECK(n3.series[1] == 0);

    // sum t^d (4d)!/(d!)^5 has prefactor 24
    PowerSeries s4(8);
    for (long d = 0; d <= 8; ++d) {
        Rational q(factorial(4 * d));
        for (int i = 0; i < 5; ++i) q /= Rational(factorial(d));
        s4.coeff(static_cast<std::size_t>(d)) = q;
    }
    CHECK(normalize_prefactor(s4).prefactor == 24);
}

TEST_CASE("normalize_prefactor: zero linear coefficient and idempotence") {
    PowerSeries s = from_ints({1, 0, 5, 7});
    auto n = normalize_prefactor(s);
    CHECK(n.prefactor == 0);
    CHECK(n.series == s);

    std::mt19937 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        PowerSeries a = random_series(rng, 7, true);
        auto first = normalize_prefactor(a);
        auto second = normalize_prefactor(first.series);
        CHECK(second.prefactor == 0);
        CHECK(second.series == first.series);
    }
}

TEST_CASE("normalize_prefactor rejects non-unit constant term") {
    PowerSeries s = from_ints({2, 1});
    CHECK_THROWS_AS(normalize_prefactor(s), std::invalid_argument);
}
