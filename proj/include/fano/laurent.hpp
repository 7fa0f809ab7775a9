#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "fano/series.hpp"

namespace fano {
namespace laurent {

using Exponent = std::array<long, 3>;

/* Finitely supported rational-coefficient function on Z^3.
 * Zero coefficients are never stored. */
class LaurentPolynomial {
  public:
    LaurentPolynomial() = default;

    void set(const Exponent& e, Rational c);
    const std::map<Exponent, Rational>& terms() const { return terms_; }
    bool operator==(const LaurentPolynomial&) const = default;

    static LaurentPolynomial parse_json(const std::string& text);
    static LaurentPolynomial load(const std::string& path);
    std::string to_json() const;

  private:
    std::map<Exponent, Rational> terms_;
};

// Exact constant term of f^m.
Rational constant_term_power(const LaurentPolynomial& f, unsigned m);

// pi_f(t): coefficient of t^m is the constant term of f^m.
PowerSeries period_series(const LaurentPolynomial& f, std::size_t order);

struct MatchReport {
    bool match = false;
    std::optional<std::size_t> first_mismatch;
    Rational period_value, family_value;  // at the first mismatching degree
};

/* Compares pi_f with a regularized quantum period, degree by degree. */
MatchReport match_series(const LaurentPolynomial& f,
                         const PowerSeries& regularized_period,
                         std::size_t order);

}  // namespace laurent
}  // namespace fano
