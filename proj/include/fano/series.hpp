#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "fano/rational.hpp"

namespace fano {

/* Truncated power series in t with exact rational coefficients.
 * Immutable after construction except through coeff(); binary operations
 * truncate to the smaller order. */
class PowerSeries {
  public:
    explicit PowerSeries(std::size_t truncation_order)
        : coeffs_(truncation_order + 1, Rational(0)) {}

    static PowerSeries one(std::size_t order) {
        PowerSeries s(order);
        s.coeffs_[0] = 1;
        return s;
    }

    // exp(c*t) truncated: sum c^k t^k / k!
    static PowerSeries exp_linear(const Rational& c, std::size_t order);

    std::size_t order() const { return coeffs_.size() - 1; }
    const Rational& operator[](std::size_t d) const { return coeffs_[d]; }
    Rational& coeff(std::size_t d) { return coeffs_[d]; }

    bool operator==(const PowerSeries&) const = default;

    // True for a normalized quantum period: c0 = 1 and c1 = 0.
    bool is_normalized_period() const {
        return coeffs_[0] == 1 && (coeffs_.size() < 2 || coeffs_[1] == 0);
    }

  private:
    std::vector<Rational> coeffs_;
};

// Cauchy product, truncated to min(a.order(), b.order()).
PowerSeries multiply(const PowerSeries& a, const PowerSeries& b);

// coefficient d of the result is d! times coefficient d of g.
PowerSeries regularize(const PowerSeries& g);

struct Normalized {
    Rational prefactor;   // c with result = exp(-c t) * input
    PowerSeries series;
};

// Requires coefficient 1 at degree 0; kills the linear term by exp(-c t).
Normalized normalize_prefactor(const PowerSeries& s);

}  // namespace fano
