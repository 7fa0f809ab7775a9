#pragma once

#include <array>
#include <span>
#include <vector>

#include "fano/series.hpp"

namespace fano {
namespace grassmann {

/* Zero locus of a generic section of
 *   (det S*)^a + (det S* ** 2)^b + (S* x det S*)^c + (S x det S*)^d
 *   + (wedge^2 S*)^e
 * on Gr(r, n). */
struct GrassmannBundleSpec {
    int r = 0, n = 0;
    long a = 0, b = 0, c = 0, d = 0, e = 0;

    long k() const {
        return a + 2 * b + (r + 1) * c + (r - 1) * d + (r - 1) * e - n;
    }
    void validate() const;
};

/* Dense truncated polynomial ring Q[p_1..p_r] with a per-variable exponent
 * cap (cap = n-1 everywhere realizes the relations p_i^n = 0; the evaluator
 * uses the smaller staircase cap (0,1,...,r-1), which is exact for
 * extracting the coefficient of the Vandermonde's lead monomial). */
class TruncatedRing {
  public:
    explicit TruncatedRing(std::vector<int> caps);

    using Elem = std::vector<Rational>;

    std::size_t vars() const { return caps_.size(); }
    const std::vector<int>& caps() const { return caps_; }
    std::size_t size() const { return size_; }

    std::size_t index(std::span<const int> expo) const;
    const std::vector<int>& exponents(std::size_t idx) const {
        return expo_[idx];
    }

    Elem one() const;
    // elem * (c0 + sum lin[i] p_i)
    Elem mul_linear(const Elem& v, const Rational& c0,
                    std::span<const long> lin) const;
    // elem * poly(p_var), poly given by coefficients 0..deg
    Elem mul_univariate(const Elem& v, std::size_t var,
                        std::span<const Rational> poly) const;
    // exchange two variables (requires equal caps); for symmetry tests
    Elem swap_vars(const Elem& v, std::size_t i, std::size_t j) const;

    // (p_var + m)^-count truncated to the variable's cap
    std::vector<Rational> inverse_power(std::size_t var, long m,
                                        int count) const;

  private:
    std::vector<int> caps_;
    std::vector<std::size_t> strides_;
    std::size_t size_;
    std::vector<std::vector<int>> expo_;
};

// Raw scalar function I_tw(t): component along the identity of the
// antisymmetrized sum divided by the Vandermonde.
PowerSeries raw_period(const GrassmannBundleSpec& spec, std::size_t order);

// e^{alpha t} I_tw normalized so the result is 1 + O(t^2).
PowerSeries grassmann_period(const GrassmannBundleSpec& spec,
                             std::size_t order);

// The term of the big sum at one multi-index, in the given ring (intended
// for the full n^r ring; used by the antisymmetry/divisibility tests).
TruncatedRing::Elem term_element(const GrassmannBundleSpec& spec,
                                 const TruncatedRing& ring,
                                 std::span<const long> l);

// Mori-Mukai rank-2 cases whose periods come from closed sums with
// harmonic-number factors.
inline constexpr std::array<const char*, 6> kRank2MixedCases = {
    "2-14", "2-17", "2-20", "2-21", "2-22", "2-26"};

}  // namespace grassmann
}  // namespace fano
