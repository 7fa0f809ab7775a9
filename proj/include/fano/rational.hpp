#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fano {

using Integer = mpz_class;
using Rational = mpq_class;

inline Integer factorial(long n) {
    if (n < 0) throw std::domain_error("factorial of negative integer");
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

// "p/q" or "p"; the result is canonicalized.
inline Rational parse_rational(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

// Growable cache of exact harmonic numbers H_0 = 0, H_k = H_{k-1} + 1/k.
class HarmonicCache {
  public:
    // by value: callers may combine two lookups in one expression while
    // the cache reallocates underneath
    Rational operator()(long n) {
        if (n < 0) throw std::domain_error("harmonic number of negative index");
        while (static_cast<long>(values_.size()) <= n) {
            long k = static_cast<long>(values_.size());
            Rational next = values_.back() + Rational(1, k);
            values_.push_back(std::move(next));
        }
        return values_[static_cast<std::size_t>(n)];
    }

  private:
    std::vector<Rational> values_{Rational(0)};
};

}  // namespace fano
