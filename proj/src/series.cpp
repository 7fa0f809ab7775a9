#include "fano/series.hpp"

#include <algorithm>
#include <stdexcept>

namespace fano {

PowerSeries PowerSeries::exp_linear(const Rational& c, std::size_t order) {
    PowerSeries s(order);
    Rational term(1);
    s.coeff(0) = term;
    for (std::size_t k = 1; k <= order; ++k) {
        term *= c;
        term /= static_cast<long>(k);
        s.coeff(k) = term;
    }
    return s;
}

PowerSeries multiply(const PowerSeries& a, const PowerSeries& b) {
    std::size_t n = std::min(a.order(), b.order());
    PowerSeries out(n);
    for (std::size_t i = 0; i <= n; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; i + j <= n; ++j) {
            if (b[j] == 0) continue;
            out.coeff(i + j) += a[i] * b[j];
        }
    }
    return out;
}

PowerSeries regularize(const PowerSeries& g) {
    PowerSeries out(g.order());
    Integer fact(1);
    for (std::size_t d = 0; d <= g.order(); ++d) {
        if (d > 0) fact *= static_cast<long>(d);
        out.coeff(d) = g[d] * Rational(fact);
    }
    return out;
}

Normalized normalize_prefactor(const PowerSeries& s) {
    if (s[0] != 1)
        throw std::invalid_argument(
            "normalize_prefactor: constant coefficient must be 1");
    Rational c = s.order() >= 1 ? s[1] : Rational(0);
    PowerSeries result = multiply(PowerSeries::exp_linear(-c, s.order()), s);
    return Normalized{c, std::move(result)};
}

}  // namespace fano
