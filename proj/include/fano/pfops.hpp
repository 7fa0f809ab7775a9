#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fano/series.hpp"

namespace fano {
namespace pfops {

/* sum_k t^k P_k(D) with D = t d/dt; coeffs[k][j] is the coefficient of
 * t^k D^j.  Normalized operators have P_0 != 0 and integer coprime
 * entries with positive leading sign. */
struct DifferentialOperator {
    std::vector<std::vector<Rational>> coeffs;

    std::size_t order() const;   // max j with a nonzero D^j coefficient
    std::size_t degree() const;  // max k with a nonzero row
    bool is_zero() const;

    std::string to_text() const;
    std::string to_json() const;
    static DifferentialOperator from_json(const std::string& text);

    bool operator==(const DifferentialOperator&) const = default;
};

// (op s): coefficient of t^m is sum_k P_k(m - k) c_{m-k}.
PowerSeries apply(const DifferentialOperator& op, const PowerSeries& s);

struct AnnihilatorResult {
    std::optional<DifferentialOperator> op;
    bool unique = true;         // nullspace dimension was 1
    std::size_t nullity = 0;
    std::size_t order = 0, degree = 0;  // the (r, s) the fit ran at
};

/* One-shot fit at the given order/degree caps: exact rational nullspace of
 * the annihilation equations over all available coefficients of s.
 * Requires at least (r+1)(s+1) + r + s coefficients. */
AnnihilatorResult find_annihilator(const PowerSeries& s, std::size_t max_order,
                                   std::size_t max_degree);

struct SearchResult {
    AnnihilatorResult fit;
    bool capped = false;        // ladder exhausted without a nullspace
    std::size_t coefficients_needed = 0;  // when the series was too short
};

/* Ladder search: (2,2), (3,3), ..., then fixed order with growing degree,
 * up to (order_cap, degree_cap).  `series_at` supplies the series at any
 * requested truncation order. */
SearchResult search_annihilator(
    const std::function<PowerSeries(std::size_t)>& series_at,
    std::size_t order_cap = 6, std::size_t degree_cap = 12);

// True iff every complex root of P_0 is an integer.
bool is_manifold_type(const DifferentialOperator& op);

// Exposed for tests: all integer roots (with multiplicity) of the integer
// polynomial `poly` (coefficients by ascending degree), plus the deflated
// remainder degree.
std::vector<long> integer_roots(std::vector<Integer> poly,
                                std::size_t* residual_degree = nullptr);

}  // namespace pfops
}  // namespace fano
