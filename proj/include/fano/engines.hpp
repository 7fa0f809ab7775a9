#pragma once

#include <vector>

#include "fano/series.hpp"
#include "fano/sumdsl.hpp"

namespace fano {
namespace engines {

/* GIT presentation of a toric ambient: columns of `matrix` are the classes
 * of the torus-invariant divisors in a basis of the class lattice;
 * `bundle_rows` are the classes of the line bundles cutting out the
 * complete intersection. */
struct WeightData {
    std::vector<std::vector<long>> matrix;       // r x N
    std::vector<std::vector<long>> bundle_rows;  // s x r
    std::vector<long> anticanonical;             // column sum
    std::vector<long> degree_class;              // anticanonical - sum of rows

    std::size_t rank() const { return matrix.size(); }
    std::size_t columns() const { return matrix.empty() ? 0 : matrix[0].size(); }

    // Checks the arithmetic invariants and that degree_class is strictly
    // positive on the nonzero part of the cone {<beta, D_i> >= 0}.
    void validate() const;
};

struct WpsSpec {
    std::vector<long> weights;  // w_0..w_n, positive
    std::vector<long> degrees;  // d_1..d_m, positive
    long k = 0;                 // -k = sum w - sum d, must be negative

    void validate() const;  // includes the divisibility hypothesis
};

// Quantum period of the Fano toric variety itself (no bundle rows).
sumdsl::SumSpec toric_period(const WeightData& w);

// Quantum Lefschetz sum for a complete intersection in a toric ambient.
sumdsl::SumSpec toric_ci_period(const WeightData& w);

// Complete intersection in weighted projective space.
sumdsl::SumSpec wps_ci_period(const WpsSpec& s);

// G_{X x Y} = G_X * G_Y; both inputs must be normalized quantum periods.
PowerSeries product_period(const PowerSeries& a, const PowerSeries& b);

}  // namespace engines
}  // namespace fano
