#pragma once

#include <optional>
#include <vector>

#include "fano/linear_form.hpp"
#include "fano/rational.hpp"

namespace fano {

/* Exact Fourier-Motzkin elimination over the rationals, with provenance
 * tracking so that derived inequalities can be reported as nonnegative
 * combinations of the input rows.
 *
 * A row states  sum a[i]*x[i] + c >= 0. */
struct FmRow {
    std::vector<Rational> a;
    Rational c;
    std::vector<Rational> weights;  // nonnegative combination of input rows
};

class FmSystem {
  public:
    explicit FmSystem(std::size_t nvars) : nvars_(nvars) {}

    void add_row(std::vector<Rational> a, Rational c);
    void add_row(const LinearForm& f);           // f(x) >= 0
    void add_row_negated(const LinearForm& f);   // -f(x) >= 0

    std::size_t nvars() const { return nvars_; }
    const std::vector<FmRow>& rows() const { return rows_; }

    // Eliminates variable v; rows of the result do not mention v.
    FmSystem eliminated(std::size_t v) const;

    // After all variables are eliminated: true iff no row reads c < 0.
    bool feasible_constants() const;

  private:
    std::size_t nvars_;
    std::size_t ninputs_ = 0;
    std::vector<FmRow> rows_;
};

/* Integer point search in {rows >= 0} by cascade elimination and
 * back-substitution; empty optional if the system is infeasible over Q
 * or holds no integer point within the derived bounds. */
std::optional<std::vector<long>> find_integer_point(const FmSystem& sys);

/* Nested enumeration bounds for the lattice points of a polyhedron.
 * Variables are assigned in order x[0], x[1], ...; level i of the cascade
 * bounds x[i] as a function of x[0..i-1]. */
class EnumerationCascade {
  public:
    explicit EnumerationCascade(const FmSystem& sys);

    // Visits every integer point; `visit` gets the full coordinate vector.
    template <typename F>
    void for_each(F&& visit) const {
        std::vector<long> x(levels_.size(), 0);
        recurse(0, x, visit);
    }

    bool level_bounded(std::size_t i) const;  // both bounds present at level i

  private:
    struct Level {
        std::vector<FmRow> lower, upper;  // rows over x[0..i] with a[i] != 0
    };
    std::vector<Level> levels_;
    std::vector<const FmRow*> final_checks_;
    std::vector<FmRow> storage_;

    template <typename F>
    void recurse(std::size_t i, std::vector<long>& x, F&& visit) const {
        if (i == levels_.size()) {
            visit(std::span<const long>(x));
            return;
        }
        auto [lo, hi] = range_at(i, x);
        if (!lo || !hi) return;
        for (long v = *lo; v <= *hi; ++v) {
            x[i] = v;
            recurse(i + 1, x, visit);
        }
        x[i] = 0;
    }

    std::pair<std::optional<long>, std::optional<long>> range_at(
        std::size_t i, const std::vector<long>& x) const;
};

}  // namespace fano
