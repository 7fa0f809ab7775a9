#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fano/linear_form.hpp"
#include "fano/rational.hpp"
#include "fano/series.hpp"

namespace fano {
namespace sumdsl {

/* Expression tree for one summand of a constrained factorial sum.
 *
 * Kinds and their payloads:
 *   Constant          value
 *   Linear            form (the integer value of the form, as a rational)
 *   Factorial         form!
 *   InverseFactorial  1 / form!
 *   Sign              (-1)^form
 *   Harmonic          H_form, H_0 = 0
 *   Sum, Product      children
 *   Power             children[0] ^ exponent   (exponent >= 0)
 *   Inverse           1 / children[0]
 */
struct TermExpr {
    enum class Kind {
        Constant,
        Linear,
        Factorial,
        InverseFactorial,
        Sign,
        Harmonic,
        Sum,
        Product,
        Power,
        Inverse,
    };
    Kind kind = Kind::Constant;
    Rational value;
    LinearForm form;
    std::vector<TermExpr> children;
    long exponent = 0;

    bool operator==(const TermExpr&) const = default;
};

enum class PrefactorMode { None, Auto };

/* One sum[...] { ... } block. */
struct SumBlock {
    std::vector<std::string> vars;
    std::vector<LinearForm> constraints;  // each required >= 0
    LinearForm degree;                    // exponent of t
    TermExpr term;

    bool operator==(const SumBlock&) const = default;
};

/* A constrained multi-index summation: the sum of its blocks, optionally
 * normalized afterwards by exp(-c t). */
struct SumSpec {
    std::vector<SumBlock> blocks;
    PrefactorMode prefactor = PrefactorMode::None;

    bool operator==(const SumSpec&) const = default;
};

// ---------------------------------------------------------------- errors

struct ParseError : std::runtime_error {
    ParseError(std::size_t pos, const std::string& what)
        : std::runtime_error("parse error at position " + std::to_string(pos) +
                             ": " + what),
          position(pos) {}
    std::size_t position;
};

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnboundedError : std::runtime_error {
    UnboundedError(const std::string& what, std::vector<long> dir)
        : std::runtime_error(what), direction(std::move(dir)) {}
    std::vector<long> direction;
};

// ---------------------------------------------------------------- parsing

SumSpec parse(const std::string& text);

// Canonical form: serialize(parse(text)) is a fixed point of parse/serialize.
std::string serialize(const SumSpec& spec);
std::string serialize(const LinearForm& f, const std::vector<std::string>& vars);

// ------------------------------------------------------------- boundedness

/* Upper bound mu * x_i <= degree_coeff * B + constant on {degree <= B},
 * derived as a nonnegative combination of the degree rows and the
 * constraints (the combination is `weights`, indexed like the FM input:
 * constraints first, then B - degree >= 0, then degree >= 0). */
struct BoundCertificate {
    long mu = 1;
    long degree_coeff = 0;
    long constant = 0;
    std::vector<long> weights;
};

struct BoundsReport {
    bool bounded = false;
    // per block, per variable (upper bounds only; lower bounds are part of
    // the same recession-cone test)
    std::vector<std::vector<BoundCertificate>> certificates;
    std::vector<long> witness;  // an unbounded direction when !bounded
    std::size_t witness_block = 0;
};

BoundsReport check_bounded(const SumSpec& spec);

// ------------------------------------------------------------- evaluation

/* Exact evaluation of the sum to order N (requires check_bounded). */
PowerSeries evaluate(const SumSpec& spec, std::size_t order);

// Raw sum of the blocks without the prefactor normalization.
PowerSeries evaluate_raw(const SumSpec& spec, std::size_t order);

// The rational value of one term at one index tuple (exposed for tests).
Rational eval_term(const TermExpr& term, std::span<const long> x,
                   std::vector<Integer>& factorial_cache,
                   HarmonicCache& harmonics);

}  // namespace sumdsl
}  // namespace fano
