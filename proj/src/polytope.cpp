#include "fano/polytope.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace fano {

namespace {

// Scale so that the leading nonzero of (a, c) is +-1 ... no: divide by the
// gcd of numerators/lcm of denominators to keep entries small, preserving
// orientation.
void reduce_row(FmRow& r) {
    Integer num_gcd(0), den_lcm(1);
    auto acc = [&](const Rational& q) {
        if (q == 0) return;
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(),
                q.get_num().get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(),
                q.get_den().get_mpz_t());
    };
    for (const auto& q : r.a) acc(q);
    acc(r.c);
    if (num_gcd == 0) return;
    Rational scale(den_lcm, num_gcd);
    scale.canonicalize();
    for (auto& q : r.a) q *= scale;
    r.c *= scale;
    for (auto& q : r.weights) q *= scale;
}

}  // namespace

void FmSystem::add_row(std::vector<Rational> a, Rational c) {
    if (a.size() != nvars_) throw std::invalid_argument("row arity mismatch");
    FmRow r{std::move(a), std::move(c), {}};
    for (auto& row : rows_) row.weights.push_back(0);
    r.weights.assign(ninputs_ + 1, Rational(0));
    r.weights.back() = 1;
    ++ninputs_;
    rows_.push_back(std::move(r));
}

void FmSystem::add_row(const LinearForm& f) {
    std::vector<Rational> a(nvars_);
    for (std::size_t i = 0; i < f.coeffs.size() && i < nvars_; ++i)
        a[i] = f.coeffs[i];
    add_row(std::move(a), Rational(f.constant));
}

void FmSystem::add_row_negated(const LinearForm& f) {
    std::vector<Rational> a(nvars_);
    for (std::size_t i = 0; i < f.coeffs.size() && i < nvars_; ++i)
        a[i] = -f.coeffs[i];
    add_row(std::move(a), Rational(-f.constant));
}

FmSystem FmSystem::eliminated(std::size_t v) const {
    FmSystem out(nvars_);
    out.ninputs_ = ninputs_;
    std::vector<const FmRow*> pos, neg;
    // keyed by coefficient vector; keeps only the tightest constant
    std::map<std::vector<Rational>, FmRow> kept;
    auto keep = [&](FmRow r) {
        reduce_row(r);
        auto it = kept.find(r.a);
        if (it == kept.end())
            kept.emplace(r.a, std::move(r));
        else if (r.c < it->second.c)
            it->second = std::move(r);
    };
    for (const auto& r : rows_) {
        if (r.a[v] > 0)
            pos.push_back(&r);
        else if (r.a[v] < 0)
            neg.push_back(&r);
        else
            keep(r);
    }
    for (const auto* p : pos) {
        for (const auto* n : neg) {
            // p->a[v] * (-n) + (-n->a[v]) * p, scaled positive
            Rational wp = -n->a[v];
            Rational wn = p->a[v];
            FmRow r;
            r.a.resize(nvars_);
            for (std::size_t i = 0; i < nvars_; ++i)
                r.a[i] = wp * p->a[i] + wn * n->a[i];
            r.c = wp * p->c + wn * n->c;
            r.weights.resize(ninputs_);
            for (std::size_t i = 0; i < ninputs_; ++i)
                r.weights[i] = wp * p->weights[i] + wn * n->weights[i];
            keep(std::move(r));
        }
    }
    for (auto& [key, row] : kept) out.rows_.push_back(std::move(row));
    return out;
}

bool FmSystem::feasible_constants() const {
    for (const auto& r : rows_) {
        bool allzero = std::all_of(r.a.begin(), r.a.end(),
                                   [](const Rational& q) { return q == 0; });
        if (allzero && r.c < 0) return false;
    }
    return true;
}

std::optional<std::vector<long>> find_integer_point(const FmSystem& sys) {
    std::size_t k = sys.nvars();
    std::vector<FmSystem> cascade;
    cascade.push_back(sys);
    for (std::size_t v = k; v-- > 0;)
        cascade.push_back(cascade.back().eliminated(v));
    if (!cascade.back().feasible_constants()) return std::nullopt;

    // back-substitute: cascade[k - i] has variables x[0..i-1] free
    std::vector<long> x(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        const FmSystem& level = cascade[k - 1 - i];  // rows mention x[0..i]
        bool has_lo = false, has_hi = false;
        Rational lo, hi;
        for (const auto& r : level.rows()) {
            if (r.a[i] == 0) continue;
            Rational rest = r.c;
            for (std::size_t j = 0; j < i; ++j) rest += r.a[j] * x[j];
            Rational bound = -rest / r.a[i];
            if (r.a[i] > 0) {  // x[i] >= bound
                if (!has_lo || bound > lo) lo = bound, has_lo = true;
            } else {
                if (!has_hi || bound < hi) hi = bound, has_hi = true;
            }
        }
        long v;
        if (has_lo) {
            mpz_class num = lo.get_num(), den = lo.get_den(), q;
            mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
            v = q.get_si();
        } else if (has_hi) {
            mpz_class num = hi.get_num(), den = hi.get_den(), q;
            mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
            v = q.get_si();
        } else {
            v = 0;
        }
        if (has_lo && has_hi && Rational(v) > hi) return std::nullopt;
        x[i] = v;
    }
    // the rounding above can only fail on non-integral corner cases; verify
    for (const auto& r : sys.rows()) {
        Rational val = r.c;
        for (std::size_t j = 0; j < k; ++j) val += r.a[j] * x[j];
        if (val < 0) return std::nullopt;
    }
    return x;
}

EnumerationCascade::EnumerationCascade(const FmSystem& sys) {
    std::size_t k = sys.nvars();
    std::vector<FmSystem> cascade;
    cascade.push_back(sys);
    for (std::size_t v = k; v-- > 0;)
        cascade.push_back(cascade.back().eliminated(v));
    if (!cascade.back().feasible_constants()) {
        // empty region: a single impossible level
        levels_.resize(k);
        return;
    }
    levels_.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const FmSystem& level = cascade[k - 1 - i];
        for (const auto& r : level.rows()) {
            if (r.a[i] == 0) continue;
            FmRow trimmed = r;
            trimmed.weights.clear();
            if (r.a[i] > 0)
                levels_[i].lower.push_back(std::move(trimmed));
            else
                levels_[i].upper.push_back(std::move(trimmed));
        }
    }
}

bool EnumerationCascade::level_bounded(std::size_t i) const {
    return !levels_[i].lower.empty() && !levels_[i].upper.empty();
}

std::pair<std::optional<long>, std::optional<long>> EnumerationCascade::range_at(
    std::size_t i, const std::vector<long>& x) const {
    std::optional<long> lo, hi;
    for (const auto& r : levels_[i].lower) {
        Rational rest = r.c;
        for (std::size_t j = 0; j < i; ++j) rest += r.a[j] * x[j];
        Rational b = -rest / r.a[i];
        mpz_class q;
        mpz_cdiv_q(q.get_mpz_t(), b.get_num().get_mpz_t(),
                   b.get_den().get_mpz_t());
        long v = q.get_si();
        if (!lo || v > *lo) lo = v;
    }
    for (const auto& r : levels_[i].upper) {
        Rational rest = r.c;
        for (std::size_t j = 0; j < i; ++j) rest += r.a[j] * x[j];
        Rational b = -rest / r.a[i];
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), b.get_num().get_mpz_t(),
                   b.get_den().get_mpz_t());
        long v = q.get_si();
        if (!hi || v < *hi) hi = v;
    }
    return {lo, hi};
}

}  // namespace fano
