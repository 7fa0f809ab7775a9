#include "fano/grassmann.hpp"

#include <numeric>
#include <stdexcept>

namespace fano {
namespace grassmann {

void GrassmannBundleSpec::validate() const {
    if (r <= 0 || n <= 0 || r >= n)
        throw std::invalid_argument("grassmann: need 0 < r < n");
    if (a < 0 || b < 0 || c < 0 || d < 0 || e < 0)
        throw std::invalid_argument("grassmann: negative multiplicity");
    if (k() >= 0)
        throw std::invalid_argument(
            "grassmann: k must be strictly negative, got " +
            std::to_string(k()));
}

TruncatedRing::TruncatedRing(std::vector<int> caps) : caps_(std::move(caps)) {
    strides_.resize(caps_.size());
    std::size_t s = 1;
    for (std::size_t i = 0; i < caps_.size(); ++i) {
        strides_[i] = s;
        s *= static_cast<std::size_t>(caps_[i] + 1);
    }
    size_ = s;
    expo_.resize(size_);
    for (std::size_t idx = 0; idx < size_; ++idx) {
        std::vector<int> e(caps_.size());
        std::size_t rest = idx;
        for (std::size_t i = 0; i < caps_.size(); ++i) {
            e[i] = static_cast<int>(rest % (caps_[i] + 1));
            rest /= (caps_[i] + 1);
        }
        expo_[idx] = std::move(e);
    }
}

std::size_t TruncatedRing::index(std::span<const int> expo) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < caps_.size(); ++i)
        idx += strides_[i] * static_cast<std::size_t>(expo[i]);
    return idx;
}

TruncatedRing::Elem TruncatedRing::one() const {
    Elem v(size_, Rational(0));
    v[0] = 1;
    return v;
}

TruncatedRing::Elem TruncatedRing::mul_linear(const Elem& v, const Rational& c0,
                                              std::span<const long> lin) const {
    Elem out(size_, Rational(0));
    for (std::size_t idx = 0; idx < size_; ++idx) {
        if (v[idx] == 0) continue;
        if (c0 != 0) out[idx] += c0 * v[idx];
        const auto& e = expo_[idx];
        for (std::size_t i = 0; i < caps_.size(); ++i) {
            if (lin[i] == 0 || e[i] >= caps_[i]) continue;
            out[idx + strides_[i]] += lin[i] * v[idx];
        }
    }
    return out;
}

TruncatedRing::Elem TruncatedRing::mul_univariate(
    const Elem& v, std::size_t var, std::span<const Rational> poly) const {
    Elem out(size_, Rational(0));
    for (std::size_t idx = 0; idx < size_; ++idx) {
        if (v[idx] == 0) continue;
        int e = expo_[idx][var];
        std::size_t smax =
            std::min(poly.size() - 1, static_cast<std::size_t>(caps_[var] - e));
        for (std::size_t s = 0; s <= smax; ++s) {
            if (poly[s] == 0) continue;
            out[idx + s * strides_[var]] += poly[s] * v[idx];
        }
    }
    return out;
}

TruncatedRing::Elem TruncatedRing::swap_vars(const Elem& v, std::size_t i,
                                             std::size_t j) const {
    if (caps_[i] != caps_[j])
        throw std::invalid_argument("swap_vars: caps differ");
    Elem out(size_, Rational(0));
    for (std::size_t idx = 0; idx < size_; ++idx) {
        if (v[idx] == 0) continue;
        std::vector<int> e = expo_[idx];
        std::swap(e[i], e[j]);
        out[index(e)] = v[idx];
    }
    return out;
}

std::vector<Rational> TruncatedRing::inverse_power(std::size_t var, long m,
                                                   int count) const {
    // (p + m)^-1 = sum_s (-1)^s p^s / m^{s+1}, truncated at the cap
    int cap = caps_[var];
    std::vector<Rational> inv(cap + 1);
    Rational mm(m);
    Rational pw = 1 / mm;
    for (int s = 0; s <= cap; ++s) {
        inv[s] = (s % 2 == 0) ? pw : -pw;
        pw /= mm;
    }
    std::vector<Rational> cur(cap + 1, Rational(0));
    cur[0] = 1;
    for (int c = 0; c < count; ++c) {
        std::vector<Rational> nxt(cap + 1, Rational(0));
        for (int i = 0; i <= cap; ++i) {
            if (cur[i] == 0) continue;
            for (int j = 0; i + j <= cap; ++j) nxt[i + j] += cur[i] * inv[j];
        }
        cur = std::move(nxt);
    }
    return cur;
}

namespace {

struct Evaluator {
    const GrassmannBundleSpec& spec;
    const TruncatedRing& ring;
    int r;
    long step;              // -k: anticanonical degree per unit of |l|
    long lmax;              // bound on |l|
    std::vector<Rational>* coeffs;
    std::vector<long> ones, lin;

    // Multiplies in the Gamma factors gained when l steps to l + e_j
    // (l is the incremented multi-index) and the new denominator block.
    TruncatedRing::Elem advance(TruncatedRing::Elem v,
                                std::span<const long> l, int j) {
        long s = std::accumulate(l.begin(), l.end(), 0L);
        for (long t = 0; t < spec.a; ++t) v = ring.mul_linear(v, Rational(s), ones);
        for (long t = 0; t < spec.b; ++t) {
            std::vector<long> twos(r, 2);
            v = ring.mul_linear(v, Rational(2 * s - 1), twos);
            v = ring.mul_linear(v, Rational(2 * s), twos);
        }
        for (long t = 0; t < spec.c; ++t) {
            for (int jp = 0; jp < r; ++jp) {
                int gain = jp == j ? 2 : 1;
                long base = s + l[jp];
                for (int g = 0; g < gain; ++g) {
                    std::vector<long> f(r, 1);
                    f[jp] += 1;
                    v = ring.mul_linear(v, Rational(base - gain + 1 + g), f);
                }
            }
        }
        for (long t = 0; t < spec.d; ++t) {
            for (int jp = 0; jp < r; ++jp) {
                if (jp == j) continue;
                std::vector<long> f(r, 1);
                f[jp] -= 1;
                v = ring.mul_linear(v, Rational(s - l[jp]), f);
            }
        }
        for (long t = 0; t < spec.e; ++t) {
            for (int jp = 0; jp < r; ++jp) {
                if (jp == j) continue;
                std::vector<long> f(r, 0);
                f[j] += 1;
                f[jp] += 1;  // j == jp cannot happen here
                v = ring.mul_linear(v, Rational(l[j] + l[jp]), f);
            }
        }
        v = ring.mul_univariate(v, static_cast<std::size_t>(j),
                                ring.inverse_power(j, l[j], spec.n));
        return v;
    }

    // <v * antisym_l, lead monomial>, with the global sign (-1)^{|l|(r-1)}
    Rational extract(const TruncatedRing::Elem& v, std::span<const long> l) {
        TruncatedRing::Elem anti = ring.one();
        for (int i = 0; i < r; ++i) {
            for (int j = i + 1; j < r; ++j) {
                std::vector<long> f(r, 0);
                f[j] = 1;
                f[i] = -1;
                anti = ring.mul_linear(anti, Rational(l[j] - l[i]), f);
            }
        }
        std::vector<int> lead(r);
        for (int i = 0; i < r; ++i) lead[i] = i;
        Rational total(0);
        for (std::size_t idx = 0; idx < ring.size(); ++idx) {
            if (anti[idx] == 0) continue;
            const auto& e = ring.exponents(idx);
            std::vector<int> rem(r);
            bool ok = true;
            for (int i = 0; i < r; ++i) {
                rem[i] = lead[i] - e[i];
                if (rem[i] < 0) {
                    ok = false;
                    break;
                }
            }
            if (ok) total += anti[idx] * v[ring.index(rem)];
        }
        long s = std::accumulate(l.begin(), l.end(), 0L);
        if ((s * (r - 1)) % 2 != 0) total = -total;
        return total;
    }

    void dfs(int j, std::vector<long>& l, const TruncatedRing::Elem& v) {
        if (j == r) {
            long s = std::accumulate(l.begin(), l.end(), 0L);
            (*coeffs)[static_cast<std::size_t>(s * step)] += extract(v, l);
            return;
        }
        dfs(j + 1, l, v);
        TruncatedRing::Elem cur = v;
        long base = std::accumulate(l.begin(), l.end(), 0L) - l[j];
        for (long lj = 1; base + lj <= lmax; ++lj) {
            l[j] = lj;
            cur = advance(std::move(cur), l, j);
            dfs(j + 1, l, cur);
        }
        l[j] = 0;
    }
};

}  // namespace

PowerSeries raw_period(const GrassmannBundleSpec& spec, std::size_t order) {
    spec.validate();
    int r = spec.r;
    std::vector<int> caps(r);
    for (int i = 0; i < r; ++i) caps[i] = i;  // staircase box
    TruncatedRing ring(std::move(caps));
    std::vector<Rational> coeffs(order + 1, Rational(0));
    Evaluator ev{spec,
                 ring,
                 r,
                 -spec.k(),
                 static_cast<long>(order) / (-spec.k()),
                 &coeffs,
                 std::vector<long>(r, 1),
                 {}};
    std::vector<long> l(r, 0);
    ev.dfs(0, l, ring.one());
    PowerSeries out(order);
    for (std::size_t d = 0; d <= order; ++d) out.coeff(d) = coeffs[d];
    return out;
}

PowerSeries grassmann_period(const GrassmannBundleSpec& spec,
                             std::size_t order) {
    return normalize_prefactor(raw_period(spec, order)).series;
}

TruncatedRing::Elem term_element(const GrassmannBundleSpec& spec,
                                 const TruncatedRing& ring,
                                 std::span<const long> l) {
    int r = spec.r;
    long s = std::accumulate(l.begin(), l.end(), 0L);
    std::vector<long> ones(r, 1);
    TruncatedRing::Elem v = ring.one();
    for (long t = 0; t < spec.a; ++t)
        for (long kk = 1; kk <= s; ++kk)
            v = ring.mul_linear(v, Rational(kk), ones);
    for (long t = 0; t < spec.b; ++t) {
        std::vector<long> twos(r, 2);
        for (long kk = 1; kk <= 2 * s; ++kk)
            v = ring.mul_linear(v, Rational(kk), twos);
    }
    for (long t = 0; t < spec.c; ++t)
        for (int j = 0; j < r; ++j) {
            std::vector<long> f(r, 1);
            f[j] += 1;
            for (long kk = 1; kk <= s + l[j]; ++kk)
                v = ring.mul_linear(v, Rational(kk), f);
        }
    for (long t = 0; t < spec.d; ++t)
        for (int j = 0; j < r; ++j) {
            std::vector<long> f(r, 1);
            f[j] -= 1;
            for (long kk = 1; kk <= s - l[j]; ++kk)
                v = ring.mul_linear(v, Rational(kk), f);
        }
    for (long t = 0; t < spec.e; ++t)
        for (int i = 0; i < r; ++i)
            for (int j = i + 1; j < r; ++j) {
                std::vector<long> f(r, 0);
                f[i] = 1;
                f[j] = 1;
                for (long kk = 1; kk <= l[i] + l[j]; ++kk)
                    v = ring.mul_linear(v, Rational(kk), f);
            }
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) {
            std::vector<long> f(r, 0);
            f[j] = 1;
            f[i] = -1;
            v = ring.mul_linear(v, Rational(l[j] - l[i]), f);
        }
    for (int j = 0; j < r; ++j)
        for (long kk = 1; kk <= l[j]; ++kk)
            v = ring.mul_univariate(v, static_cast<std::size_t>(j),
                                    ring.inverse_power(j, kk, spec.n));
    if ((s * (r - 1)) % 2 != 0)
        for (auto& q : v) q = -q;
    return v;
}

}  // namespace grassmann
}  // namespace fano
