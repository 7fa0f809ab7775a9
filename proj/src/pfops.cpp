#include "fano/pfops.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace fano {
namespace pfops {

std::size_t DifferentialOperator::order() const {
    std::size_t r = 0;
    for (const auto& row : coeffs)
        for (std::size_t j = 0; j < row.size(); ++j)
            if (row[j] != 0) r = std::max(r, j);
    return r;
}

std::size_t DifferentialOperator::degree() const {
    std::size_t s = 0;
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        for (const auto& q : coeffs[k])
            if (q != 0) s = std::max(s, k);
    return s;
}

bool DifferentialOperator::is_zero() const {
    for (const auto& row : coeffs)
        for (const auto& q : row)
            if (q != 0) return false;
    return true;
}

std::string DifferentialOperator::to_text() const {
    std::ostringstream out;
    bool first = true;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        bool rownz = false;
        for (const auto& q : coeffs[k]) rownz = rownz || q != 0;
        if (!rownz) continue;
        if (!first) out << " + ";
        first = false;
        if (k == 1) out << "t * ";
        if (k >= 2) out << "t^" << k << " * ";
        out << "(";
        bool firstterm = true;
        for (std::size_t j = 0; j < coeffs[k].size(); ++j) {
            const Rational& q = coeffs[k][j];
            if (q == 0) continue;
            if (!firstterm) out << (q > 0 ? " + " : " - ");
            Rational a = (!firstterm && q < 0) ? Rational(-q) : q;
            if (j == 0 || a != 1) out << a.get_str();
            if (j > 0 && a != 1) out << "*";
            if (j == 1) out << "D";
            if (j >= 2) out << "D^" << j;
            firstterm = false;
        }
        out << ")";
    }
    if (first) out << "(0)";
    return out.str();
}

std::string DifferentialOperator::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : coeffs) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& q : row) r.push_back(to_string(q));
        rows.push_back(r);
    }
    return nlohmann::json{{"coeffs", rows}}.dump();
}

DifferentialOperator DifferentialOperator::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    DifferentialOperator op;
    for (const auto& row : j.at("coeffs")) {
        std::vector<Rational> r;
        for (const auto& v : row) r.push_back(parse_rational(v.get<std::string>()));
        op.coeffs.push_back(std::move(r));
    }
    return op;
}

PowerSeries apply(const DifferentialOperator& op, const PowerSeries& s) {
    PowerSeries out(s.order());
    for (std::size_t m = 0; m <= s.order(); ++m) {
        Rational acc(0);
        for (std::size_t k = 0; k < op.coeffs.size() && k <= m; ++k) {
            const auto& row = op.coeffs[k];
            if (row.empty()) continue;
            const Rational& c = s[m - k];
            if (c == 0) continue;
            // P_k(m - k)
            Rational x(static_cast<long>(m - k));
            Rational p(0), pw(1);
            for (std::size_t j = 0; j < row.size(); ++j) {
                if (row[j] != 0) p += row[j] * pw;
                pw *= x;
            }
            acc += p * c;
        }
        out.coeff(m) = acc;
    }
    return out;
}

namespace {

// Reduced row echelon form; returns pivot column per row.
std::vector<std::size_t> rref(std::vector<std::vector<Rational>>& m) {
    std::vector<std::size_t> pivots;
    if (m.empty()) return pivots;
    std::size_t rows = m.size(), cols = m[0].size(), rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t sel = rank;
        while (sel < rows && m[sel][c] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(m[rank], m[sel]);
        Rational inv = 1 / m[rank][c];
        for (auto& q : m[rank]) q *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rank || m[i][c] == 0) continue;
            Rational f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[rank][j];
        }
        pivots.push_back(c);
        ++rank;
    }
    m.resize(rank);
    return pivots;
}

// Clears denominators, divides by content, makes the first nonzero (in
// (k, j) scan order) positive.
void canonicalize(DifferentialOperator& op) {
    Integer den(1), num(0);
    for (const auto& row : op.coeffs)
        for (const auto& q : row) {
            if (q == 0) continue;
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den().get_mpz_t());
        }
    for (auto& row : op.coeffs)
        for (auto& q : row) {
            q *= Rational(den);
            q.canonicalize();
            if (q != 0)
                mpz_gcd(num.get_mpz_t(), num.get_mpz_t(),
                        q.get_num().get_mpz_t());
        }
    if (num == 0) return;
    int sign = 0;
    for (const auto& row : op.coeffs) {
        for (const auto& q : row)
            if (q != 0) {
                sign = q > 0 ? 1 : -1;
                break;
            }
        if (sign) break;
    }
    Rational scale(sign > 0 ? num : Integer(-num));
    for (auto& row : op.coeffs)
        for (auto& q : row) {
            q /= scale;
            q.canonicalize();
        }
}

// t^k0 * op' = op: drop the all-zero leading rows.
void strip_t_power(DifferentialOperator& op) {
    std::size_t k0 = 0;
    while (k0 < op.coeffs.size()) {
        bool nz = false;
        for (const auto& q : op.coeffs[k0]) nz = nz || q != 0;
        if (nz) break;
        ++k0;
    }
    if (k0 > 0 && k0 < op.coeffs.size())
        op.coeffs.erase(op.coeffs.begin(),
                        op.coeffs.begin() + static_cast<long>(k0));
}

}  // namespace

AnnihilatorResult find_annihilator(const PowerSeries& s, std::size_t max_order,
                                   std::size_t max_degree) {
    std::size_t r = max_order, sd = max_degree;
    std::size_t unknowns = (r + 1) * (sd + 1);
    std::size_t need = unknowns + r + sd;
    if (s.order() + 1 < need)
        throw std::invalid_argument(
            "find_annihilator: series has " + std::to_string(s.order() + 1) +
            " coefficients, needs " + std::to_string(need));
    // unknown (k, j) at column k*(r+1)+j; equation per output degree m
    std::vector<std::vector<Rational>> m(s.order() + 1,
                                         std::vector<Rational>(unknowns));
    for (std::size_t deg = 0; deg <= s.order(); ++deg) {
        for (std::size_t k = 0; k <= sd && k <= deg; ++k) {
            const Rational& c = s[deg - k];
            if (c == 0) continue;
            Rational x(static_cast<long>(deg - k));
            Rational pw(1);
            for (std::size_t j = 0; j <= r; ++j) {
                m[deg][k * (r + 1) + j] = c * pw;
                pw *= x;
            }
        }
    }
    auto pivots = rref(m);
    AnnihilatorResult result;
    result.order = r;
    result.degree = sd;
    result.nullity = unknowns - pivots.size();
    if (result.nullity == 0) return result;
    result.unique = result.nullity == 1;
    // nullspace basis from the free columns; keep the sparsest vector
    std::vector<Rational> best;
    std::size_t best_nnz = 0;
    std::vector<bool> ispivot(unknowns, false);
    for (auto c : pivots) ispivot[c] = true;
    for (std::size_t fc = 0; fc < unknowns; ++fc) {
        if (ispivot[fc]) continue;
        std::vector<Rational> v(unknowns, Rational(0));
        v[fc] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][fc];
        std::size_t nnz = 0;
        for (const auto& q : v) nnz += q != 0;
        if (best.empty() || nnz < best_nnz) {
            best = std::move(v);
            best_nnz = nnz;
        }
    }
    DifferentialOperator op;
    op.coeffs.assign(sd + 1, std::vector<Rational>(r + 1, Rational(0)));
    for (std::size_t k = 0; k <= sd; ++k)
        for (std::size_t j = 0; j <= r; ++j)
            op.coeffs[k][j] = best[k * (r + 1) + j];
    strip_t_power(op);
    canonicalize(op);
    result.op = std::move(op);
    return result;
}

SearchResult search_annihilator(
    const std::function<PowerSeries(std::size_t)>& series_at,
    std::size_t order_cap, std::size_t degree_cap) {
    std::vector<std::pair<std::size_t, std::size_t>> rungs;
    std::size_t diag = std::min(order_cap, degree_cap);
    if (diag < 2) {
        rungs.emplace_back(order_cap, degree_cap);
    } else {
        for (std::size_t t = 2; t <= diag; ++t) rungs.emplace_back(t, t);
        for (std::size_t s = diag + 1; s <= degree_cap; ++s)
            rungs.emplace_back(order_cap, s);
        for (std::size_t r = diag + 1; r <= order_cap; ++r)
            rungs.emplace_back(r, degree_cap);
    }
    SearchResult out;
    for (auto [r, s] : rungs) {
        std::size_t need = (r + 1) * (s + 1) + r + s;
        PowerSeries series = series_at(need - 1);
        out.fit = find_annihilator(series, r, s);
        out.coefficients_needed = need;
        if (out.fit.op) return out;
    }
    out.capped = true;
    return out;
}

// ------------------------------------------------------ integer roots

namespace {

using Poly = std::vector<Rational>;  // ascending degree

void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

Rational eval_poly(const Poly& p, const Rational& x) {
    Rational v(0);
    for (std::size_t i = p.size(); i-- > 0;) v = v * x + p[i];
    return v;
}

Poly derivative(const Poly& p) {
    Poly d;
    for (std::size_t i = 1; i < p.size(); ++i)
        d.push_back(p[i] * Rational(static_cast<long>(i)));
    return d;
}

// remainder of a by b (degrees via vector size)
Poly poly_rem(Poly a, const Poly& b) {
    trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        Rational f = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i)
            a[shift + i] -= f * b[i];
        a.pop_back();
        trim(a);
    }
    return a;
}

int sign_variations(const std::vector<Poly>& chain, const Rational& x) {
    int var = 0, last = 0;
    for (const auto& p : chain) {
        Rational v = eval_poly(p, x);
        int s = v == 0 ? 0 : (v > 0 ? 1 : -1);
        if (s == 0) continue;
        if (last != 0 && s != last) ++var;
        last = s;
    }
    return var;
}

std::vector<Poly> sturm_chain(const Poly& p) {
    std::vector<Poly> chain{p, derivative(p)};
    trim(chain[1]);
    while (chain.back().size() > 1) {
        Poly r = poly_rem(chain[chain.size() - 2], chain.back());
        if (r.empty()) break;
        for (auto& q : r) q = -q;
        chain.push_back(std::move(r));
    }
    return chain;
}

// divides by (x - root); remainder must vanish
bool deflate(Poly& p, const Rational& root) {
    Poly q(p.size() - 1);
    Rational carry = p.back();
    for (std::size_t i = p.size() - 1; i-- > 0;) {
        q[i] = carry;
        carry = p[i] + carry * root;
    }
    if (carry != 0) return false;
    p = std::move(q);
    return true;
}

// distinct integer roots of p located by Sturm bisection over (lo, hi]
void locate(const std::vector<Poly>& chain, const Poly& p, Rational lo,
            Rational hi, std::vector<long>& found) {
    int count = sign_variations(chain, lo) - sign_variations(chain, hi);
    if (count <= 0) return;
    if (hi - lo <= 1) {
        // at most one integer strictly inside a unit half-integer interval
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), hi.get_num().get_mpz_t(),
                   hi.get_den().get_mpz_t());
        Rational cand(fl);
        if (cand > lo && cand <= hi && eval_poly(p, cand) == 0)
            found.push_back(fl.get_si());
        return;
    }
    Rational mid = (lo + hi) / 2;
    // keep endpoints away from roots of the chain head
    while (eval_poly(p, mid) == 0) mid += Rational(1, 7919);
    locate(chain, p, lo, mid, found);
    locate(chain, p, mid, hi, found);
}

}  // namespace

std::vector<long> integer_roots(std::vector<Integer> ipoly,
                                std::size_t* residual_degree) {
    Poly p;
    for (const auto& z : ipoly) p.push_back(Rational(z));
    trim(p);
    if (p.empty()) throw std::invalid_argument("integer_roots: zero polynomial");
    std::vector<long> roots;
    // factors of x
    while (p.size() > 1 && p[0] == 0) {
        roots.push_back(0);
        p.erase(p.begin());
    }
    if (p.size() > 1) {
        // Cauchy bound: all roots have |x| < 1 + max |a_i| / |a_d|
        Rational maxabs(0);
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            Rational a = p[i] >= 0 ? p[i] : Rational(-p[i]);
            if (a > maxabs) maxabs = a;
        }
        Rational lead = p.back() > 0 ? p.back() : Rational(-p.back());
        Rational bound = 1 + maxabs / lead;
        mpz_class bz;
        mpz_cdiv_q(bz.get_mpz_t(), bound.get_num().get_mpz_t(),
                   bound.get_den().get_mpz_t());
        Rational lo = Rational(-bz) - Rational(1, 2);
        Rational hi = Rational(bz) + Rational(1, 2);
        while (eval_poly(p, lo) == 0) lo -= Rational(1, 7919);
        while (eval_poly(p, hi) == 0) hi += Rational(1, 7919);
        std::vector<long> distinct;
        locate(sturm_chain(p), p, lo, hi, distinct);
        for (long rt : distinct) {
            while (p.size() > 1 && deflate(p, Rational(rt))) roots.push_back(rt);
        }
    }
    if (residual_degree) *residual_degree = p.size() - 1;
    std::sort(roots.begin(), roots.end());
    return roots;
}

bool is_manifold_type(const DifferentialOperator& op) {
    if (op.coeffs.empty()) throw std::invalid_argument("empty operator");
    const auto& row = op.coeffs[0];
    bool nz = false;
    for (const auto& q : row) nz = nz || q != 0;
    if (!nz) throw std::invalid_argument("is_manifold_type: P_0 is zero");
    // scale to integers; roots are unchanged
    Integer den(1);
    for (const auto& q : row)
        if (q != 0)
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den().get_mpz_t());
    std::vector<Integer> ipoly;
    for (const auto& q : row) {
        Rational v = q * Rational(den);
        v.canonicalize();
        ipoly.push_back(v.get_num());
    }
    std::size_t residual = 0;
    integer_roots(std::move(ipoly), &residual);
    return residual == 0;
}

}  // namespace pfops
}  // namespace fano
