#include "fano/laurent.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fano {
namespace laurent {

void LaurentPolynomial::set(const Exponent& e, Rational c) {
    if (c == 0)
        terms_.erase(e);
    else
        terms_[e] = std::move(c);
}

LaurentPolynomial LaurentPolynomial::parse_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    LaurentPolynomial f;
    for (const auto& t : j.at("terms")) {
        const auto& ev = t.at("e");
        Exponent e{ev.at(0).get<long>(), ev.at(1).get<long>(),
                   ev.at(2).get<long>()};
        Rational c = fano::parse_rational(t.at("c").get<std::string>());
        if (f.terms_.count(e))
            throw std::invalid_argument("duplicate exponent in Laurent JSON");
        f.set(e, std::move(c));
    }
    return f;
}

LaurentPolynomial LaurentPolynomial::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str());
}

std::string LaurentPolynomial::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [e, c] : terms_) {
        terms.push_back({{"e", {e[0], e[1], e[2]}}, {"c", to_string(c)}});
    }
    return nlohmann::json{{"terms", terms}}.dump();
}

namespace {

struct SupportBox {
    Exponent lo{0, 0, 0}, hi{0, 0, 0};
};

SupportBox support_box(const LaurentPolynomial& f) {
    SupportBox box;
    bool first = true;
    for (const auto& [e, c] : f.terms()) {
        for (int i = 0; i < 3; ++i) {
            if (first || e[i] < box.lo[i]) box.lo[i] = e[i];
            if (first || e[i] > box.hi[i]) box.hi[i] = e[i];
        }
        first = false;
    }
    return box;
}

}  // namespace

Rational constant_term_power(const LaurentPolynomial& f, unsigned m) {
    if (m == 0) return Rational(1);
    SupportBox box = support_box(f);
    std::map<Exponent, Rational> cur;
    cur[{0, 0, 0}] = 1;
    for (unsigned step = 0; step < m; ++step) {
        unsigned remaining = m - step - 1;
        std::map<Exponent, Rational> nxt;
        for (const auto& [e1, c1] : cur) {
            for (const auto& [e2, c2] : f.terms()) {
                Exponent e{e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]};
                // prune exponents that cannot come back to the origin with
                // the multiplications still remaining
                bool reachable = true;
                for (int i = 0; i < 3; ++i) {
                    long lo = e[i] + static_cast<long>(remaining) * box.lo[i];
                    long hi = e[i] + static_cast<long>(remaining) * box.hi[i];
                    if (lo > 0 || hi < 0) {
                        reachable = false;
                        break;
                    }
                }
                if (!reachable) continue;
                auto [it, fresh] = nxt.try_emplace(e, c1 * c2);
                if (!fresh) it->second += c1 * c2;
            }
        }
        for (auto it = nxt.begin(); it != nxt.end();)
            it = it->second == 0 ? nxt.erase(it) : std::next(it);
        cur = std::move(nxt);
    }
    auto it = cur.find({0, 0, 0});
    return it == cur.end() ? Rational(0) : it->second;
}

PowerSeries period_series(const LaurentPolynomial& f, std::size_t order) {
    // one sparse-multiplication sweep; constant terms collected as we go
    PowerSeries out(order);
    out.coeff(0) = 1;
    if (order == 0 || f.terms().empty()) return out;
    SupportBox box = support_box(f);
    std::map<Exponent, Rational> cur;
    cur[{0, 0, 0}] = 1;
    for (std::size_t m = 1; m <= order; ++m) {
        unsigned remaining = static_cast<unsigned>(order - m);
        std::map<Exponent, Rational> nxt;
        for (const auto& [e1, c1] : cur) {
            for (const auto& [e2, c2] : f.terms()) {
                Exponent e{e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]};
                bool reachable = true;
                for (int i = 0; i < 3; ++i) {
                    long lo = e[i] + static_cast<long>(remaining) * box.lo[i];
                    long hi = e[i] + static_cast<long>(remaining) * box.hi[i];
                    if (lo > 0 || hi < 0) {
                        reachable = false;
                        break;
                    }
                }
                if (!reachable) continue;
                auto [it, fresh] = nxt.try_emplace(e, c1 * c2);
                if (!fresh) it->second += c1 * c2;
            }
        }
        for (auto it = nxt.begin(); it != nxt.end();)
            it = it->second == 0 ? nxt.erase(it) : std::next(it);
        cur = std::move(nxt);
        auto it = cur.find({0, 0, 0});
        if (it != cur.end()) out.coeff(m) = it->second;
    }
    return out;
}

MatchReport match_series(const LaurentPolynomial& f,
                         const PowerSeries& regularized_period,
                         std::size_t order) {
    PowerSeries pi = period_series(f, order);
    MatchReport rep;
    for (std::size_t d = 0; d <= order; ++d) {
        if (pi[d] != regularized_period[d]) {
            rep.match = false;
            rep.first_mismatch = d;
            rep.period_value = pi[d];
            rep.family_value = regularized_period[d];
            return rep;
        }
    }
    rep.match = true;
    return rep;
}

}  // namespace laurent
}  // namespace fano
