#include "fano/sumdsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "fano/polytope.hpp"

namespace fano {
namespace sumdsl {

// ================================================================ lexer

namespace {

struct Token {
    enum class Type { Ident, Number, Punct, End };
    Type type;
    std::string text;
    std::size_t pos;
};

class Lexer {
  public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }

    const Token& peek() const { return tok_; }

    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(tok_.pos, msg);
    }

  private:
    void advance() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
            ++i_;
        tok_.pos = i_;
        if (i_ >= s_.size()) {
            tok_ = {Token::Type::End, "", i_};
            return;
        }
        char c = s_[i_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_'))
                ++j;
            tok_ = {Token::Type::Ident, s_.substr(i_, j - i_), i_};
            i_ = j;
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i_;
            while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j])))
                ++j;
            tok_ = {Token::Type::Number, s_.substr(i_, j - i_), i_};
            i_ = j;
            return;
        }
        tok_ = {Token::Type::Punct, std::string(1, c), i_};
        ++i_;
    }

    const std::string& s_;
    std::size_t i_ = 0;
    Token tok_;
};

// ================================================================ parser
//
// spec    := block ('+' block)*
// block   := 'sum' '[' ident (',' ident)* ']' '{'
//              'constraints' ':' '[' (lin (',' lin)*)? ']' ';'
//              'degree' ':' lin ';'
//              'term' ':' expr ';'
//              'prefactor' ':' ('auto' | 'none') '}'
// expr    := mul (('+'|'-') mul)*
// mul     := pw (('*'|'/') pw)*
// pw      := unary ('^' (integer | '(' lin ')'))?
// unary   := '-' unary | atom
// atom    := number ('/' number)? | ident | 'fact' '(' lin ')'
//          | 'H' '(' lin ')' | '(' expr ')'
// lin     := an expr that must reduce to an integer affine form

class Parser {
  public:
    explicit Parser(const std::string& text) : lex_(text) {}

    SumSpec parse_spec() {
        SumSpec spec;
        bool first = true;
        std::optional<PrefactorMode> mode;
        for (;;) {
            auto [block, m] = parse_block();
            if (mode && *mode != m)
                lex_.fail("blocks disagree on prefactor mode");
            mode = m;
            spec.blocks.push_back(std::move(block));
            if (lex_.peek().type == Token::Type::Punct && lex_.peek().text == "+") {
                lex_.next();
                continue;
            }
            break;
            (void)first;
        }
        if (lex_.peek().type != Token::Type::End) lex_.fail("trailing input");
        spec.prefactor = *mode;
        return spec;
    }

  private:
    Lexer lex_;
    std::vector<std::string> vars_;

    void expect_punct(const std::string& p) {
        if (lex_.peek().type != Token::Type::Punct || lex_.peek().text != p)
            lex_.fail("expected '" + p + "'");
        lex_.next();
    }

    void expect_keyword(const std::string& k) {
        if (lex_.peek().type != Token::Type::Ident || lex_.peek().text != k)
            lex_.fail("expected '" + k + "'");
        lex_.next();
    }

    std::pair<SumBlock, PrefactorMode> parse_block() {
        SumBlock b;
        expect_keyword("sum");
        expect_punct("[");
        for (;;) {
            if (lex_.peek().type != Token::Type::Ident)
                lex_.fail("expected index variable name");
            std::string name = lex_.next().text;
            if (name == "fact" || name == "H" || name == "sum")
                throw ParseError(lex_.peek().pos, "reserved word used as index");
            if (std::find(b.vars.begin(), b.vars.end(), name) != b.vars.end())
                throw ParseError(lex_.peek().pos, "duplicate index variable");
            b.vars.push_back(name);
            if (lex_.peek().text == ",") {
                lex_.next();
                continue;
            }
            break;
        }
        expect_punct("]");
        vars_ = b.vars;
        expect_punct("{");
        expect_keyword("constraints");
        expect_punct(":");
        expect_punct("[");
        if (!(lex_.peek().type == Token::Type::Punct && lex_.peek().text == "]")) {
            for (;;) {
                b.constraints.push_back(parse_linear());
                if (lex_.peek().text == ",") {
                    lex_.next();
                    continue;
                }
                break;
            }
        }
        expect_punct("]");
        expect_punct(";");
        expect_keyword("degree");
        expect_punct(":");
        b.degree = parse_linear();
        expect_punct(";");
        expect_keyword("term");
        expect_punct(":");
        b.term = normalize(parse_expr());
        expect_punct(";");
        expect_keyword("prefactor");
        expect_punct(":");
        PrefactorMode mode;
        if (lex_.peek().type == Token::Type::Ident && lex_.peek().text == "auto")
            mode = PrefactorMode::Auto;
        else if (lex_.peek().type == Token::Type::Ident &&
                 lex_.peek().text == "none")
            mode = PrefactorMode::None;
        else
            lex_.fail("expected 'auto' or 'none'");
        lex_.next();
        expect_punct("}");
        return {std::move(b), mode};
    }

    std::size_t var_index(const std::string& name) {
        auto it = std::find(vars_.begin(), vars_.end(), name);
        if (it == vars_.end()) lex_.fail("unknown index variable '" + name + "'");
        return static_cast<std::size_t>(it - vars_.begin());
    }

    // --- linear forms (parsed directly; rejects nonlinear constructs)
    LinearForm parse_linear() { return parse_linear_sum(); }

    LinearForm parse_linear_sum() {
        LinearForm f = parse_linear_term(false);
        for (;;) {
            if (lex_.peek().type == Token::Type::Punct &&
                (lex_.peek().text == "+" || lex_.peek().text == "-")) {
                bool neg = lex_.next().text == "-";
                LinearForm g = parse_linear_term(neg);
                f.constant += g.constant;
                if (f.coeffs.size() < g.coeffs.size())
                    f.coeffs.resize(g.coeffs.size(), 0);
                for (std::size_t i = 0; i < g.coeffs.size(); ++i)
                    f.coeffs[i] += g.coeffs[i];
                continue;
            }
            break;
        }
        f.coeffs.resize(vars_.size(), 0);
        return f;
    }

    LinearForm parse_linear_term(bool negated) {
        // integer, var, integer '*' var, or '-' term
        long sign = negated ? -1 : 1;
        while (lex_.peek().type == Token::Type::Punct && lex_.peek().text == "-") {
            lex_.next();
            sign = -sign;
        }
        LinearForm f(vars_.size());
        if (lex_.peek().type == Token::Type::Number) {
            long n = std::stol(lex_.next().text);
            if (lex_.peek().type == Token::Type::Punct && lex_.peek().text == "*") {
                lex_.next();
                if (lex_.peek().type != Token::Type::Ident)
                    lex_.fail("expected index variable after coefficient");
                f.coeffs[var_index(lex_.next().text)] = sign * n;
            } else {
                f.constant = sign * n;
            }
            return f;
        }
        if (lex_.peek().type == Token::Type::Ident) {
            f.coeffs[var_index(lex_.next().text)] = sign;
            return f;
        }
        if (lex_.peek().type == Token::Type::Punct && lex_.peek().text == "(") {
            lex_.next();
            LinearForm inner = parse_linear_sum();
            expect_punct(")");
            if (sign < 0) {
                inner.constant = -inner.constant;
                for (auto& c : inner.coeffs) c = -c;
            }
            return inner;
        }
        lex_.fail("expected linear form");
    }

    // --- general term expressions
    TermExpr parse_expr() {
        TermExpr e = parse_mul();
        if (lex_.peek().type == Token::Type::Punct &&
            (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            TermExpr sum;
            sum.kind = TermExpr::Kind::Sum;
            sum.children.push_back(std::move(e));
            while (lex_.peek().type == Token::Type::Punct &&
                   (lex_.peek().text == "+" || lex_.peek().text == "-")) {
                bool neg = lex_.next().text == "-";
                TermExpr rhs = parse_mul();
                if (neg) {
                    TermExpr m;
                    m.kind = TermExpr::Kind::Product;
                    TermExpr c;
                    c.kind = TermExpr::Kind::Constant;
                    c.value = -1;
                    m.children.push_back(std::move(c));
                    m.children.push_back(std::move(rhs));
                    rhs = std::move(m);
                }
                sum.children.push_back(std::move(rhs));
            }
            return sum;
        }
        return e;
    }

    TermExpr parse_mul() {
        TermExpr e = parse_pow();
        if (lex_.peek().type == Token::Type::Punct &&
            (lex_.peek().text == "*" || lex_.peek().text == "/")) {
            TermExpr prod;
            prod.kind = TermExpr::Kind::Product;
            prod.children.push_back(std::move(e));
            while (lex_.peek().type == Token::Type::Punct &&
                   (lex_.peek().text == "*" || lex_.peek().text == "/")) {
                bool div = lex_.next().text == "/";
                TermExpr rhs = parse_pow();
                if (div) {
                    TermExpr inv;
                    inv.kind = TermExpr::Kind::Inverse;
                    inv.children.push_back(std::move(rhs));
                    rhs = std::move(inv);
                }
                prod.children.push_back(std::move(rhs));
            }
            return prod;
        }
        return e;
    }

    TermExpr parse_pow() {
        TermExpr base = parse_unary();
        if (lex_.peek().type == Token::Type::Punct && lex_.peek().text == "^") {
            lex_.next();
            if (lex_.peek().type == Token::Type::Number) {
                long k = std::stol(lex_.next().text);
                TermExpr p;
                p.kind = TermExpr::Kind::Power;
                p.exponent = k;
                p.children.push_back(std::move(base));
                return p;
            }
            if (lex_.peek().type == Token::Type::Punct && lex_.peek().text == "(") {
                // (-1)^(linear form)
                lex_.next();
                LinearForm f = parse_linear();
                expect_punct(")");
                if (base.kind != TermExpr::Kind::Constant ||
                    (base.value != -1 && base.value != 1))
                    lex_.fail("only (-1) may be raised to a linear form");
                TermExpr s;
                if (base.value == 1) {
                    s.kind = TermExpr::Kind::Constant;
                    s.value = 1;
                } else {
                    s.kind = TermExpr::Kind::Sign;
                    s.form = std::move(f);
                }
                return s;
            }
            lex_.fail("expected integer or parenthesized linear exponent");
        }
        return base;
    }

    TermExpr parse_unary() {
        if (lex_.peek().type == Token::Type::Punct && lex_.peek().text == "-") {
            lex_.next();
            TermExpr inner = parse_unary();
            if (inner.kind == TermExpr::Kind::Constant) {
                inner.value = -inner.value;
                return inner;
            }
            TermExpr m;
            m.kind = TermExpr::Kind::Product;
            TermExpr c;
            c.kind = TermExpr::Kind::Constant;
            c.value = -1;
            m.children.push_back(std::move(c));
            m.children.push_back(std::move(inner));
            return m;
        }
        return parse_atom();
    }

    TermExpr parse_atom() {
        const Token& t = lex_.peek();
        if (t.type == Token::Type::Number) {
            std::string num = lex_.next().text;
            TermExpr e;
            e.kind = TermExpr::Kind::Constant;
            e.value = parse_rational(num);
            return e;
        }
        if (t.type == Token::Type::Ident) {
            if (t.text == "fact" || t.text == "H") {
                std::string fn = lex_.next().text;
                expect_punct("(");
                LinearForm f = parse_linear();
                expect_punct(")");
                TermExpr e;
                e.kind = fn == "fact" ? TermExpr::Kind::Factorial
                                      : TermExpr::Kind::Harmonic;
                e.form = std::move(f);
                return e;
            }
            TermExpr e;
            e.kind = TermExpr::Kind::Linear;
            e.form = LinearForm(vars_.size());
            e.form.coeffs[var_index(lex_.next().text)] = 1;
            return e;
        }
        if (t.type == Token::Type::Punct && t.text == "(") {
            lex_.next();
            TermExpr e = parse_expr();
            expect_punct(")");
            return e;
        }
        lex_.fail("expected term");
    }

    // Flattens nested sums/products and rewrites 1/fact into
    // InverseFactorial; fixed point of parse(serialize(.)).
    static TermExpr normalize(TermExpr e) {
        for (auto& c : e.children) c = normalize(std::move(c));
        switch (e.kind) {
            case TermExpr::Kind::Inverse: {
                TermExpr& c = e.children[0];
                if (c.kind == TermExpr::Kind::Factorial) {
                    c.kind = TermExpr::Kind::InverseFactorial;
                    return std::move(c);
                }
                if (c.kind == TermExpr::Kind::InverseFactorial) {
                    c.kind = TermExpr::Kind::Factorial;
                    return std::move(c);
                }
                if (c.kind == TermExpr::Kind::Constant) {
                    if (c.value == 0)
                        throw EvalError("division by zero constant");
                    c.value = 1 / c.value;
                    return std::move(c);
                }
                if (c.kind == TermExpr::Kind::Sign) return std::move(c);
                if (c.kind == TermExpr::Kind::Product) {
                    // 1/(a*b) -> (1/a)*(1/b)
                    TermExpr prod;
                    prod.kind = TermExpr::Kind::Product;
                    for (auto& g : c.children) {
                        TermExpr inv;
                        inv.kind = TermExpr::Kind::Inverse;
                        inv.children.push_back(std::move(g));
                        prod.children.push_back(normalize(std::move(inv)));
                    }
                    return normalize(std::move(prod));
                }
                if (c.kind == TermExpr::Kind::Power) {
                    TermExpr inv;
                    inv.kind = TermExpr::Kind::Inverse;
                    inv.children.push_back(std::move(c.children[0]));
                    c.children[0] = normalize(std::move(inv));
                    return std::move(c);
                }
                return e;
            }
            case TermExpr::Kind::Product: {
                std::vector<TermExpr> flat;
                for (auto& c : e.children) {
                    if (c.kind == TermExpr::Kind::Product)
                        for (auto& g : c.children) flat.push_back(std::move(g));
                    else
                        flat.push_back(std::move(c));
                }
                if (flat.size() == 1) return std::move(flat[0]);
                e.children = std::move(flat);
                return e;
            }
            case TermExpr::Kind::Sum: {
                std::vector<TermExpr> flat;
                for (auto& c : e.children) {
                    if (c.kind == TermExpr::Kind::Sum)
                        for (auto& g : c.children) flat.push_back(std::move(g));
                    else
                        flat.push_back(std::move(c));
                }
                if (flat.size() == 1) return std::move(flat[0]);
                e.children = std::move(flat);
                return e;
            }
            case TermExpr::Kind::Power:
                if (e.exponent == 1) return std::move(e.children[0]);
                if (e.exponent == 0) {
                    TermExpr one;
                    one.kind = TermExpr::Kind::Constant;
                    one.value = 1;
                    return one;
                }
                if (e.exponent < 0) {
                    TermExpr inv;
                    inv.kind = TermExpr::Kind::Inverse;
                    e.exponent = -e.exponent;
                    inv.children.push_back(std::move(e));
                    return normalize(std::move(inv));
                }
                return e;
            default:
                return e;
        }
    }
};

}  // namespace

SumSpec parse(const std::string& text) { return Parser(text).parse_spec(); }

// ============================================================= serializer

std::string serialize(const LinearForm& f, const std::vector<std::string>& vars) {
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        long c = f.coeffs[i];
        if (c == 0) continue;
        if (first) {
            if (c < 0) out << "-";
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        long a = c < 0 ? -c : c;
        if (a != 1) out << a << "*";
        out << vars[i];
        first = false;
    }
    if (f.constant != 0 || first) {
        if (first)
            out << f.constant;
        else
            out << (f.constant < 0 ? " - " : " + ")
                << (f.constant < 0 ? -f.constant : f.constant);
    }
    return out.str();
}

namespace {

bool lf_is_single_var(const LinearForm& f) {
    if (f.constant != 0) return false;
    int nz = 0;
    for (long c : f.coeffs)
        if (c != 0) {
            if (c != 1) return false;
            ++nz;
        }
    return nz == 1;
}

// context precedence: 0 top, 1 additive operand, 2 factor, 3 power base
void print_expr(std::ostringstream& out, const TermExpr& e,
                const std::vector<std::string>& vars, int ctx) {
    using K = TermExpr::Kind;
    switch (e.kind) {
        case K::Constant: {
            bool neg = e.value < 0;
            bool frac = e.value.get_den() != 1;
            bool paren = (neg && ctx >= 2) || (frac && ctx >= 3);
            if (paren) out << "(";
            out << e.value.get_str();
            if (paren) out << ")";
            return;
        }
        case K::Linear: {
            if (lf_is_single_var(e.form)) {
                out << serialize(e.form, vars);
            } else {
                out << "(" << serialize(e.form, vars) << ")";
            }
            return;
        }
        case K::Factorial:
            out << "fact(" << serialize(e.form, vars) << ")";
            return;
        case K::InverseFactorial:
            if (ctx >= 3) out << "(";
            out << "1 / fact(" << serialize(e.form, vars) << ")";
            if (ctx >= 3) out << ")";
            return;
        case K::Harmonic:
            out << "H(" << serialize(e.form, vars) << ")";
            return;
        case K::Sign:
            out << "(-1)^(" << serialize(e.form, vars) << ")";
            return;
        case K::Sum: {
            bool paren = ctx >= 2;
            if (paren) out << "(";
            for (std::size_t i = 0; i < e.children.size(); ++i) {
                if (i) out << " + ";
                print_expr(out, e.children[i], vars, 1);
            }
            if (paren) out << ")";
            return;
        }
        case K::Product: {
            bool paren = ctx >= 3;
            if (paren) out << "(";
            for (std::size_t i = 0; i < e.children.size(); ++i) {
                const TermExpr& c = e.children[i];
                if (i && c.kind == K::InverseFactorial) {
                    out << " / fact(" << serialize(c.form, vars) << ")";
                    continue;
                }
                if (i && c.kind == K::Inverse) {
                    out << " / ";
                    print_expr(out, c.children[0], vars, 3);
                    continue;
                }
                if (i && c.kind == K::Power &&
                    c.children[0].kind == K::InverseFactorial) {
                    out << " / fact("
                        << serialize(c.children[0].form, vars) << ")^"
                        << c.exponent;
                    continue;
                }
                if (i) out << " * ";
                print_expr(out, c, vars, 2);
            }
            if (paren) out << ")";
            return;
        }
        case K::Power:
            if (e.children[0].kind == K::InverseFactorial) {
                // leading position in a product (or standalone)
                if (ctx >= 3) out << "(";
                out << "1 / fact(" << serialize(e.children[0].form, vars)
                    << ")^" << e.exponent;
                if (ctx >= 3) out << ")";
                return;
            }
            print_expr(out, e.children[0], vars, 3);
            out << "^" << e.exponent;
            return;
        case K::Inverse:
            if (ctx >= 3) out << "(";
            out << "1 / ";
            print_expr(out, e.children[0], vars, 3);
            if (ctx >= 3) out << ")";
            return;
    }
}

}  // namespace

std::string serialize(const SumSpec& spec) {
    std::ostringstream out;
    for (std::size_t bi = 0; bi < spec.blocks.size(); ++bi) {
        const SumBlock& b = spec.blocks[bi];
        if (bi) out << " + ";
        out << "sum[";
        for (std::size_t i = 0; i < b.vars.size(); ++i) {
            if (i) out << ", ";
            out << b.vars[i];
        }
        out << "] { constraints: [";
        for (std::size_t i = 0; i < b.constraints.size(); ++i) {
            if (i) out << ", ";
            out << serialize(b.constraints[i], b.vars);
        }
        out << "]; degree: " << serialize(b.degree, b.vars) << "; term: ";
        print_expr(out, b.term, b.vars, 0);
        out << "; prefactor: "
            << (spec.prefactor == PrefactorMode::Auto ? "auto" : "none") << " }";
    }
    return out.str();
}

// =========================================================== boundedness

namespace {

// rows of the recession system: homogeneous constraints, degree == 0
FmSystem recession_system(const SumBlock& b) {
    FmSystem sys(b.vars.size());
    for (const auto& c : b.constraints) {
        LinearForm h = c;
        h.constant = 0;
        sys.add_row(h);
    }
    LinearForm d = b.degree;
    d.constant = 0;
    sys.add_row(d);
    sys.add_row_negated(d);
    return sys;
}

}  // namespace

BoundsReport check_bounded(const SumSpec& spec) {
    BoundsReport report;
    report.certificates.resize(spec.blocks.size());
    for (std::size_t bi = 0; bi < spec.blocks.size(); ++bi) {
        const SumBlock& b = spec.blocks[bi];
        std::size_t k = b.vars.size();
        // 1. recession-cone rays: reject if any nonzero direction exists
        for (std::size_t i = 0; i < k; ++i) {
            for (int sign : {+1, -1}) {
                FmSystem sys = recession_system(b);
                std::vector<Rational> row(k, Rational(0));
                row[i] = sign;
                sys.add_row(std::move(row), Rational(-1));  // sign*x_i >= 1
                if (auto pt = find_integer_point(sys)) {
                    report.bounded = false;
                    report.witness = *pt;
                    report.witness_block = bi;
                    return report;
                }
            }
        }
        // 2. upper-bound certificates: eliminate all other variables from
        //    {constraints >= 0, B - degree >= 0, degree >= 0} over (x, B)
        for (std::size_t i = 0; i < k; ++i) {
            FmSystem sys(k + 1);
            for (const auto& c : b.constraints) sys.add_row(c);
            {
                std::vector<Rational> up(k + 1);
                for (std::size_t j = 0; j < k; ++j) up[j] = -b.degree.coeffs[j];
                up[k] = 1;
                sys.add_row(std::move(up), Rational(-b.degree.constant));
                std::vector<Rational> lo(k + 1);
                for (std::size_t j = 0; j < k; ++j) lo[j] = b.degree.coeffs[j];
                sys.add_row(std::move(lo), Rational(b.degree.constant));
            }
            FmSystem cur = sys;
            for (std::size_t j = k; j-- > 0;)
                if (j != i) cur = cur.eliminated(j);
            const FmRow* best = nullptr;
            for (const auto& r : cur.rows())
                if (r.a[i] < 0 && (!best || r.a[i] < best->a[i])) best = &r;
            if (!best)
                throw std::logic_error(
                    "bounded cone without an upper-bound row");
            // scale to integers
            Integer den(1);
            auto lcm_in = [&](const Rational& q) {
                mpz_lcm(den.get_mpz_t(), den.get_mpz_t(),
                        q.get_den().get_mpz_t());
            };
            lcm_in(best->a[i]);
            lcm_in(best->a[k]);
            lcm_in(best->c);
            for (const auto& w : best->weights) lcm_in(w);
            BoundCertificate cert;
            cert.mu = static_cast<long>(
                Rational(-best->a[i] * den).get_num().get_si());
            cert.degree_coeff =
                static_cast<long>(Rational(best->a[k] * den).get_num().get_si());
            cert.constant =
                static_cast<long>(Rational(best->c * den).get_num().get_si());
            for (const auto& w : best->weights)
                cert.weights.push_back(
                    static_cast<long>(Rational(w * den).get_num().get_si()));
            report.certificates[bi].push_back(std::move(cert));
        }
    }
    report.bounded = true;
    return report;
}

// ============================================================ evaluation

Rational eval_term(const TermExpr& e, std::span<const long> x,
                   std::vector<Integer>& facts, HarmonicCache& harm) {
    using K = TermExpr::Kind;
    auto fact_of = [&](long n) -> const Integer& {
        if (n < 0)
            throw EvalError("negative factorial argument at index tuple");
        while (static_cast<long>(facts.size()) <= n) {
            Integer next = facts.back() * static_cast<long>(facts.size());
            facts.push_back(std::move(next));
        }
        return facts[static_cast<std::size_t>(n)];
    };
    switch (e.kind) {
        case K::Constant:
            return e.value;
        case K::Linear:
            return Rational(e.form.eval(x));
        case K::Factorial:
            return Rational(fact_of(e.form.eval(x)));
        case K::InverseFactorial: {
            Rational r(1);
            r /= Rational(fact_of(e.form.eval(x)));
            return r;
        }
        case K::Sign:
            return (e.form.eval(x) % 2 == 0) ? Rational(1) : Rational(-1);
        case K::Harmonic: {
            long n = e.form.eval(x);
            if (n < 0)
                throw EvalError("negative harmonic argument at index tuple");
            return harm(n);
        }
        case K::Sum: {
            Rational r(0);
            for (const auto& c : e.children) r += eval_term(c, x, facts, harm);
            return r;
        }
        case K::Product: {
            Rational r(1);
            for (const auto& c : e.children) {
                r *= eval_term(c, x, facts, harm);
                if (r == 0) return r;
            }
            return r;
        }
        case K::Power: {
            Rational base = eval_term(e.children[0], x, facts, harm);
            Rational r(1);
            for (long i = 0; i < e.exponent; ++i) r *= base;
            return r;
        }
        case K::Inverse: {
            Rational v = eval_term(e.children[0], x, facts, harm);
            if (v == 0) throw EvalError("division by zero at index tuple");
            return 1 / v;
        }
    }
    throw EvalError("corrupt term expression");
}

PowerSeries evaluate_raw(const SumSpec& spec, std::size_t order) {
    auto bounds = check_bounded(spec);
    if (!bounds.bounded) {
        std::ostringstream msg;
        msg << "unbounded summation; witness direction (";
        for (std::size_t i = 0; i < bounds.witness.size(); ++i)
            msg << (i ? "," : "") << bounds.witness[i];
        msg << ")";
        throw UnboundedError(msg.str(), bounds.witness);
    }
    PowerSeries out(order);
    std::vector<Integer> facts{Integer(1)};
    HarmonicCache harm;
    for (const auto& b : spec.blocks) {
        std::size_t k = b.vars.size();
        // variables (d, x...) with degree(x) == d, 0 <= d <= order
        FmSystem sys(k + 1);
        for (const auto& c : b.constraints) {
            std::vector<Rational> row(k + 1);
            for (std::size_t j = 0; j < k; ++j) row[j + 1] = c.coeffs[j];
            sys.add_row(std::move(row), Rational(c.constant));
        }
        {
            std::vector<Rational> eq(k + 1);
            eq[0] = -1;
            for (std::size_t j = 0; j < k; ++j) eq[j + 1] = b.degree.coeffs[j];
            sys.add_row(eq, Rational(b.degree.constant));
            for (auto& q : eq) q = -q;
            sys.add_row(std::move(eq), Rational(-b.degree.constant));
        }
        {
            std::vector<Rational> row(k + 1);
            row[0] = 1;
            sys.add_row(std::move(row), Rational(0));  // d >= 0
            std::vector<Rational> row2(k + 1);
            row2[0] = -1;
            sys.add_row(std::move(row2), Rational(order));  // d <= order
        }
        EnumerationCascade cascade(sys);
        std::vector<long> tuple(k);
        cascade.for_each([&](std::span<const long> pt) {
            for (std::size_t j = 0; j < k; ++j) tuple[j] = pt[j + 1];
            // the cascade is complete; re-check exactly before accumulating
            long d = b.degree.eval(tuple);
            if (d != pt[0]) return;
            for (const auto& c : b.constraints)
                if (c.eval(tuple) < 0) return;
            if (d < 0 || static_cast<std::size_t>(d) > order) return;
            out.coeff(static_cast<std::size_t>(d)) +=
                eval_term(b.term, tuple, facts, harm);
        });
    }
    return out;
}

PowerSeries evaluate(const SumSpec& spec, std::size_t order) {
    PowerSeries raw = evaluate_raw(spec, order);
    if (spec.prefactor == PrefactorMode::Auto)
        return normalize_prefactor(raw).series;
    return raw;
}

}  // namespace sumdsl
}  // namespace fano
