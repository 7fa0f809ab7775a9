#include "fano/engines.hpp"

#include <stdexcept>

#include "fano/polytope.hpp"

namespace fano {
namespace engines {

namespace {

LinearForm pairing_form(const WeightData& w, const std::vector<long>& cls) {
    LinearForm f(w.rank());
    for (std::size_t j = 0; j < w.rank(); ++j) f.coeffs[j] = cls[j];
    return f;
}

LinearForm column_form(const WeightData& w, std::size_t i) {
    LinearForm f(w.rank());
    for (std::size_t j = 0; j < w.rank(); ++j) f.coeffs[j] = w.matrix[j][i];
    return f;
}

// True iff cls pairs <= bound somewhere on the nonzero cone
// {<beta, D_i> >= 0 for all i}; used with bound = 0 for strict positivity
// and bound = -1 for nonnegativity checks.
bool cone_reaches(const WeightData& w, const std::vector<long>& cls, long bound) {
    std::size_t k = w.rank();
    for (std::size_t i = 0; i < k; ++i) {
        for (int sign : {+1, -1}) {
            FmSystem sys(k);
            for (std::size_t col = 0; col < w.columns(); ++col)
                sys.add_row(column_form(w, col));
            // cls . beta <= bound
            std::vector<Rational> row(k);
            for (std::size_t j = 0; j < k; ++j) row[j] = -cls[j];
            sys.add_row(std::move(row), Rational(bound));
            // nonzero: sign * beta_i >= 1
            std::vector<Rational> nz(k);
            nz[i] = sign;
            sys.add_row(std::move(nz), Rational(-1));
            if (find_integer_point(sys)) return true;
        }
    }
    return false;
}

}  // namespace

void WeightData::validate() const {
    if (matrix.empty() || matrix[0].empty())
        throw std::invalid_argument("weight data: empty matrix");
    for (const auto& row : matrix)
        if (row.size() != columns())
            throw std::invalid_argument("weight data: ragged matrix");
    if (anticanonical.size() != rank() || degree_class.size() != rank())
        throw std::invalid_argument("weight data: class vector arity");
    for (std::size_t j = 0; j < rank(); ++j) {
        long colsum = 0;
        for (std::size_t i = 0; i < columns(); ++i) colsum += matrix[j][i];
        if (colsum != anticanonical[j])
            throw std::invalid_argument(
                "weight data: anticanonical is not the column sum");
        long expect = anticanonical[j];
        for (const auto& rho : bundle_rows) expect -= rho[j];
        if (expect != degree_class[j])
            throw std::invalid_argument(
                "weight data: degree_class != anticanonical - bundles");
    }
    for (const auto& rho : bundle_rows)
        if (rho.size() != rank())
            throw std::invalid_argument("weight data: bundle row arity");
    // the Fano / ampleness hypothesis: degree_class > 0 away from the origin
    if (cone_reaches(*this, degree_class, 0))
        throw std::invalid_argument(
            "weight data: degree class is not strictly positive on the cone");
    // bundle rows must pair nonnegatively with the cone
    for (const auto& rho : bundle_rows)
        if (cone_reaches(*this, rho, -1))
            throw std::invalid_argument(
                "weight data: bundle row is negative somewhere on the cone");
}

sumdsl::SumSpec toric_period(const WeightData& w) {
    if (!w.bundle_rows.empty())
        throw std::invalid_argument("toric_period: bundle rows must be empty");
    w.validate();
    sumdsl::SumBlock b;
    for (std::size_t j = 0; j < w.rank(); ++j)
        b.vars.push_back("x" + std::to_string(j));
    for (std::size_t i = 0; i < w.columns(); ++i)
        b.constraints.push_back(column_form(w, i));
    b.degree = pairing_form(w, w.anticanonical);
    sumdsl::TermExpr prod;
    prod.kind = sumdsl::TermExpr::Kind::Product;
    for (std::size_t i = 0; i < w.columns(); ++i) {
        sumdsl::TermExpr f;
        f.kind = sumdsl::TermExpr::Kind::InverseFactorial;
        f.form = column_form(w, i);
        prod.children.push_back(std::move(f));
    }
    b.term = std::move(prod);
    sumdsl::SumSpec spec;
    spec.blocks.push_back(std::move(b));
    spec.prefactor = sumdsl::PrefactorMode::None;
    return spec;
}

sumdsl::SumSpec toric_ci_period(const WeightData& w) {
    w.validate();
    sumdsl::SumBlock b;
    for (std::size_t j = 0; j < w.rank(); ++j)
        b.vars.push_back("x" + std::to_string(j));
    for (std::size_t i = 0; i < w.columns(); ++i)
        b.constraints.push_back(column_form(w, i));
    b.degree = pairing_form(w, w.degree_class);
    sumdsl::TermExpr prod;
    prod.kind = sumdsl::TermExpr::Kind::Product;
    for (const auto& rho : w.bundle_rows) {
        sumdsl::TermExpr f;
        f.kind = sumdsl::TermExpr::Kind::Factorial;
        f.form = pairing_form(w, rho);
        prod.children.push_back(std::move(f));
    }
    for (std::size_t i = 0; i < w.columns(); ++i) {
        sumdsl::TermExpr f;
        f.kind = sumdsl::TermExpr::Kind::InverseFactorial;
        f.form = column_form(w, i);
        prod.children.push_back(std::move(f));
    }
    b.term = prod.children.size() == 1 ? std::move(prod.children[0])
                                       : std::move(prod);
    sumdsl::SumSpec spec;
    spec.blocks.push_back(std::move(b));
    spec.prefactor = w.bundle_rows.empty() ? sumdsl::PrefactorMode::None
                                           : sumdsl::PrefactorMode::Auto;
    return spec;
}

void WpsSpec::validate() const {
    if (weights.empty()) throw std::invalid_argument("wps: no weights");
    long sum = 0;
    for (long w : weights) {
        if (w <= 0) throw std::invalid_argument("wps: weights must be positive");
        sum += w;
    }
    for (long d : degrees) {
        if (d <= 0) throw std::invalid_argument("wps: degrees must be positive");
        sum -= d;
    }
    if (sum != -k) throw std::invalid_argument("wps: k != sum d - sum w");
    if (-k <= 0) throw std::invalid_argument("wps: -k must be positive");
    for (long w : weights)
        for (long d : degrees)
            if (d % w != 0)
                throw std::invalid_argument(
                    "wps: weight " + std::to_string(w) +
                    " does not divide degree " + std::to_string(d));
}

sumdsl::SumSpec wps_ci_period(const WpsSpec& s) {
    s.validate();
    sumdsl::SumBlock b;
    b.vars = {"d"};
    LinearForm nonneg(1);
    nonneg.coeffs[0] = 1;
    b.constraints.push_back(nonneg);
    b.degree = LinearForm(1);
    b.degree.coeffs[0] = -s.k;
    sumdsl::TermExpr prod;
    prod.kind = sumdsl::TermExpr::Kind::Product;
    for (long dj : s.degrees) {
        sumdsl::TermExpr f;
        f.kind = sumdsl::TermExpr::Kind::Factorial;
        f.form = LinearForm(1);
        f.form.coeffs[0] = dj;
        prod.children.push_back(std::move(f));
    }
    for (long wi : s.weights) {
        sumdsl::TermExpr f;
        f.kind = sumdsl::TermExpr::Kind::InverseFactorial;
        f.form = LinearForm(1);
        f.form.coeffs[0] = wi;
        prod.children.push_back(std::move(f));
    }
    b.term = std::move(prod);
    sumdsl::SumSpec spec;
    spec.blocks.push_back(std::move(b));
    spec.prefactor = sumdsl::PrefactorMode::Auto;
    return spec;
}

PowerSeries product_period(const PowerSeries& a, const PowerSeries& b) {
    if (!a.is_normalized_period() || !b.is_normalized_period())
        throw std::invalid_argument(
            "product_period: factors must be normalized quantum periods");
    return multiply(a, b);
}

}  // namespace engines
}  // namespace fano
