#include "fano/catalog.hpp"

#include <chrono>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include <json.hpp>

namespace fano {
namespace catalog {

using nlohmann::json;

namespace {

engines::WeightData weight_data_from_json(const json& j) {
    engines::WeightData w;
    for (const auto& row : j.at("matrix"))
        w.matrix.push_back(row.get<std::vector<long>>());
    for (const auto& row : j.at("bundle_rows"))
        w.bundle_rows.push_back(row.get<std::vector<long>>());
    w.anticanonical = j.at("anticanonical").get<std::vector<long>>();
    w.degree_class = j.at("degree_class").get<std::vector<long>>();
    return w;
}

json weight_data_to_json(const engines::WeightData& w) {
    return json{{"matrix", w.matrix},
                {"bundle_rows", w.bundle_rows},
                {"anticanonical", w.anticanonical},
                {"degree_class", w.degree_class}};
}

}  // namespace

int family_rank(const std::string& id) {
    if (id.empty() || !std::isdigit(static_cast<unsigned char>(id[0]))) return 0;
    auto dash = id.find('-');
    if (dash == std::string::npos) return 1;
    return std::stoi(id.substr(0, dash));
}

Catalog Catalog::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open catalog: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

Catalog Catalog::parse(const std::string& text) {
    json root = json::parse(text);
    Catalog cat;
    for (const auto& j : root.at("families")) {
        FamilyRecord rec;
        rec.id = j.at("id").get<std::string>();
        rec.name = j.at("name").get<std::string>();
        rec.dimension = j.at("dimension").get<int>();
        const json& c = j.at("construction");
        std::string type = c.at("type").get<std::string>();
        if (type == "toric" || type == "toric_ci") {
            rec.is_toric_ci = type == "toric_ci";
            rec.construction = weight_data_from_json(c.at("weight_data"));
        } else if (type == "wps_ci") {
            engines::WpsSpec w;
            w.weights = c.at("weights").get<std::vector<long>>();
            w.degrees = c.at("degrees").get<std::vector<long>>();
            w.k = c.at("k").get<long>();
            rec.construction = std::move(w);
        } else if (type == "grassmann") {
            grassmann::GrassmannBundleSpec g;
            g.r = c.at("r").get<int>();
            g.n = c.at("n").get<int>();
            g.a = c.at("a").get<long>();
            g.b = c.at("b").get<long>();
            g.c = c.at("c").get<long>();
            g.d = c.at("d").get<long>();
            g.e = c.at("e").get<long>();
            if (c.at("k").get<long>() != g.k())
                throw std::runtime_error(rec.id + ": stored k is inconsistent");
            rec.construction = g;
        } else if (type == "closed_form") {
            rec.construction = sumdsl::parse(c.at("spec").get<std::string>());
        } else if (type == "product") {
            Product p;
            p.factors = c.at("factors").get<std::vector<std::string>>();
            rec.construction = std::move(p);
        } else {
            throw std::runtime_error("unknown construction type: " + type);
        }
        for (const auto& v : j.at("expected_regularized"))
            rec.expected_regularized.push_back(
                parse_rational(v.get<std::string>()));
        if (j.contains("prefactor"))
            rec.prefactor = parse_rational(j.at("prefactor").get<std::string>());
        if (j.contains("minkowski_id"))
            rec.minkowski_id = j.at("minkowski_id").get<long>();
        rec.very_ample = j.at("very_ample").get<bool>();
        if (j.contains("notes")) rec.notes = j.at("notes").get<std::string>();
        if (j.contains("closed_form"))
            rec.closed_form = j.at("closed_form").get<std::string>();
        if (j.contains("scalar_form"))
            rec.scalar_form = j.at("scalar_form").get<std::string>();
        cat.index_[rec.id] = cat.families_.size();
        cat.families_.push_back(std::move(rec));
    }
    cat.validate();
    return cat;
}

std::string Catalog::to_json() const {
    json fams = json::array();
    for (const auto& rec : families_) {
        json j{{"id", rec.id},
               {"name", rec.name},
               {"dimension", rec.dimension}};
        json c;
        if (const auto* w = std::get_if<engines::WeightData>(&rec.construction)) {
            c["type"] = rec.is_toric_ci ? "toric_ci" : "toric";
            c["weight_data"] = weight_data_to_json(*w);
        } else if (const auto* w = std::get_if<engines::WpsSpec>(&rec.construction)) {
            c = json{{"type", "wps_ci"},
                     {"weights", w->weights},
                     {"degrees", w->degrees},
                     {"k", w->k}};
        } else if (const auto* g = std::get_if<grassmann::GrassmannBundleSpec>(
                       &rec.construction)) {
            c = json{{"type", "grassmann"}, {"r", g->r}, {"n", g->n},
                     {"a", g->a},           {"b", g->b}, {"c", g->c},
                     {"d", g->d},           {"e", g->e}, {"k", g->k()}};
        } else if (const auto* s = std::get_if<sumdsl::SumSpec>(&rec.construction)) {
            c = json{{"type", "closed_form"}, {"spec", sumdsl::serialize(*s)}};
        } else if (const auto* p = std::get_if<Product>(&rec.construction)) {
            c = json{{"type", "product"}, {"factors", p->factors}};
        }
        j["construction"] = c;
        json exp = json::array();
        for (const auto& q : rec.expected_regularized) exp.push_back(to_string(q));
        j["expected_regularized"] = exp;
        if (rec.prefactor) j["prefactor"] = to_string(*rec.prefactor);
        if (rec.minkowski_id) j["minkowski_id"] = *rec.minkowski_id;
        j["very_ample"] = rec.very_ample;
        if (!rec.notes.empty()) j["notes"] = rec.notes;
        if (rec.closed_form) j["closed_form"] = *rec.closed_form;
        if (rec.scalar_form) j["scalar_form"] = *rec.scalar_form;
        fams.push_back(std::move(j));
    }
    return json{{"families", fams}}.dump(1);
}

void Catalog::validate() const {
    std::set<long> minks;
    for (const auto& rec : families_) {
        if (rec.expected_regularized.empty() ||
            rec.expected_regularized[0] != 1)
            throw std::runtime_error(rec.id + ": expected[0] must be 1");
        if (rec.expected_regularized.size() >= 2 &&
            rec.expected_regularized[1] != 0)
            throw std::runtime_error(rec.id + ": expected[1] must be 0");
        if (rec.minkowski_id.has_value() != rec.very_ample)
            throw std::runtime_error(rec.id +
                                     ": minkowski_id present iff very ample");
        if (rec.minkowski_id && !minks.insert(*rec.minkowski_id).second)
            throw std::runtime_error(rec.id + ": duplicate minkowski_id");
        if (const auto* p = std::get_if<Product>(&rec.construction))
            for (const auto& f : p->factors)
                if (!index_.count(f))
                    throw std::runtime_error(rec.id +
                                             ": unresolved product factor " + f);
    }
}

const FamilyRecord& Catalog::record(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::out_of_range("unknown family id: " + id);
    return families_[it->second];
}

PowerSeries Catalog::quantum_period(const std::string& id,
                                    std::size_t order) const {
    const FamilyRecord& rec = record(id);
    if (const auto* w = std::get_if<engines::WeightData>(&rec.construction)) {
        auto spec = rec.is_toric_ci ? engines::toric_ci_period(*w)
                                    : engines::toric_period(*w);
        return sumdsl::evaluate(spec, order);
    }
    if (const auto* w = std::get_if<engines::WpsSpec>(&rec.construction))
        return sumdsl::evaluate(engines::wps_ci_period(*w), order);
    if (const auto* g =
            std::get_if<grassmann::GrassmannBundleSpec>(&rec.construction))
        return grassmann::grassmann_period(*g, order);
    if (const auto* s = std::get_if<sumdsl::SumSpec>(&rec.construction))
        return sumdsl::evaluate(*s, order);
    const auto& p = std::get<Product>(rec.construction);
    PowerSeries acc = PowerSeries::one(order);
    for (const auto& f : p.factors)
        acc = engines::product_period(acc, quantum_period(f, order));
    return acc;
}

Rational Catalog::prefactor_constant(const std::string& id) const {
    const FamilyRecord& rec = record(id);
    std::optional<sumdsl::SumSpec> spec;
    if (const auto* w = std::get_if<engines::WeightData>(&rec.construction))
        spec = rec.is_toric_ci ? engines::toric_ci_period(*w)
                               : engines::toric_period(*w);
    else if (const auto* w = std::get_if<engines::WpsSpec>(&rec.construction))
        spec = engines::wps_ci_period(*w);
    else if (const auto* s = std::get_if<sumdsl::SumSpec>(&rec.construction))
        spec = *s;
    if (spec)
        return normalize_prefactor(sumdsl::evaluate_raw(*spec, 2)).prefactor;
    if (const auto* g =
            std::get_if<grassmann::GrassmannBundleSpec>(&rec.construction))
        return normalize_prefactor(grassmann::raw_period(*g, 2)).prefactor;
    return Rational(0);  // products of normalized periods are normalized
}

VerifyReport Catalog::verify_family(const std::string& id) const {
    const FamilyRecord& rec = record(id);
    VerifyReport rep;
    rep.id = id;
    auto t0 = std::chrono::steady_clock::now();
    std::size_t order = rec.expected_regularized.size() - 1;
    PowerSeries reg = regularize(quantum_period(id, order));
    rep.pass = true;
    for (std::size_t d = 0; d <= order; ++d) {
        if (reg[d] != rec.expected_regularized[d]) {
            rep.pass = false;
            rep.first_mismatch = d;
            rep.computed = reg[d];
            rep.expected = rec.expected_regularized[d];
            break;
        }
    }
    auto t1 = std::chrono::steady_clock::now();
    rep.millis = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return rep;
}

VerifySummary Catalog::verify_all(const std::string& filter,
                                  unsigned jobs) const {
    std::vector<std::string> ids;
    for (const auto& rec : families_) {
        if (filter.empty()) {
            ids.push_back(rec.id);
        } else if (filter.rfind("rank=", 0) == 0) {
            int rank = std::stoi(filter.substr(5));
            if (rec.dimension == 3 && family_rank(rec.id) == rank)
                ids.push_back(rec.id);
        } else if (filter.rfind("very_ample=", 0) == 0) {
            bool want = filter.substr(11) == "true";
            if (rec.dimension == 3 && rec.very_ample == want)
                ids.push_back(rec.id);
        } else {
            throw std::invalid_argument("unknown filter: " + filter);
        }
    }
    VerifySummary sum;
    auto t0 = std::chrono::steady_clock::now();
    sum.reports.resize(ids.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < ids.size(); ++i)
            sum.reports[i] = verify_family(ids[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::future<void>> workers;
        for (unsigned w = 0; w < jobs; ++w)
            workers.push_back(std::async(std::launch::async, [&] {
                for (;;) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= ids.size()) return;
                    sum.reports[i] = verify_family(ids[i]);
                }
            }));
        for (auto& f : workers) f.get();
    }
    for (const auto& r : sum.reports) (r.pass ? sum.passes : sum.failures)++;
    auto t1 = std::chrono::steady_clock::now();
    sum.millis = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return sum;
}

PowerSeries Catalog::rank2_mixed_period(const std::string& case_id,
                                        std::size_t order) const {
    bool known = false;
    for (const char* c : grassmann::kRank2MixedCases)
        known = known || case_id == c;
    if (!known)
        throw std::out_of_range("not a mixed rank-2 case: " + case_id);
    return quantum_period(case_id, order);
}

PowerSeries Catalog::scalar_formula_check(const std::string& id,
                                          std::size_t order) const {
    const FamilyRecord& rec = record(id);
    if (!rec.scalar_form)
        throw std::out_of_range(id + " has no transcribed scalar formula");
    return sumdsl::evaluate(sumdsl::parse(*rec.scalar_form), order);
}

}  // namespace catalog
}  // namespace fano
