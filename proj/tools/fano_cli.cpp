/* fano: compute, verify, and analyze quantum periods of Fano threefolds. */

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fano/catalog.hpp"
#include "fano/laurent.hpp"
#include "fano/pfops.hpp"

namespace {

using namespace fano;

std::string default_catalog_path() {
    if (const char* env = std::getenv("FANO_CATALOG")) return env;
    return "data/catalog.json";
}

int cmd_period(const catalog::Catalog& cat, const std::string& id,
               std::size_t order, bool regularized, bool as_json) {
    PowerSeries s = cat.quantum_period(id, order);
    if (regularized) s = regularize(s);
    if (as_json) {
        nlohmann::json coeffs = nlohmann::json::array();
        for (std::size_t d = 0; d <= s.order(); ++d)
            coeffs.push_back(to_string(s[d]));
        nlohmann::json out{{"id", id},
                           {"regularized", regularized},
                           {"coefficients", coeffs}};
        std::cout << out.dump() << "\n";
    } else {
        for (std::size_t d = 0; d <= s.order(); ++d)
            std::cout << to_string(s[d]) << "\n";
    }
    return 0;
}

int cmd_verify(const catalog::Catalog& cat, const std::string& id, bool all,
               const std::string& filter, unsigned jobs, bool timing) {
    catalog::VerifySummary sum;
    if (all) {
        sum = cat.verify_all(filter, jobs);
    } else {
        sum.reports.push_back(cat.verify_family(id));
        (sum.reports[0].pass ? sum.passes : sum.failures)++;
        sum.millis = sum.reports[0].millis;
    }
    for (const auto& r : sum.reports) {
        std::cout << r.id << ": " << (r.pass ? "pass" : "FAIL");
        if (!r.pass)
            std::cout << " at degree " << *r.first_mismatch << " (computed "
                      << to_string(r.computed) << ", expected "
                      << to_string(r.expected) << ")";
        std::cout << "\n";
    }
    std::cout << sum.passes << "/" << sum.passes + sum.failures << " pass";
    if (timing) std::cout << " in " << sum.millis / 1000.0 << "s";
    std::cout << "\n";
    return sum.failures == 0 ? 0 : 1;
}

int cmd_compare(const catalog::Catalog& cat, const std::string& id,
                const std::string& file, std::size_t order) {
    auto f = laurent::LaurentPolynomial::load(file);
    PowerSeries reg = regularize(cat.quantum_period(id, order));
    auto rep = laurent::match_series(f, reg, order);
    if (rep.match) {
        std::cout << "MATCH to order " << order << "\n";
        return 0;
    }
    std::cout << "MISMATCH at degree " << *rep.first_mismatch << ": period "
              << to_string(rep.period_value) << ", quantum "
              << to_string(rep.family_value) << "\n";
    return 1;
}

int cmd_pf(const catalog::Catalog& cat, const std::string& id,
           std::size_t max_ord, std::size_t max_deg, bool as_json) {
    auto provider = [&](std::size_t n) {
        return regularize(cat.quantum_period(id, n));
    };
    auto res = pfops::search_annihilator(provider, max_ord, max_deg);
    if (!res.fit.op) {
        std::cout << "none found within order " << max_ord << ", degree "
                  << max_deg << "\n";
        return 0;
    }
    const auto& op = *res.fit.op;
    bool manifold = pfops::is_manifold_type(op);
    if (as_json) {
        nlohmann::json out{{"id", id},
                           {"operator", nlohmann::json::parse(op.to_json())},
                           {"order", op.order()},
                           {"degree", op.degree()},
                           {"unique", res.fit.unique},
                           {"manifold_type", manifold}};
        std::cout << out.dump() << "\n";
    } else {
        std::cout << op.to_text() << "\n";
        if (!res.fit.unique)
            std::cout << "note: nullspace dimension " << res.fit.nullity
                      << ", sparsest representative shown\n";
        std::cout << (manifold ? "manifold type: yes" : "manifold type: no")
                  << "\n";
    }
    return 0;
}

int cmd_export(const catalog::Catalog& cat, const std::string& format,
               const std::string& out_path, std::size_t order, unsigned jobs) {
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) {
            std::cerr << "cannot open " << out_path << "\n";
            return 1;
        }
        out = &file;
    }
    std::vector<std::pair<std::string, PowerSeries>> rows;
    for (const auto& rec : cat.families())
        rows.emplace_back(rec.id, regularize(cat.quantum_period(rec.id, order)));
    (void)jobs;
    if (format == "csv") {
        *out << "id,minkowski_id";
        for (std::size_t d = 0; d <= order; ++d) *out << ",c" << d;
        *out << "\n";
        for (const auto& [id, s] : rows) {
            const auto& rec = cat.record(id);
            *out << id << ",";
            if (rec.minkowski_id) *out << *rec.minkowski_id;
            for (std::size_t d = 0; d <= order; ++d)
                *out << "," << to_string(s[d]);
            *out << "\n";
        }
    } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [id, s] : rows) {
            const auto& rec = cat.record(id);
            nlohmann::json coeffs = nlohmann::json::array();
            for (std::size_t d = 0; d <= order; ++d)
                coeffs.push_back(to_string(s[d]));
            nlohmann::json j{{"id", id}, {"coefficients", coeffs}};
            if (rec.minkowski_id) j["minkowski_id"] = *rec.minkowski_id;
            arr.push_back(std::move(j));
        }
        *out << arr.dump(1) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum periods of the 105 Fano threefold families"};
    app.require_subcommand(1);
    std::string catalog_path = default_catalog_path();
    app.add_option("--catalog", catalog_path, "catalog JSON path")
        ->envname("FANO_CATALOG");
    bool no_timing = false;
    app.add_flag("--no-timing", no_timing, "suppress timing output");
    unsigned jobs = 1;
    app.add_option("--jobs", jobs, "parallel workers for verify/export");

    auto* period = app.add_subcommand("period", "print a quantum period");
    std::string id;
    std::size_t order = 10;
    bool regularized = false, as_json = false;
    period->add_option("id", id)->required();
    period->add_option("--order", order, "truncation order");
    period->add_flag("--regularized", regularized);
    period->add_flag("--json", as_json);

    auto* verify = app.add_subcommand("verify", "check against golden data");
    std::string verify_id, filter;
    bool all = false;
    verify->add_option("id", verify_id);
    verify->add_flag("--all", all);
    verify->add_option("--filter", filter, "rank=K or very_ample=BOOL");

    auto* compare = app.add_subcommand("compare", "match a Laurent mirror");
    std::string cmp_id, laurent_file;
    std::size_t cmp_order = 12;
    compare->add_option("id", cmp_id)->required();
    compare->add_option("laurent_file", laurent_file)->required();
    compare->add_option("--order", cmp_order);

    auto* pf = app.add_subcommand("pf", "fit the Picard-Fuchs operator");
    std::string pf_id;
    std::size_t max_ord = 6, max_deg = 12;
    bool pf_json = false;
    pf->add_option("id", pf_id)->required();
    pf->add_option("--max-ord", max_ord);
    pf->add_option("--max-deg", max_deg);
    pf->add_flag("--json", pf_json);

    auto* exp = app.add_subcommand("export", "dump all regularized periods");
    std::string format = "json", out_path;
    std::size_t exp_order = 10;
    exp->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    exp->add_option("--out", out_path);
    exp->add_option("--order", exp_order);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        auto cat = fano::catalog::Catalog::load(catalog_path);
        if (period->parsed())
            return cmd_period(cat, id, order, regularized, as_json);
        if (verify->parsed()) {
            if (!all && verify_id.empty()) {
                std::cerr << "verify: need a family id or --all\n";
                return 2;
            }
            return cmd_verify(cat, verify_id, all, filter, jobs, !no_timing);
        }
        if (compare->parsed()) return cmd_compare(cat, cmp_id, laurent_file, cmp_order);
        if (pf->parsed()) return cmd_pf(cat, pf_id, max_ord, max_deg, pf_json);
        if (exp->parsed()) return cmd_export(cat, format, out_path, exp_order, jobs);
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
