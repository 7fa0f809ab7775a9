#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fano/engines.hpp"
#include "fano/grassmann.hpp"
#include "fano/series.hpp"
#include "fano/sumdsl.hpp"

namespace fano {
namespace catalog {

struct Product {
    std::vector<std::string> factors;
};

using Construction =
    std::variant<engines::WeightData,            // toric (no bundle rows)
                 engines::WpsSpec,               // wps_ci
                 grassmann::GrassmannBundleSpec, // grassmann
                 sumdsl::SumSpec,                // closed_form
                 Product>;                       // product

struct FamilyRecord {
    std::string id;
    std::string name;
    int dimension = 3;
    bool is_toric_ci = false;  // distinguishes toric vs toric_ci WeightData
    Construction construction;
    std::vector<Rational> expected_regularized;
    std::optional<Rational> prefactor;  // printed e^{-ct} constant
    std::optional<long> minkowski_id;
    bool very_ample = false;
    std::string notes;
    std::optional<std::string> closed_form;  // cross-check transcription
    std::optional<std::string> scalar_form;  // rank-1 scalar oracle
};

struct VerifyReport {
    std::string id;
    bool pass = false;
    std::optional<std::size_t> first_mismatch;
    Rational computed, expected;  // at the first mismatching degree
    double millis = 0.0;
};

struct VerifySummary {
    std::size_t passes = 0, failures = 0;
    double millis = 0.0;
    std::vector<VerifyReport> reports;
};

class Catalog {
  public:
    static Catalog load(const std::string& path);
    static Catalog parse(const std::string& json_text);
    std::string to_json() const;  // round-trips through parse()

    const std::vector<FamilyRecord>& families() const { return families_; }
    bool contains(const std::string& id) const { return index_.count(id) > 0; }
    const FamilyRecord& record(const std::string& id) const;

    // Unregularized normalized quantum period.
    PowerSeries quantum_period(const std::string& id, std::size_t order) const;

    // The prefactor constant the construction route produces.
    Rational prefactor_constant(const std::string& id) const;

    VerifyReport verify_family(const std::string& id) const;

    /* filter: "", "rank=K", or "very_ample=true|false"; rank and
     * very-ampleness select threefold records only. */
    VerifySummary verify_all(const std::string& filter = "",
                             unsigned jobs = 1) const;

    // Closed sum with harmonic factors for the six mixed rank-2 cases.
    PowerSeries rank2_mixed_period(const std::string& case_id,
                                   std::size_t order) const;

    // Evaluates a family's transcribed scalar formula (rank-1 oracle).
    PowerSeries scalar_formula_check(const std::string& id,
                                     std::size_t order) const;

  private:
    std::vector<FamilyRecord> families_;
    std::map<std::string, std::size_t> index_;

    void validate() const;
};

// rank of a threefold id like "3-12" (1 for "1".."17"); 0 for auxiliaries
int family_rank(const std::string& id);

}  // namespace catalog
}  // namespace fano
