#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ellhyp/identities.hpp"
#include "ellhyp/kernel.hpp"
#include "ellhyp/scaled_complex.hpp"
#include "ellhyp/series.hpp"

// JSON (de)serialization. Complex numbers are [re, im] pairs; every parse
// failure throws SchemaError naming the offending field.
namespace ellhyp::json {

using Json = nlohmann::ordered_json;

Json to_json(cplx z);
Json to_json(const ScaledComplex& z);  // {"mantissa": [re, im], "exp2": k}
Json to_json(const KernelSpec& k);
Json to_json(const Termination& t);

cplx complex_from(const Json& j, const std::string& field);
std::vector<cplx> complex_list_from(const Json& j, const std::string& field);

/// {"variant", "omega1", "omega2", "gauge": {"a","b","c"}, "delta"}; gauge
/// and delta are optional.
KernelSpec kernel_from(const Json& j, const std::string& field = "kernel");
Termination termination_from(const Json& j,
                             const std::string& field = "termination");

PhiParams phi_params_from(const Json& j);
EParams e_params_from(const Json& j);
BasicPhiParams basic_phi_params_from(const Json& j);
WParams w_params_from(const Json& j);

/// Parses text, mapping syntax errors to SchemaError("<document>").
Json parse(const std::string& text);

/// One report as a single JSON object. wall_time is left out so that equal
/// seeds give byte-identical output.
Json report_to_json(const VerificationReport& r);

/// One line per report, each terminated by '\n'.
std::string reports_jsonl(const std::vector<VerificationReport>& reports);

/// Aggregate CSV: id,kernel,m,n,N,trials,passes,max_rel_err,mean_wall_time,
/// one row per (id, kernel, m, n, N) in first-seen order.
std::string aggregate_csv(const std::vector<VerificationReport>& reports);

}  // namespace ellhyp::json
