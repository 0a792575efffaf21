#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>

#include <json.hpp>

#include "bernstein/basis.hpp"
#include "bernstein/chain.hpp"
#include "bernstein/expspace.hpp"
#include "bernstein/fixtures.hpp"
#include "bernstein/operator.hpp"

namespace bernstein {

/// Shortest text that reproduces v exactly on read-back (printf %.17g).
[[nodiscard]] std::string format_g17(double v);

/// {"eigenvalues":[{"re":..,"im":..,"mult":..},...]} in canonical entry order.
[[nodiscard]] nlohmann::json spectrum_to_json(const Spectrum& spectrum);

/// Parse the schema above. "im" defaults to 0 and "mult" to 1; "re" is
/// required. Throws SpecParseError on shape errors; invalid eigenvalue
/// combinations surface as the usual construction errors.
[[nodiscard]] Spectrum spectrum_from_json(const nlohmann::json& j);

/// {"degree":.., "interval":{..}, "coefficients":[[..],..]} with one inner
/// array per basis function, in the canonical function order of the family.
[[nodiscard]] nlohmann::json basis_coeffs_json(const BernsteinBasis& basis);

/// CSV `x, p_0(x), ..., p_n(x)`: a header plus grid rows over the interval.
void write_basis_csv(std::ostream& out, const BernsteinBasis& basis, int grid);

/// Ratios, bounds, violations, and endpoint diagnostics of a sandwich test.
[[nodiscard]] nlohmann::json feasibility_to_json(const FeasibilityReport& report);

/// {"c":[..],"d":[..],"w":[..],"delta":[..],"Delta":[..],"beta":[..],"gamma":[..]}.
[[nodiscard]] nlohmann::json chain_to_json(const ChainData& data);

/// {"nodes":[..],"weights":[..],"interval":{"a":..,"b":..},"spectrum":{..}}.
[[nodiscard]] nlohmann::json operator_to_json(const BernsteinOperator& op);

/// CSV `x, Bf(x), f(x)` sampling the operator applied to f over the interval.
void write_apply_csv(std::ostream& out, const BernsteinOperator& op,
                     const std::function<double(double)>& f, int grid);

/// CSV `b, h_b, feasible, t2_overshoot, w_min`, one row per scanned b.
void write_scan_csv(std::ostream& out, const CounterexampleScan& scan);

/// A fully resolved problem: the space, the interval, both fixed functions,
/// the sampling grid, an optional extra function to run through the operator,
/// and the numeric options (defaults unless the spec overrides them).
struct ProblemSpec {
    std::shared_ptr<const Space> space;
    Interval iv;
    SpaceElement f0;
    SpaceElement f1;
    int grid = 101;
    std::function<double(double)> apply_fn;  // empty when no apply output is requested
    std::string apply_name;
    std::string out_dir;  // optional output directory, overridable on the command line
    OperatorOptions options;
};

/// Range of right endpoints for the counterexample scan.
struct ScanSpec {
    double b_min = 0.0;
    double b_max = 0.0;
    int steps = 0;
    std::string out_dir;  // optional output directory, overridable on the command line
};

/// Resolve a function description against the space: either a preset name
/// ("one", "x", "exp:<rate>", "xexp:<rate>", "cos", "sin", "one+x-cos") or an
/// explicit coefficient array of the space's dimension. Presets whose basis
/// function is absent from the space are rejected. Throws SpecParseError.
[[nodiscard]] SpaceElement resolve_function(const std::shared_ptr<const Space>& space,
                                            const nlohmann::json& j, const std::string& label);

/// Plain evaluator for a preset name, independent of any space; used for the
/// apply output where f need not belong to the space. Throws SpecParseError
/// for unknown names.
[[nodiscard]] std::function<double(double)> preset_evaluator(const std::string& name);

/// Parse {"spectrum":.., "interval":{"a":..,"b":..}, "f0":.., "f1":..,
/// "grid":.., "apply":.., "options":{..}}. Unknown top-level or option keys
/// are rejected so typos cannot silently fall back to defaults. Throws
/// SpecParseError on every shape problem.
[[nodiscard]] ProblemSpec parse_problem_spec(const nlohmann::json& j);

/// Parse {"scan":{"b_min":..,"b_max":..,"steps":..}}; range validity is
/// checked by counterexample_scan itself. Throws SpecParseError.
[[nodiscard]] ScanSpec parse_scan_spec(const nlohmann::json& j);

/// Read and parse a JSON file, wrapping I/O and syntax failures in
/// SpecParseError.
[[nodiscard]] nlohmann::json read_json_file(const std::string& path);

}  // namespace bernstein
