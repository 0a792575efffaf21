#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bernstein/basis.hpp"
#include "bernstein/chain.hpp"
#include "bernstein/errors.hpp"
#include "bernstein/expspace.hpp"
#include "bernstein/fixtures.hpp"
#include "bernstein/io.hpp"
#include "bernstein/operator.hpp"

namespace {

using bernstein::SpecParseError;
using nlohmann::json;

// Exit codes: 0 success, 2 unusable problem description, 3 infeasible
// construction (the sandwich condition fails), 4 numerical failure.
struct ErrorInfo {
    std::string type;
    int code = 4;
};

ErrorInfo classify(const std::exception& e) {
    if (dynamic_cast<const SpecParseError*>(&e) != nullptr) {
        return {"SpecParseError", 2};
    }
    if (dynamic_cast<const bernstein::ConjugationViolation*>(&e) != nullptr) {
        return {"ConjugationViolation", 2};
    }
    if (dynamic_cast<const bernstein::OutOfRange*>(&e) != nullptr) {
        return {"OutOfRange", 2};
    }
    if (dynamic_cast<const bernstein::PreconditionFailed*>(&e) != nullptr) {
        return {"PreconditionFailed", 2};
    }
    if (dynamic_cast<const bernstein::Infeasible*>(&e) != nullptr) {
        return {"Infeasible", 3};
    }
    if (dynamic_cast<const bernstein::RatioOutOfRange*>(&e) != nullptr) {
        return {"RatioOutOfRange", 3};
    }
    if (dynamic_cast<const bernstein::NotChebyshevAtEndpoints*>(&e) != nullptr) {
        return {"NotChebyshevAtEndpoints", 4};
    }
    if (dynamic_cast<const bernstein::SingularExpansion*>(&e) != nullptr) {
        return {"SingularExpansion", 4};
    }
    if (dynamic_cast<const bernstein::RankDeficiency*>(&e) != nullptr) {
        return {"RankDeficiency", 4};
    }
    if (dynamic_cast<const bernstein::DegenerateDenominator*>(&e) != nullptr) {
        return {"DegenerateDenominator", 4};
    }
    if (dynamic_cast<const bernstein::DivisionByZero*>(&e) != nullptr) {
        return {"DivisionByZero", 4};
    }
    if (dynamic_cast<const bernstein::NotInSpectrum*>(&e) != nullptr) {
        return {"NotInSpectrum", 4};
    }
    if (dynamic_cast<const bernstein::Error*>(&e) != nullptr) {
        return {"Error", 4};
    }
    return {"InternalError", 4};
}

std::uint64_t seed_from_env() {
    const char* text = std::getenv("BERNSTEIN_SEED");
    if (text == nullptr || *text == '\0') {
        return 20260818ULL;
    }
    std::uint64_t seed = 0;
    const char* end = text + std::string(text).size();
    const auto [ptr, ec] = std::from_chars(text, end, seed);
    if (ec != std::errc() || ptr != end) {
        throw SpecParseError("BERNSTEIN_SEED must be an unsigned integer");
    }
    return seed;
}

std::string output_path(const std::string& dir, const std::string& name) {
    if (dir.empty() || dir == ".") {
        return name;
    }
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw bernstein::Error("cannot write '" + path + "'");
    }
    return out;
}

/// The spec's own out_dir is the default; --out wins when given.
std::string pick_out_dir(const std::string& spec_dir, const std::string& flag_dir) {
    return flag_dir.empty() ? spec_dir : flag_dir;
}

int pick_grid(int spec_grid, int flag_grid) {
    const int grid = flag_grid > 0 ? flag_grid : spec_grid;
    if (grid < 2) {
        throw SpecParseError("grid must be at least 2");
    }
    return grid;
}

void emit_written(const std::vector<std::string>& paths, const json& extra = json::object()) {
    json out = extra;
    out["written"] = paths;
    std::cout << out.dump(2) << '\n';
}

int run_basis(const json& j, const std::string& flag_out, int flag_grid, std::uint64_t seed) {
    const bernstein::ProblemSpec spec = bernstein::parse_problem_spec(j);
    const std::string dir = pick_out_dir(spec.out_dir, flag_out);
    const int grid = pick_grid(spec.grid, flag_grid);

    const bernstein::BernsteinBasis basis =
        bernstein::build_bernstein_basis(spec.space, spec.iv, spec.options.basis);
    const bernstein::EctReport ect =
        bernstein::verify_ect_heuristic(spec.space->spectrum(), spec.iv, 200, 200, seed);

    json bj = bernstein::basis_coeffs_json(basis);
    bj["ect"] = {{"ok", ect.ok},
                 {"allowed_zeros", ect.allowed_zeros},
                 {"worst_zeros", ect.worst_zeros}};

    const std::string csv_path = output_path(dir, "basis.csv");
    const std::string json_path = output_path(dir, "basis.json");
    {
        std::ofstream out = open_output(csv_path);
        bernstein::write_basis_csv(out, basis, grid);
    }
    {
        std::ofstream out = open_output(json_path);
        out << bj.dump(2) << '\n';
    }
    emit_written({csv_path, json_path});
    return 0;
}

int run_operator(const json& j, const std::string& flag_out, int flag_grid,
                 std::uint64_t seed) {
    const bernstein::ProblemSpec spec = bernstein::parse_problem_spec(j);
    const std::string dir = pick_out_dir(spec.out_dir, flag_out);
    const int grid = pick_grid(spec.grid, flag_grid);

    const bernstein::BernsteinOperator op =
        bernstein::build_operator(spec.space, spec.iv, spec.f0, spec.f1, spec.options);
    const bernstein::ResidualReport residuals =
        bernstein::residual_report(op, spec.options.audit_grid, seed);
    const bernstein::ChainData chain =
        bernstein::compute_chain_data(spec.space, spec.iv, spec.f0, spec.f1, spec.options);

    json oj = bernstein::operator_to_json(op);
    oj["residuals"] = {{"f0", residuals.f0_residual},
                       {"f1", residuals.f1_residual},
                       {"positivity_ok", residuals.positivity_ok},
                       {"worst_value", residuals.worst_value}};
    oj["chain"] = bernstein::chain_to_json(chain);
    oj["feasibility"] = bernstein::feasibility_to_json(op.feasibility);

    const std::string json_path = output_path(dir, "operator.json");
    {
        std::ofstream out = open_output(json_path);
        out << oj.dump(2) << '\n';
    }
    std::vector<std::string> written = {json_path};
    if (spec.apply_fn) {
        const std::string csv_path = output_path(dir, "apply.csv");
        std::ofstream out = open_output(csv_path);
        bernstein::write_apply_csv(out, op, spec.apply_fn, grid);
        written.push_back(csv_path);
    }
    emit_written(written);
    return 0;
}

int run_scan(const json& j, const std::string& flag_out) {
    const bernstein::ScanSpec spec = bernstein::parse_scan_spec(j);
    const std::string dir = pick_out_dir(spec.out_dir, flag_out);

    const bernstein::CounterexampleScan scan =
        bernstein::counterexample_scan(spec.b_min, spec.b_max, spec.steps);
    if (!scan.consistent) {
        throw bernstein::Error(
            "scan inconsistency: a negative criterion value paired with a feasible build");
    }

    const std::string csv_path = output_path(dir, "scan.csv");
    {
        std::ofstream out = open_output(csv_path);
        bernstein::write_scan_csv(out, scan);
    }
    emit_written({csv_path}, {{"rows", scan.rows.size()}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generalized Bernstein operators on exponential-polynomial spaces"};
    app.require_subcommand(1);

    std::string spec_path;
    std::string out_dir;
    int grid = 0;

    CLI::App* basis_cmd =
        app.add_subcommand("basis", "write the Bernstein basis as CSV and JSON");
    CLI::App* operator_cmd = app.add_subcommand(
        "operator", "build the node/weight representation and its diagnostics");
    CLI::App* scan_cmd =
        app.add_subcommand("scan", "sweep right endpoints of the trigonometric family");
    for (CLI::App* sub : {basis_cmd, operator_cmd, scan_cmd}) {
        sub->add_option("spec", spec_path, "problem description JSON file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides the spec's out_dir)");
    }
    for (CLI::App* sub : {basis_cmd, operator_cmd}) {
        sub->add_option("--grid", grid, "CSV sample count (overrides the spec's grid)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        const std::uint64_t seed = seed_from_env();
        const json j = bernstein::read_json_file(spec_path);
        if (basis_cmd->parsed()) {
            return run_basis(j, out_dir, grid, seed);
        }
        if (operator_cmd->parsed()) {
            return run_operator(j, out_dir, grid, seed);
        }
        return run_scan(j, out_dir);
    } catch (const std::exception& e) {
        const ErrorInfo info = classify(e);
        json err = {{"error", {{"type", info.type}, {"message", e.what()}}}};
        if (const auto* infeasible = dynamic_cast<const bernstein::Infeasible*>(&e)) {
            err["feasibility"] = bernstein::feasibility_to_json(infeasible->report());
        }
        std::cout << err.dump(2) << '\n';
        return info.code;
    }
}
