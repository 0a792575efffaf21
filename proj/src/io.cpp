#include "bernstein/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "bernstein/errors.hpp"

namespace bernstein {
namespace {

void require(bool cond, const std::string& message) {
    if (!cond) {
        throw SpecParseError(message);
    }
}

double require_number(const nlohmann::json& j, const std::string& key,
                      const std::string& where) {
    require(j.contains(key), where + ": missing '" + key + "'");
    require(j[key].is_number(), where + ": '" + key + "' must be a number");
    return j[key].get<double>();
}

int require_integer(const nlohmann::json& j, const std::string& key, const std::string& where) {
    require(j.contains(key), where + ": missing '" + key + "'");
    require(j[key].is_number_integer(), where + ": '" + key + "' must be an integer");
    return j[key].get<int>();
}

double parse_rate(const std::string& name, std::size_t prefix_len) {
    const char* begin = name.data() + prefix_len;
    const char* end = name.data() + name.size();
    double rate = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, rate);
    if (ec != std::errc() || ptr != end) {
        throw SpecParseError("preset '" + name + "': cannot parse the rate after ':'");
    }
    return rate;
}

std::size_t find_or_reject(const std::shared_ptr<const Space>& space,
                           RealBasisFunction::Kind kind, int power, double alpha, double beta,
                           const std::string& label, const std::string& name) {
    const std::size_t idx = space->find(kind, power, alpha, beta);
    if (idx == Space::npos) {
        throw SpecParseError(label + ": preset '" + name +
                             "' needs a basis function this space does not contain");
    }
    return idx;
}

std::vector<double> json_number_array(const nlohmann::json& j, const std::string& where) {
    require(j.is_array(), where + " must be an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        require(v.is_number(), where + " must contain only numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

nlohmann::json number_array_json(const std::vector<double>& v) {
    return nlohmann::json(v);
}

void write_csv_row(std::ostream& out, const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        out << format_g17(values[i]);
    }
    out << '\n';
}

}  // namespace

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::json spectrum_to_json(const Spectrum& spectrum) {
    nlohmann::json eigenvalues = nlohmann::json::array();
    for (const SpectrumEntry& e : spectrum.entries()) {
        eigenvalues.push_back({{"re", e.re}, {"im", e.im}, {"mult", e.mult}});
    }
    return {{"eigenvalues", eigenvalues}};
}

Spectrum spectrum_from_json(const nlohmann::json& j) {
    require(j.is_object(), "spectrum must be an object");
    require(j.contains("eigenvalues"), "spectrum: missing 'eigenvalues'");
    const nlohmann::json& list = j["eigenvalues"];
    require(list.is_array() && !list.empty(), "spectrum: 'eigenvalues' must be a nonempty array");
    std::vector<SpectrumEntry> entries;
    entries.reserve(list.size());
    for (const auto& item : list) {
        require(item.is_object(), "spectrum: each eigenvalue must be an object");
        for (const auto& [key, value] : item.items()) {
            require(key == "re" || key == "im" || key == "mult",
                    "spectrum: unknown eigenvalue key '" + key + "'");
            (void)value;
        }
        SpectrumEntry e;
        e.re = require_number(item, "re", "spectrum");
        e.im = item.contains("im") ? require_number(item, "im", "spectrum") : 0.0;
        e.mult = item.contains("mult") ? require_integer(item, "mult", "spectrum") : 1;
        entries.push_back(e);
    }
    return Spectrum(std::move(entries));
}

nlohmann::json basis_coeffs_json(const BernsteinBasis& basis) {
    nlohmann::json coefficients = nlohmann::json::array();
    for (std::size_t k = 0; k < basis.size(); ++k) {
        coefficients.push_back(number_array_json(basis.coeffs(k)));
    }
    return {{"degree", basis.degree()},
            {"interval", {{"a", basis.interval().a}, {"b", basis.interval().b}}},
            {"coefficients", coefficients},
            {"warnings", basis.warnings()}};
}

void write_basis_csv(std::ostream& out, const BernsteinBasis& basis, int grid) {
    if (grid < 2) {
        throw PreconditionFailed("write_basis_csv: grid must have at least 2 points");
    }
    out << 'x';
    for (std::size_t k = 0; k < basis.size(); ++k) {
        out << ",p_" << k << "(x)";
    }
    out << '\n';
    const double a = basis.interval().a;
    const double b = basis.interval().b;
    for (int i = 0; i < grid; ++i) {
        const double x = a + (b - a) * i / (grid - 1.0);
        std::vector<double> row;
        row.reserve(basis.size() + 1);
        row.push_back(x);
        for (std::size_t k = 0; k < basis.size(); ++k) {
            row.push_back(basis.eval(k, x));
        }
        write_csv_row(out, row);
    }
}

nlohmann::json feasibility_to_json(const FeasibilityReport& report) {
    nlohmann::json violations = nlohmann::json::array();
    for (const RatioViolation& v : report.violations) {
        violations.push_back({{"k", v.k}, {"ratio", v.ratio}, {"above", v.above}});
    }
    return {{"ratios", number_array_json(report.ratios)},
            {"lower", report.lower},
            {"upper", report.upper},
            {"violations", violations},
            {"beta_positive", report.beta_positive},
            {"endpoint_mismatch_a", report.endpoint_mismatch_a},
            {"endpoint_mismatch_b", report.endpoint_mismatch_b},
            {"feasible", report.feasible()}};
}

nlohmann::json chain_to_json(const ChainData& data) {
    return {{"c", number_array_json(data.c)},       {"d", number_array_json(data.d)},
            {"w", number_array_json(data.w)},       {"delta", number_array_json(data.delta)},
            {"Delta", number_array_json(data.Delta)}, {"beta", number_array_json(data.beta)},
            {"gamma", number_array_json(data.gamma)}};
}

nlohmann::json operator_to_json(const BernsteinOperator& op) {
    return {{"nodes", number_array_json(op.nodes)},
            {"weights", number_array_json(op.weights)},
            {"interval", {{"a", op.basis.interval().a}, {"b", op.basis.interval().b}}},
            {"spectrum", spectrum_to_json(op.f0.space()->spectrum())}};
}

void write_apply_csv(std::ostream& out, const BernsteinOperator& op,
                     const std::function<double(double)>& f, int grid) {
    if (grid < 2) {
        throw PreconditionFailed("write_apply_csv: grid must have at least 2 points");
    }
    out << "x,Bf(x),f(x)\n";
    const double a = op.basis.interval().a;
    const double b = op.basis.interval().b;
    for (int i = 0; i < grid; ++i) {
        const double x = a + (b - a) * i / (grid - 1.0);
        write_csv_row(out, {x, apply(op, f, x), f(x)});
    }
}

void write_scan_csv(std::ostream& out, const CounterexampleScan& scan) {
    out << "b,h_b,feasible,t2_overshoot,w_min\n";
    for (const ScanRow& row : scan.rows) {
        out << format_g17(row.b) << ',' << format_g17(row.h) << ','
            << (row.feasible ? '1' : '0') << ',' << format_g17(row.t2) << ','
            << format_g17(row.w_min) << '\n';
    }
}

SpaceElement resolve_function(const std::shared_ptr<const Space>& space, const nlohmann::json& j,
                              const std::string& label) {
    using Kind = RealBasisFunction::Kind;
    if (j.is_array()) {
        std::vector<double> coeffs = json_number_array(j, label);
        require(coeffs.size() == space->size(),
                label + ": expected " + std::to_string(space->size()) + " coefficients, got " +
                    std::to_string(coeffs.size()));
        return {space, std::move(coeffs)};
    }
    require(j.is_string(), label + " must be a preset name or a coefficient array");
    const std::string name = j.get<std::string>();
    std::vector<double> coeffs(space->size(), 0.0);
    if (name == "one") {
        coeffs[find_or_reject(space, Kind::PolyExp, 0, 0.0, 0.0, label, name)] = 1.0;
    } else if (name == "x") {
        coeffs[find_or_reject(space, Kind::PolyExp, 1, 0.0, 0.0, label, name)] = 1.0;
    } else if (name == "cos") {
        coeffs[find_or_reject(space, Kind::PolyExpCos, 0, 0.0, 1.0, label, name)] = 1.0;
    } else if (name == "sin") {
        coeffs[find_or_reject(space, Kind::PolyExpSin, 0, 0.0, 1.0, label, name)] = 1.0;
    } else if (name == "one+x-cos") {
        coeffs[find_or_reject(space, Kind::PolyExp, 0, 0.0, 0.0, label, name)] = 1.0;
        coeffs[find_or_reject(space, Kind::PolyExp, 1, 0.0, 0.0, label, name)] = 1.0;
        coeffs[find_or_reject(space, Kind::PolyExpCos, 0, 0.0, 1.0, label, name)] = -1.0;
    } else if (name.rfind("exp:", 0) == 0) {
        const double rate = parse_rate(name, 4);
        coeffs[find_or_reject(space, Kind::PolyExp, 0, rate, 0.0, label, name)] = 1.0;
    } else if (name.rfind("xexp:", 0) == 0) {
        const double rate = parse_rate(name, 5);
        coeffs[find_or_reject(space, Kind::PolyExp, 1, rate, 0.0, label, name)] = 1.0;
    } else {
        throw SpecParseError(label + ": unknown preset '" + name + "'");
    }
    return {space, std::move(coeffs)};
}

std::function<double(double)> preset_evaluator(const std::string& name) {
    if (name == "one") {
        return [](double) { return 1.0; };
    }
    if (name == "x") {
        return [](double x) { return x; };
    }
    if (name == "cos") {
        return [](double x) { return std::cos(x); };
    }
    if (name == "sin") {
        return [](double x) { return std::sin(x); };
    }
    if (name == "one+x-cos") {
        return [](double x) { return 1.0 + x - std::cos(x); };
    }
    if (name.rfind("exp:", 0) == 0) {
        const double rate = parse_rate(name, 4);
        return [rate](double x) { return std::exp(rate * x); };
    }
    if (name.rfind("xexp:", 0) == 0) {
        const double rate = parse_rate(name, 5);
        return [rate](double x) { return x * std::exp(rate * x); };
    }
    throw SpecParseError("unknown preset '" + name + "'");
}

ProblemSpec parse_problem_spec(const nlohmann::json& j) {
    require(j.is_object(), "problem spec must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        require(key == "spectrum" || key == "interval" || key == "f0" || key == "f1" ||
                    key == "grid" || key == "apply" || key == "options" || key == "out_dir",
                "problem spec: unknown key '" + key + "'");
        (void)value;
    }
    require(j.contains("spectrum"), "problem spec: missing 'spectrum'");
    require(j.contains("interval"), "problem spec: missing 'interval'");
    require(j.contains("f0"), "problem spec: missing 'f0'");
    require(j.contains("f1"), "problem spec: missing 'f1'");

    const nlohmann::json& ij = j["interval"];
    require(ij.is_object(), "interval must be an object");
    const double a = require_number(ij, "a", "interval");
    const double b = require_number(ij, "b", "interval");
    require(a < b, "interval: need a < b");

    const auto space = Space::make(spectrum_from_json(j["spectrum"]));

    OperatorOptions options;
    if (j.contains("options")) {
        const nlohmann::json& oj = j["options"];
        require(oj.is_object(), "options must be an object");
        for (const auto& [key, value] : oj.items()) {
            if (key == "expansion_tol") {
                options.expansion_tol = require_number(oj, key, "options");
            } else if (key == "endpoint_identity_tol") {
                options.endpoint_identity_tol = require_number(oj, key, "options");
            } else if (key == "clamp_tol") {
                options.clamp_tol = require_number(oj, key, "options");
            } else if (key == "audit_grid") {
                options.audit_grid = static_cast<std::size_t>(require_integer(oj, key, "options"));
            } else if (key == "rank_tol") {
                options.basis.rank_tol = require_number(oj, key, "options");
            } else if (key == "residual_warn") {
                options.basis.residual_warn = require_number(oj, key, "options");
            } else if (key == "soft_degree_cap") {
                options.basis.soft_degree_cap =
                    static_cast<std::size_t>(require_integer(oj, key, "options"));
            } else if (key == "hard_degree_cap") {
                options.basis.hard_degree_cap =
                    static_cast<std::size_t>(require_integer(oj, key, "options"));
            } else if (key == "route") {
                require(value.is_string(), "options: 'route' must be a string");
                const std::string route = value.get<std::string>();
                if (route == "svd") {
                    options.basis.route = KernelRoute::Svd;
                } else if (route == "lu") {
                    options.basis.route = KernelRoute::FullPivLu;
                } else {
                    throw SpecParseError("options: route must be 'svd' or 'lu'");
                }
            } else {
                throw SpecParseError("options: unknown key '" + key + "'");
            }
        }
    }

    ProblemSpec spec{space,
                     Interval(a, b),
                     resolve_function(space, j["f0"], "f0"),
                     resolve_function(space, j["f1"], "f1"),
                     101,
                     {},
                     "",
                     "",
                     options};

    if (j.contains("grid")) {
        require(j["grid"].is_number_integer(), "grid must be an integer");
        spec.grid = j["grid"].get<int>();
        require(spec.grid >= 2, "grid must be at least 2");
    }
    if (j.contains("apply")) {
        const nlohmann::json& aj = j["apply"];
        if (aj.is_string()) {
            spec.apply_name = aj.get<std::string>();
            spec.apply_fn = preset_evaluator(spec.apply_name);
        } else {
            const SpaceElement elem = resolve_function(space, aj, "apply");
            spec.apply_name = "custom";
            spec.apply_fn = [elem](double x) { return elem(x); };
        }
    }
    if (j.contains("out_dir")) {
        require(j["out_dir"].is_string(), "out_dir must be a string");
        spec.out_dir = j["out_dir"].get<std::string>();
    }
    return spec;
}

ScanSpec parse_scan_spec(const nlohmann::json& j) {
    require(j.is_object(), "scan spec must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        require(key == "scan" || key == "out_dir", "scan spec: unknown key '" + key + "'");
        (void)value;
    }
    require(j.contains("scan"), "scan spec: missing 'scan'");
    const nlohmann::json& sj = j["scan"];
    require(sj.is_object(), "'scan' must be an object");
    for (const auto& [key, value] : sj.items()) {
        require(key == "b_min" || key == "b_max" || key == "steps",
                "scan: unknown key '" + key + "'");
        (void)value;
    }
    ScanSpec spec;
    spec.b_min = require_number(sj, "b_min", "scan");
    spec.b_max = require_number(sj, "b_max", "scan");
    spec.steps = require_integer(sj, "steps", "scan");
    if (j.contains("out_dir")) {
        require(j["out_dir"].is_string(), "out_dir must be a string");
        spec.out_dir = j["out_dir"].get<std::string>();
    }
    return spec;
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw SpecParseError("cannot read '" + path + "'");
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw SpecParseError("invalid JSON in '" + path + "': " + e.what());
    }
}

}  // namespace bernstein
