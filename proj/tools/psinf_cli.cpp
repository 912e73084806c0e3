// Command-line front end: scenario validation, postselected-inflation solves,
// orbit counting, the sleeper scans and optimization, and the fanout
// comparison. CSV uses comma separators, LF line endings, and a mandatory
// header row; identical inputs and flags produce byte-identical outputs.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "psinf/fanout.hpp"
#include "psinf/inflation.hpp"
#include "psinf/lp.hpp"
#include "psinf/rational.hpp"
#include "psinf/scenario.hpp"
#include "psinf/sleeper.hpp"
#include "psinf/strategy.hpp"

namespace {

using namespace psinf;

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    return file;
}

Reduce parse_reduce(const std::string& name) {
    if (name == "none") return Reduce::none;
    if (name == "diagonal") return Reduce::diagonal;
    if (name == "slot-class") return Reduce::slot_class;
    throw CLI::ValidationError("--reduce must be none, diagonal or slot-class");
}

int cmd_validate(const std::string& scenario_path) {
    const auto scenario = load_scenario_file(scenario_path);
    const auto rep = validate(scenario);
    if (rep.ok()) {
        std::cout << "valid\n";
        return 0;
    }
    for (const auto& v : rep.violations) std::cout << "violation: " << v << "\n";
    return 2;
}

int cmd_solve(const std::string& scenario_path, const std::string& spec_path,
              const std::string& targets_path, const std::string& export_path,
              const std::string& reduce_name) {
    const auto scenario = load_scenario_file(scenario_path);
    const auto spec = load_inflation_spec_file(spec_path, scenario);
    const auto targets = load_targets_file(targets_path);
    const auto lp = build_lp(scenario, spec, targets, parse_reduce(reduce_name));
    if (!export_path.empty()) {
        std::ofstream out(export_path);
        if (!out) throw std::runtime_error("cannot open output file: " + export_path);
        write_lp(out, lp);
    }
    const auto res = solve_feasibility(lp);
    std::cout << (res.feasible ? "feasible" : "infeasible") << " vars=" << lp.num_vars
              << " rows=" << lp.num_rows() << "\n";
    return res.feasible ? 0 : 1;
}

int cmd_orbits(int rows, int cols, int outcomes, bool diagonal, bool dump) {
    RelabelGroup g = diagonal ? RelabelGroup::diagonal(rows, 2) : RelabelGroup::rows_cols(rows);
    const auto reps = orbit_representatives({rows, cols}, outcomes, g);
    std::cout << reps.size() << "\n";
    if (dump)
        for (const auto& s : reps) {
            for (std::size_t i = 0; i < s.table.size(); ++i)
                std::cout << (i ? " " : "") << static_cast<int>(s.table[i]);
            std::cout << "\n";
        }
    return 0;
}

int cmd_scan(const std::string& lo, const std::string& hi, const std::string& step,
             const std::string& out_path, bool exact, int workers) {
    const auto result = scan_grid(parse_rational(lo), parse_rational(hi), parse_rational(step),
                                  workers);
    std::ofstream file;
    auto& out = open_out(file, out_path);
    out << "lambda1,lambda2,verdict" << (exact ? ",lambda1_exact,lambda2_exact" : "") << "\n";
    for (const auto& pt : result) {
        out << decimal_string(pt.lambda1) << ',' << decimal_string(pt.lambda2) << ','
            << (pt.feasible ? 'F' : 'I');
        if (exact) out << ',' << frac_string(pt.lambda1) << ',' << frac_string(pt.lambda2);
        out << "\n";
    }
    return 0;
}

int cmd_boundary(const std::string& lambda1, const std::string& tol, const std::string& out_path,
                 bool exact) {
    const Rational l1 = parse_rational(lambda1);
    const Rational l2 = trace_boundary(l1, parse_rational(tol));
    std::ofstream file;
    auto& out = open_out(file, out_path);
    out << "lambda1,lambda2_star" << (exact ? ",lambda1_exact,lambda2_star_exact" : "") << "\n";
    out << decimal_string(l1) << ',' << decimal_string(l2);
    if (exact) out << ',' << frac_string(l1) << ',' << frac_string(l2);
    out << "\n";
    return 0;
}

int cmd_optimize() {
    const auto res = optimize();
    std::cout << "primal=" << short_frac_string(res.primal) << " dual="
              << short_frac_string(res.dual) << " z=";
    for (std::size_t i = 0; i < res.dual_z.size(); ++i)
        std::cout << (i ? "," : "") << short_frac_string(res.dual_z[i]);
    std::cout << " verified=" << (res.certificate_valid ? "true" : "false") << "\n";
    return 0;
}

int cmd_extended(const std::string& tol, int directions, const std::string& out_path, bool exact,
                 int workers) {
    const Rational t = parse_rational(tol);
    const auto trace = polar_boundary_trace(t, directions, workers);
    std::ofstream file;
    auto& out = open_out(file, out_path);
    out << "lambda1,lambda2" << (exact ? ",lambda1_exact,lambda2_exact" : "") << "\n";
    Rational best(1, 2);
    for (const auto& pt : trace) {
        out << decimal_string(pt.lambda1) << ',' << decimal_string(pt.lambda2);
        if (exact) out << ',' << frac_string(pt.lambda1) << ',' << frac_string(pt.lambda2);
        out << "\n";
        if (pt.lambda1 < best) best = pt.lambda1;
        if (pt.lambda2 < best) best = pt.lambda2;
    }
    std::cout << "min_feasible_lambda=" << decimal_string(best) << " ("
              << short_frac_string(best) << ")\n";
    return 0;
}

int cmd_fanout_compare(const std::string& example, const std::string& point,
                       const std::string& target_path) {
    EquivalenceReport rep;
    std::string label;
    if (example == "sleeper") {
        auto comma = point.find(',');
        if (point.empty() || comma == std::string::npos)
            throw CLI::ValidationError("sleeper comparison needs --point L1,L2");
        const Rational l1 = parse_rational(point.substr(0, comma));
        const Rational l2 = parse_rational(point.substr(comma + 1));
        rep = check_equivalence_sleeper(l1, l2);
        label = "sleeper(" + short_frac_string(l1) + "," + short_frac_string(l2) + ")";
    } else if (example == "bilocal") {
        OutcomeDistribution target;
        if (target_path.empty()) {
            target.shape = {2, 2, 2};
            target.probs.assign(8, Rational(1, 8));
        } else {
            target = load_targets_file(target_path).at(0);
        }
        rep = check_equivalence_bilocal(target);
        label = "bilocal";
    } else {
        throw CLI::ValidationError("--example must be sleeper or bilocal");
    }
    std::cout << label << " post=" << (rep.post_feasible ? "feasible" : "infeasible")
              << " fanout=" << (rep.fanout_feasible ? "feasible" : "infeasible")
              << " equal=" << (rep.equal ? "true" : "false") << "\n";
    return rep.equal ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact postselected-inflation feasibility for multi-network scenarios"};
    app.require_subcommand(1);

    std::string scenario_path, spec_path, targets_path, export_path, reduce_name = "diagonal";
    auto* validate_cmd = app.add_subcommand("validate", "check a scenario file");
    validate_cmd->add_option("-s,--scenario", scenario_path, "scenario JSON file")->required();

    auto* solve_cmd = app.add_subcommand("solve", "solve a postselected-inflation feasibility LP");
    solve_cmd->add_option("-s,--scenario", scenario_path, "scenario JSON file")->required();
    solve_cmd->add_option("-i,--inflation", spec_path, "inflation spec JSON file")->required();
    solve_cmd->add_option("-t,--targets", targets_path, "target distributions JSON file")
        ->required();
    solve_cmd->add_option("--export-lp", export_path, "write the LP in text form");
    solve_cmd->add_option("--reduce", reduce_name, "none | diagonal | slot-class");

    int rows = 4, cols = 4, outcomes = 2;
    bool diagonal = false, dump = false;
    auto* orbits_cmd = app.add_subcommand("orbits", "count strategy orbit representatives");
    orbits_cmd->add_option("--rows", rows, "row value cardinality")->required();
    orbits_cmd->add_option("--cols", cols, "column value cardinality")->required();
    orbits_cmd->add_option("--outcomes", outcomes, "outcome cardinality")->required();
    orbits_cmd->add_flag("--diagonal", diagonal, "common permutation for rows and columns");
    orbits_cmd->add_flag("--dump", dump, "print representatives as flat integer rows");

    auto* sleeper_cmd = app.add_subcommand("sleeper", "two-round sleeper task studies");
    sleeper_cmd->require_subcommand(1);
    std::string lo = "1/4", hi = "1/2", step = "1/200", out_path, lambda1 = "1/2", tol = "1/1024";
    bool exact = false;
    int workers = 1, directions = 64;
    auto* scan_cmd = sleeper_cmd->add_subcommand("scan", "feasibility verdicts on a uniform mesh");
    scan_cmd->add_option("--lo", lo, "mesh lower corner (both axes)");
    scan_cmd->add_option("--hi", hi, "mesh upper corner");
    scan_cmd->add_option("--step", step, "mesh step");
    scan_cmd->add_option("-o,--out", out_path, "CSV output file (default stdout)");
    scan_cmd->add_flag("--exact", exact, "append exact num/den columns");
    scan_cmd->add_option("--workers", workers, "worker thread count");
    auto* boundary_cmd =
        sleeper_cmd->add_subcommand("boundary", "dichotomic boundary search on lambda2");
    boundary_cmd->add_option("--lambda1", lambda1, "fixed lambda1");
    boundary_cmd->add_option("--tol", tol, "bracket width");
    boundary_cmd->add_option("-o,--out", out_path, "CSV output file (default stdout)");
    boundary_cmd->add_flag("--exact", exact, "append exact num/den columns");
    auto* optimize_cmd = sleeper_cmd->add_subcommand("optimize", "exact score optimization");
    auto* extended_cmd = sleeper_cmd->add_subcommand(
        "extended", "polar boundary trace over the whole parameter square");
    extended_cmd->add_option("--tol", tol, "radius bracket width");
    extended_cmd->add_option("--directions", directions, "number of rays");
    extended_cmd->add_option("-o,--out", out_path, "CSV output file (default stdout)");
    extended_cmd->add_flag("--exact", exact, "append exact num/den columns");
    extended_cmd->add_option("--workers", workers, "worker thread count");

    std::string example, point;
    auto* fanout_cmd = app.add_subcommand("fanout", "fanout correspondence checks");
    fanout_cmd->require_subcommand(1);
    auto* compare_cmd =
        fanout_cmd->add_subcommand("compare", "postselected vs fanout verdicts");
    compare_cmd->add_option("--example", example, "sleeper | bilocal")->required();
    compare_cmd->add_option("--point", point, "lambda pair L1,L2 for the sleeper");
    compare_cmd->add_option("--target", targets_path, "targets file for the bilocal");

    try {
        app.parse(argc, argv);
        if (*validate_cmd) return cmd_validate(scenario_path);
        if (*solve_cmd)
            return cmd_solve(scenario_path, spec_path, targets_path, export_path, reduce_name);
        if (*orbits_cmd) return cmd_orbits(rows, cols, outcomes, diagonal, dump);
        if (*scan_cmd) return cmd_scan(lo, hi, step, out_path, exact, workers);
        if (*boundary_cmd) return cmd_boundary(lambda1, tol, out_path, exact);
        if (*optimize_cmd) return cmd_optimize();
        if (*extended_cmd) return cmd_extended(tol, directions, out_path, exact, workers);
        if (*compare_cmd) return cmd_fanout_compare(example, point, targets_path);
        return 2;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
