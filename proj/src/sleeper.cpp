#include "psinf/sleeper.hpp"

#include <stdexcept>

#include "psinf/parallel.hpp"

namespace psinf {

namespace {

void check_range(const SleeperPoint& pt) {
    if (pt.lambda1 < 0 || pt.lambda1 > Rational(1, 2) || pt.lambda2 < 0 ||
        pt.lambda2 > Rational(1, 2))
        throw std::invalid_argument("sleeper lambdas must lie in [0, 1/2]");
}

OutcomeDistribution pair_distribution(const Rational& lambda) {
    OutcomeDistribution d;
    d.shape = {2, 2};
    Rational off = Rational(1, 2) - lambda;
    d.probs = {lambda, off, off, lambda};
    return d;
}

}  // namespace

std::vector<OutcomeDistribution> lambdas_to_targets(const SleeperPoint& pt) {
    check_range(pt);
    OutcomeDistribution p1 = pair_distribution(pt.lambda1);
    OutcomeDistribution p2 = pair_distribution(pt.lambda2);
    OutcomeDistribution u2;
    u2.shape = {2};
    u2.probs = {Rational(1, 2), Rational(1, 2)};

    OutcomeDistribution joint;
    joint.shape = {2, 2, 2, 2, 2};
    joint.probs.reserve(32);
    for (int a1 = 1; a1 <= 2; ++a1)
        for (int a2 = 1; a2 <= 2; ++a2)
            for (int a3 = 1; a3 <= 2; ++a3)
                for (int a4 = 1; a4 <= 2; ++a4)
                    for (int a5 = 1; a5 <= 2; ++a5)
                        joint.probs.push_back(p1.probs[p1.flat_index({a1, a2})] *
                                              p2.probs[p2.flat_index({a3, a4})] *
                                              u2.probs[static_cast<std::size_t>(a5 - 1)]);
    return {p1, p2, u2, joint};
}

InflationSpec sleeper_default_spec() {
    return slot_class_spec(builtin(BuiltinScenario::sleeper), 4, {2, 2, 4, 1});
}

SleeperSolver::SleeperSolver() : SleeperSolver(sleeper_default_spec()) {}

SleeperSolver::SleeperSolver(InflationSpec spec)
    : scenario_(builtin(BuiltinScenario::sleeper)),
      spec_(std::move(spec)),
      tpl_(build_lp_template(scenario_, spec_, Reduce::slot_class)) {}

RationalLP SleeperSolver::lp_for(const SleeperPoint& pt, std::vector<int>* block_row_counts) const {
    return tpl_.instantiate(lambdas_to_targets(pt), block_row_counts);
}

PointVerdict SleeperSolver::check(const SleeperPoint& pt) const {
    auto res = solve_feasibility(lp_for(pt));
    PointVerdict v;
    v.feasible = res.feasible;
    v.witness = std::move(res.witness);
    v.farkas = std::move(res.farkas);
    return v;
}

namespace {

const SleeperSolver& default_solver() {
    static const SleeperSolver solver;
    return solver;
}

}  // namespace

PointVerdict check_point(const SleeperPoint& pt) { return default_solver().check(pt); }

std::vector<ScanPoint> scan_grid(const Rational& lo, const Rational& hi, const Rational& step,
                                 int workers) {
    if (step <= 0) throw std::invalid_argument("grid step must be positive");
    std::vector<Rational> axis;
    for (Rational v = lo; v <= hi; v += step) axis.push_back(v);

    const SleeperSolver& solver = default_solver();
    std::vector<ScanPoint> out(axis.size() * axis.size());
    parallel_for(out.size(), workers, [&](std::size_t i) {
        const Rational& l1 = axis[i / axis.size()];
        const Rational& l2 = axis[i % axis.size()];
        out[i] = {l1, l2, solver.check({l1, l2}).feasible};
    });
    return out;
}

Rational trace_boundary(const Rational& lambda1, const Rational& tol, const Rational& lo,
                        const Rational& hi) {
    if (tol <= 0) throw std::invalid_argument("tolerance must be positive");
    const SleeperSolver& solver = default_solver();
    Rational a = lo, b = hi;
    if (!solver.check({lambda1, a}).feasible)
        throw std::runtime_error("no crossing: lower probe already infeasible");
    // whole interval feasible: the flip sits at (or beyond) the upper edge
    if (solver.check({lambda1, b}).feasible) return b;
    while (b - a > tol) {
        Rational mid = (a + b) / 2;
        if (solver.check({lambda1, mid}).feasible)
            a = mid;
        else
            b = mid;
    }
    return (a + b) / 2;
}

OptimizeResult optimize() {
    const auto scenario = builtin(BuiltinScenario::sleeper);
    // Networks 1 and 2 at power 1 carry the objective; the isolated round at
    // power 2 carries the two-copy marginal constraint. Network 4 is unused.
    const auto spec = slot_class_spec(scenario, 4, {1, 1, 2, 0});
    const auto variables = tuple_orbit_representatives(scenario, 4, Reduce::slot_class);
    const std::size_t V = variables.size();

    RationalLP lp;
    lp.num_vars = static_cast<int>(V);

    // Constraint rows: both copies of the isolated agent, all four outcome
    // pairs, each pinned to 1/4.
    {
        const auto counts = block_hit_counts(scenario, spec, 2, variables);
        const Rational w = admissible_assignments(spec, scenario, 2).weight;
        for (std::size_t o = 0; o < counts.size(); ++o) {
            std::vector<Rational> row;
            row.reserve(V);
            for (std::size_t v = 0; v < V; ++v) row.push_back(Rational(counts[o][v]) * w);
            lp.add_row(std::move(row), Rational(1, 4));
        }
    }

    // Objective: average probability of equal outcomes across the two
    // single-copy linked networks.
    lp.objective.assign(V, Rational(0));
    for (int c : {0, 1}) {
        const auto counts = block_hit_counts(scenario, spec, c, variables);
        const Rational w = admissible_assignments(spec, scenario, c).weight;
        // outcomes of the 2-agent block in lexicographic order: (1,1) .. (2,2)
        for (std::size_t o : {std::size_t{0}, std::size_t{3}})
            for (std::size_t v = 0; v < V; ++v)
                lp.objective[v] += Rational(counts[o][v]) * w / 2;
    }

    auto res = solve_max(lp);
    if (res.status != SolveStatus::optimal)
        throw std::runtime_error("sleeper optimization did not reach an optimum");

    OptimizeResult out;
    out.primal = res.optimum;
    out.witness = std::move(res.witness);
    out.dual_z = {res.dual[0], res.dual[1], res.dual[2], res.dual[3]};
    Rational dual_value = 0;
    for (const auto& z : out.dual_z) dual_value += z / 4;
    out.dual = dual_value;
    out.certificate_valid = verify_dual_sleeper(out.dual_z).valid;
    return out;
}

std::vector<SleeperPoint> polar_boundary_trace(const Rational& tol, int directions, int workers) {
    if (tol <= 0) throw std::invalid_argument("tolerance must be positive");
    if (directions < 4) throw std::invalid_argument("need at least 4 directions");
    const SleeperSolver& solver = default_solver();

    const Rational cx(1, 4), cy(1, 4), side(1, 2);
    if (!solver.check({cx, cy}).feasible)
        throw std::runtime_error("polar trace center unexpectedly infeasible");

    // Evenly spaced rational targets along the border of [0, 1/2]^2.
    std::vector<SleeperPoint> border;
    for (int k = 0; k < directions; ++k) {
        Rational t = rat(4 * k, directions);  // in [0, 4)
        Rational pos = t - t.get_num() / t.get_den();
        long segment = mpz_class(t.get_num() / t.get_den()).get_si();
        switch (segment) {
            case 0: border.push_back({side * pos, Rational(0)}); break;
            case 1: border.push_back({side, side * pos}); break;
            case 2: border.push_back({side - side * pos, side}); break;
            default: border.push_back({Rational(0), side - side * pos}); break;
        }
    }

    std::vector<SleeperPoint> trace(border.size());
    parallel_for(border.size(), workers, [&](std::size_t i) {
        const Rational dx = border[i].lambda1 - cx, dy = border[i].lambda2 - cy;
        auto at = [&](const Rational& r) { return SleeperPoint{cx + r * dx, cy + r * dy}; };
        Rational lo = 0, hi = 1;
        if (solver.check(at(hi)).feasible) {
            trace[i] = at(hi);
            return;
        }
        while (hi - lo > tol) {
            Rational mid = (lo + hi) / 2;
            if (solver.check(at(mid)).feasible)
                lo = mid;
            else
                hi = mid;
        }
        trace[i] = at(lo);
    });
    return trace;
}

Rational min_feasible_lambda(const Rational& tol, int directions, int workers) {
    const auto trace = polar_boundary_trace(tol, directions, workers);
    Rational best = Rational(1, 2);
    for (const auto& pt : trace) {
        if (pt.lambda1 < best) best = pt.lambda1;
        if (pt.lambda2 < best) best = pt.lambda2;
    }
    return best;
}

}  // namespace psinf
