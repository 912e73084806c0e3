#ifndef PSINF_SLEEPER_HPP
#define PSINF_SLEEPER_HPP

#include <array>
#include <vector>

#include "psinf/inflation.hpp"
#include "psinf/lp.hpp"
#include "psinf/rational.hpp"
#include "psinf/scenario.hpp"

namespace psinf {

// Parametrizes the pair of two-round outcome distributions: lambda_t is the
// probability of equal outcomes being (1,1) when input t is the faithful one.
struct SleeperPoint {
    Rational lambda1;
    Rational lambda2;
};

// Targets for the four sleeper networks: p1, p2, the uniform single-round
// marginal, and p1 (x) p2 (x) uniform. Throws if a lambda leaves [0, 1/2].
std::vector<OutcomeDistribution> lambdas_to_targets(const SleeperPoint& pt);

// The default outer approximation: n = 4, tensor powers (2, 2, 4, 1), one
// all-distinct group per slot class per network.
InflationSpec sleeper_default_spec();

struct PointVerdict {
    bool feasible = false;
    std::vector<Rational> witness;  // mixture weights over the 317 representatives
    std::vector<Rational> farkas;
};

// Builds the coefficient matrix once and reuses it across points.
class SleeperSolver {
public:
    SleeperSolver();
    explicit SleeperSolver(InflationSpec spec);

    PointVerdict check(const SleeperPoint& pt) const;
    const std::vector<StrategyTuple>& variables() const { return tpl_.variables; }
    RationalLP lp_for(const SleeperPoint& pt, std::vector<int>* block_row_counts = nullptr) const;

private:
    NetworkScenario scenario_;
    InflationSpec spec_;
    InflationLPTemplate tpl_;
};

// One-off verdict at the default spec.
PointVerdict check_point(const SleeperPoint& pt);

struct ScanPoint {
    Rational lambda1;
    Rational lambda2;
    bool feasible = false;
};

// Uniform mesh over [lo, hi]^2, row-major in lambda1 then lambda2. Points are
// solved concurrently; the output order is fixed by the grid.
std::vector<ScanPoint> scan_grid(const Rational& lo, const Rational& hi, const Rational& step,
                                 int workers = 1);

// Dichotomic search on lambda2 at fixed lambda1: needs a feasible verdict at
// `lo` and an infeasible one at `hi`, returns the flip point bracketed within
// tol (midpoints are dyadic combinations of the probes).
Rational trace_boundary(const Rational& lambda1, const Rational& tol,
                        const Rational& lo = Rational(1, 4), const Rational& hi = Rational(1, 2));

struct OptimizeResult {
    Rational primal;
    Rational dual;
    std::array<Rational, 4> dual_z;  // (z11, z12, z21, z22)
    std::vector<Rational> witness;
    bool certificate_valid = false;  // dual_z re-checked by verify_dual_sleeper
};

// The score optimization: maximize the average equal-outcome probability over
// mixtures of the 317 representatives subject to the two-copy marginal
// constraint; returns the exact primal and dual values with certificates.
OptimizeResult optimize();

// Feasible endpoints of a dichotomic radius search along rays from
// (1/4, 1/4) to evenly spaced rational points on the border of [0, 1/2]^2.
std::vector<SleeperPoint> polar_boundary_trace(const Rational& tol, int directions = 64,
                                               int workers = 1);

// Smallest coordinate over the polar boundary trace: the least lambda value
// at which some feasible point exists, up to tol plus the angular resolution.
Rational min_feasible_lambda(const Rational& tol, int directions = 64, int workers = 1);

}  // namespace psinf

#endif
