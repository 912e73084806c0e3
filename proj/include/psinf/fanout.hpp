#ifndef PSINF_FANOUT_HPP
#define PSINF_FANOUT_HPP

#include <string>
#include <vector>

#include "psinf/inflation.hpp"
#include "psinf/lp.hpp"
#include "psinf/scenario.hpp"

namespace psinf {

// One copied agent of a fanout inflation graph, identified by its type label
// and its copy coordinates. Each coordinate position lives on an axis; the
// symmetry group permutes every axis independently, and positions sharing an
// axis are permuted by the same element.
struct FanoutAgent {
    std::string label;
    std::vector<int> axes;
    std::vector<int> coords;  // 1-based, coords[k] in 1..axis_sizes[axes[k]]
    int outcomes = 2;
};

struct FanoutMarginal {
    std::vector<int> agents;    // indices into FanoutProblem::agents
    std::vector<Rational> rhs;  // row-major over those agents' outcomes
};

// A symmetric distribution q over the outcomes of the copied agents with
// known marginals on selected agent subsets.
struct FanoutProblem {
    std::vector<int> axis_sizes;
    std::vector<FanoutAgent> agents;
    std::vector<FanoutMarginal> marginals;
};

ValidationReport validate_fanout(const FanoutProblem& problem);

// How the atomic assignments fold into symmetry orbits; assignments are
// numbered mixed-radix with agent 0 most significant.
struct FanoutFold {
    std::vector<int> orbit_of;        // per atomic assignment
    std::vector<std::size_t> rep_of;  // per orbit, its least assignment
    std::vector<long> size_of;        // per orbit
};

// LP over symmetry-orbit representatives of the atomic outcome assignments:
// one nonnegative variable per orbit (the shared atomic probability), a
// normalization row weighted by orbit sizes, and one row per marginal
// component. Throws if the atomic-event count exceeds the cap (the error
// names the count).
RationalLP build_fanout_lp(const FanoutProblem& problem, std::size_t cap = 1u << 16,
                           FanoutFold* fold = nullptr);

// Builders for the worked example graphs. Targets use 1-based outcomes.
FanoutProblem fanout_sleeper(const OutcomeDistribution& p1, const OutcomeDistribution& p2,
                             const OutcomeDistribution& u2);
FanoutProblem fanout_bilocal(const OutcomeDistribution& target);
FanoutProblem fanout_triangle3(const OutcomeDistribution& target, int n = 2);
// The one-strategy triangle at inflation cardinality n: n(n-1) agent copies
// with a diagonal symmetry, the two-triangle marginal, and the single-agent
// product marginal. At n = 6 this builds but exceeds any desk-scale cap.
FanoutProblem fanout_triangle1(const OutcomeDistribution& target, int n = 6);

struct EquivalenceReport {
    bool post_feasible = false;
    bool fanout_feasible = false;
    bool equal = false;
};

// Solves the postselected and fanout formulations side by side.
EquivalenceReport check_equivalence(const NetworkScenario& scenario, const InflationSpec& spec,
                                    const std::vector<OutcomeDistribution>& targets,
                                    const FanoutProblem& fanout, Reduce reduce,
                                    std::size_t fanout_cap = 1u << 16);

EquivalenceReport check_equivalence_sleeper(const Rational& lambda1, const Rational& lambda2);
EquivalenceReport check_equivalence_bilocal(const OutcomeDistribution& target);

}  // namespace psinf

#endif
