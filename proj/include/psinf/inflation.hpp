#ifndef PSINF_INFLATION_HPP
#define PSINF_INFLATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "psinf/lp.hpp"
#include "psinf/scenario.hpp"
#include "psinf/strategy.hpp"

namespace psinf {

// Inflation of one network: tensor power m, plus a grouping of the m * S_c
// inflated sources. Every group is constrained all-pairwise-distinct; ids not
// listed in any group are unconstrained singletons. Inflated source ids are
// 0-based: copy j of (1-based) source s has id j*S_c + (s-1). m = 0 drops the
// network's constraint block entirely.
struct NetworkInflation {
    int m = 1;
    std::vector<std::vector<int>> groups;
};

struct InflationSpec {
    int n = 2;  // discretized source cardinality
    std::vector<NetworkInflation> networks;
};

// One deterministic strategy per strategy id, all slots over {1..n}.
using StrategyTuple = std::vector<DeterministicStrategy>;

ValidationReport validate_spec(const NetworkScenario& scenario, const InflationSpec& spec);

// The fully postselected spec: a single all-distinct group over all m * S_c
// inflated sources of every network; requires n >= max_c S_c * m.
InflationSpec full_postselection_spec(const NetworkScenario& scenario, int n, int m);

// The reduced postselection: one all-distinct group per slot class per
// network (the per-network powers may differ). Requires n >= largest group.
InflationSpec slot_class_spec(const NetworkScenario& scenario, int n, std::vector<int> m_per_network);

// Slot classes: (strategy, slot) pairs joined whenever some network wires
// them to a common source. Returned as per-strategy per-slot class ids,
// contiguous from 0.
std::vector<std::vector<int>> slot_classes(const NetworkScenario& scenario);

// JSON loader for `{n, networks: [{m, groups: [[ids]]}]}`.
InflationSpec load_inflation_spec_file(const std::string& path, const NetworkScenario& scenario);

// All joint value assignments (1..n per inflated source) respecting every
// group's all-distinct constraint, each carrying the same weight
// prod_groups (n-k)!/n!; the weights sum to exactly 1.
struct AdmissibleSet {
    std::vector<std::vector<std::uint8_t>> assignments;
    Rational weight;
};
AdmissibleSet admissible_assignments(const InflationSpec& spec, const NetworkScenario& scenario,
                                     int network);

// Weighted fraction of admissible assignments on which every inflated agent
// of the network outputs its assigned outcome (outcomes are 1-based, ordered
// copy 0 agents first, then copy 1, ...).
Rational coefficient(const StrategyTuple& tuple, const NetworkScenario& scenario,
                     const InflationSpec& spec, int network, const std::vector<int>& outcome);

// Hit counts behind the coefficients: counts[o][v] admissible assignments on
// which variable v produces the o-th outcome assignment (lexicographic).
// coefficient = counts * weight of the network's admissible set.
std::vector<std::vector<long>> block_hit_counts(const NetworkScenario& scenario,
                                                const InflationSpec& spec, int network,
                                                const std::vector<StrategyTuple>& variables);

enum class Reduce { none, diagonal, slot_class };

// Lexicographically least tuple in the joint orbit under simultaneous
// relabeling of source values (one common S_n, or one S_n per slot class).
StrategyTuple canonicalize_tuple(const StrategyTuple& tuple, int n,
                                 const std::vector<std::vector<int>>& classes, bool diagonal);

// Canonical representatives of all strategy tuples at cardinality n.
std::vector<StrategyTuple> tuple_orbit_representatives(const NetworkScenario& scenario, int n,
                                                       Reduce reduce, std::size_t cap = 1u << 20);

// The target-independent part of the inflation LP: variables and exact
// coefficient rows per network block. Instantiating with targets fills in
// right-hand sides, deduplicates identical (coefficients, rhs) rows, and
// prepends the normalization row. The all-maximal outcome row of each block
// is omitted as redundant given normalization.
struct BlockRowTemplate {
    std::vector<int> outcome;
    std::vector<Rational> coeffs;  // one per variable
    int coeff_class = -1;          // rows sharing coefficients share a class id
};
struct NetworkBlockTemplate {
    int network = 0;
    std::vector<BlockRowTemplate> rows;
};
struct InflationLPTemplate {
    int n = 0;
    std::vector<StrategyTuple> variables;
    std::vector<NetworkBlockTemplate> blocks;

    // Rows kept per block, after dedup, for inspection by callers.
    RationalLP instantiate(const std::vector<OutcomeDistribution>& targets,
                           std::vector<int>* block_row_counts = nullptr) const;
};

InflationLPTemplate build_lp_template(const NetworkScenario& scenario, const InflationSpec& spec,
                                      Reduce reduce, std::size_t var_cap = 1u << 20);

// Same, over a caller-supplied variable subset (sound for feasibility
// certification: any feasible sub-LP witnesses the full LP).
InflationLPTemplate build_lp_template(const NetworkScenario& scenario, const InflationSpec& spec,
                                      std::vector<StrategyTuple> variables);

RationalLP build_lp(const NetworkScenario& scenario, const InflationSpec& spec,
                    const std::vector<OutcomeDistribution>& targets, Reduce reduce,
                    std::size_t var_cap = 1u << 20);

// Indices of the first occurrence of each distinct (coefficients, rhs) pair,
// in order.
std::vector<int> dedup_rows(const std::vector<std::vector<Rational>>& rows,
                            const std::vector<Rational>& rhs);

// Support of the constructive feasibility witness for targets produced by
// oracle_compatible(scenario, originals): one strategy tuple per joint choice
// of per-pool lookup tables {1..n} -> bins. Pools are slot classes merged
// along shared postselection groups; requires, per network, that each pool's
// inflated sources lie in a single group.
std::vector<StrategyTuple> certification_support(const NetworkScenario& scenario,
                                                 const InflationSpec& spec,
                                                 const std::vector<DeterministicStrategy>& originals);

}  // namespace psinf

#endif
