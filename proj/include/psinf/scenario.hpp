#ifndef PSINF_SCENARIO_HPP
#define PSINF_SCENARIO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "psinf/rational.hpp"
#include "psinf/strategy.hpp"

namespace psinf {

struct StrategySignature {
    int arity = 1;     // number of input slots
    int outcomes = 1;  // size of the output domain
};

struct AgentSpec {
    int strategy = 1;          // 1-based strategy id
    std::vector<int> sources;  // ordered 1-based source indices, one per slot
};

// One bilayer network: a layer of independent uniform sources feeding agents.
struct Network {
    int num_sources = 0;
    std::vector<AgentSpec> agents;

    int num_agents() const { return static_cast<int>(agents.size()); }
};

// A list of networks sharing a pool of agent strategies.
struct NetworkScenario {
    std::vector<StrategySignature> strategies;
    std::vector<Network> networks;

    int num_strategies() const { return static_cast<int>(strategies.size()); }
    int num_networks() const { return static_cast<int>(networks.size()); }
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// An exact joint outcome distribution over one network's agents,
// row-major over 1-based outcome tuples.
struct OutcomeDistribution {
    std::vector<int> shape;       // per-agent outcome counts
    std::vector<Rational> probs;  // size = product of shape

    std::size_t size() const { return probs.size(); }
    std::size_t flat_index(const std::vector<int>& outcomes) const;
    ValidationReport validate() const;  // nonnegative entries summing to exactly 1
};

ValidationReport validate(const NetworkScenario& scenario);

enum class BuiltinScenario { bilocal, triangle3, triangle1, sleeper };

NetworkScenario builtin(BuiltinScenario name);
NetworkScenario builtin(const std::string& name);  // throws on unknown name

// Exact outcome distributions of every network under the given deterministic
// strategies over binned source values (one strategy per strategy id; a
// strategy's per-slot domain sizes are its bin counts). Sources are averaged
// uniformly over all joint bin assignments, by full enumeration.
std::vector<OutcomeDistribution> oracle_compatible(
    const NetworkScenario& scenario, const std::vector<DeterministicStrategy>& strategies);

// Same, with the intended bin counts stated explicitly; errors if they do not
// match the strategies' domains.
std::vector<OutcomeDistribution> oracle_compatible(
    const NetworkScenario& scenario, const std::vector<DeterministicStrategy>& strategies,
    const std::vector<std::vector<int>>& bin_counts);

// JSON document I/O for the scenario schema documented in the README.
NetworkScenario load_scenario(std::istream& in);
NetworkScenario load_scenario_file(const std::string& path);
std::string scenario_to_json(const NetworkScenario& scenario);

// Target distributions file: one distribution per network.
std::vector<OutcomeDistribution> load_targets_file(const std::string& path);

}  // namespace psinf

#endif
