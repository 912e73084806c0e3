#include "psinf/scenario.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace psinf {

namespace {

std::string where(int net, int agent) {
    return "network " + std::to_string(net + 1) + ", agent " + std::to_string(agent + 1);
}

}  // namespace

std::size_t OutcomeDistribution::flat_index(const std::vector<int>& outcomes) const {
    if (outcomes.size() != shape.size()) throw std::invalid_argument("outcome arity mismatch");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (outcomes[i] < 1 || outcomes[i] > shape[i])
            throw std::out_of_range("outcome value out of range");
        idx = idx * static_cast<std::size_t>(shape[i]) + static_cast<std::size_t>(outcomes[i] - 1);
    }
    return idx;
}

ValidationReport OutcomeDistribution::validate() const {
    ValidationReport rep;
    std::size_t card = 1;
    for (int k : shape) card *= static_cast<std::size_t>(k);
    if (card != probs.size()) {
        rep.violations.push_back("distribution has " + std::to_string(probs.size()) +
                                 " entries, shape requires " + std::to_string(card));
        return rep;
    }
    Rational total = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] < 0)
            rep.violations.push_back("negative probability at flat index " + std::to_string(i));
        total += probs[i];
    }
    if (total != 1) rep.violations.push_back("probabilities sum to " + frac_string(total));
    return rep;
}

ValidationReport validate(const NetworkScenario& scenario) {
    ValidationReport rep;
    const int P = scenario.num_strategies();
    for (int p = 0; p < P; ++p) {
        const auto& sig = scenario.strategies[static_cast<std::size_t>(p)];
        if (sig.arity < 1)
            rep.violations.push_back("strategy " + std::to_string(p + 1) + ": arity < 1");
        if (sig.outcomes < 1)
            rep.violations.push_back("strategy " + std::to_string(p + 1) + ": outcomes < 1");
    }
    for (int c = 0; c < scenario.num_networks(); ++c) {
        const auto& net = scenario.networks[static_cast<std::size_t>(c)];
        if (net.num_sources < 0)
            rep.violations.push_back("network " + std::to_string(c + 1) + ": negative source count");
        for (int k = 0; k < net.num_agents(); ++k) {
            const auto& ag = net.agents[static_cast<std::size_t>(k)];
            if (ag.strategy < 1 || ag.strategy > P) {
                rep.violations.push_back(where(c, k) + ": strategy id " +
                                         std::to_string(ag.strategy) + " not in 1.." +
                                         std::to_string(P));
                continue;
            }
            for (int s : ag.sources)
                if (s < 1 || s > net.num_sources)
                    rep.violations.push_back(where(c, k) + ": source index " + std::to_string(s) +
                                             " not in 1.." + std::to_string(net.num_sources));
            const auto& sig = scenario.strategies[static_cast<std::size_t>(ag.strategy - 1)];
            if (static_cast<int>(ag.sources.size()) != sig.arity)
                rep.violations.push_back(where(c, k) + ": inconsistent arity (strategy " +
                                         std::to_string(ag.strategy) + " has " +
                                         std::to_string(sig.arity) + " slots, agent receives " +
                                         std::to_string(ag.sources.size()) + " sources)");
        }
    }
    return rep;
}

NetworkScenario builtin(BuiltinScenario name) {
    NetworkScenario sc;
    switch (name) {
        case BuiltinScenario::bilocal:
            sc.strategies = {{1, 2}, {2, 2}, {1, 2}};
            sc.networks = {{2, {{1, {1}}, {2, {1, 2}}, {3, {2}}}}};
            return sc;
        case BuiltinScenario::triangle3:
            sc.strategies = {{2, 2}, {2, 2}, {2, 2}};
            sc.networks = {{3, {{1, {2, 3}}, {2, {3, 1}}, {3, {1, 2}}}}};
            return sc;
        case BuiltinScenario::triangle1:
            sc.strategies = {{2, 2}};
            sc.networks = {{3, {{1, {2, 3}}, {1, {3, 1}}, {1, {1, 2}}}}};
            return sc;
        case BuiltinScenario::sleeper:
            sc.strategies = {{2, 2}};
            // Two rounds linked through the left input, then through the
            // right input, an isolated round, and the disjoint union of all
            // three with fresh sources.
            sc.networks = {
                {3, {{1, {1, 2}}, {1, {1, 3}}}},
                {3, {{1, {1, 3}}, {1, {2, 3}}}},
                {2, {{1, {1, 2}}}},
                {8, {{1, {1, 2}}, {1, {1, 3}}, {1, {4, 6}}, {1, {5, 6}}, {1, {7, 8}}}},
            };
            return sc;
    }
    throw std::invalid_argument("unknown builtin scenario");
}

NetworkScenario builtin(const std::string& name) {
    if (name == "bilocal") return builtin(BuiltinScenario::bilocal);
    if (name == "triangle3") return builtin(BuiltinScenario::triangle3);
    if (name == "triangle1") return builtin(BuiltinScenario::triangle1);
    if (name == "sleeper") return builtin(BuiltinScenario::sleeper);
    throw std::invalid_argument("unknown builtin scenario: " + name);
}

std::vector<OutcomeDistribution> oracle_compatible(
    const NetworkScenario& scenario, const std::vector<DeterministicStrategy>& strategies) {
    auto rep = validate(scenario);
    if (!rep.ok()) throw std::invalid_argument("invalid scenario: " + rep.violations.front());
    if (static_cast<int>(strategies.size()) != scenario.num_strategies())
        throw std::invalid_argument("need exactly one strategy per strategy id");
    for (int p = 0; p < scenario.num_strategies(); ++p) {
        const auto& sig = scenario.strategies[static_cast<std::size_t>(p)];
        const auto& st = strategies[static_cast<std::size_t>(p)];
        if (st.arity() != sig.arity || st.outcomes != sig.outcomes)
            throw std::invalid_argument("strategy " + std::to_string(p + 1) +
                                        " does not match its signature");
    }

    std::vector<OutcomeDistribution> out;
    for (int c = 0; c < scenario.num_networks(); ++c) {
        const auto& net = scenario.networks[static_cast<std::size_t>(c)];
        const int S = net.num_sources;
        const int N = net.num_agents();

        // Bin count per source: the domain size of every slot reading it.
        std::vector<int> bins(static_cast<std::size_t>(S), 0);
        for (int k = 0; k < N; ++k) {
            const auto& ag = net.agents[static_cast<std::size_t>(k)];
            const auto& st = strategies[static_cast<std::size_t>(ag.strategy - 1)];
            for (int i = 0; i < st.arity(); ++i) {
                int s = ag.sources[static_cast<std::size_t>(i)] - 1;
                int b = st.domain_sizes[static_cast<std::size_t>(i)];
                if (bins[static_cast<std::size_t>(s)] == 0)
                    bins[static_cast<std::size_t>(s)] = b;
                else if (bins[static_cast<std::size_t>(s)] != b)
                    throw std::invalid_argument(
                        where(c, k) + ": bin-count mismatch on source " + std::to_string(s + 1));
            }
        }
        for (int s = 0; s < S; ++s)
            if (bins[static_cast<std::size_t>(s)] == 0) bins[static_cast<std::size_t>(s)] = 1;

        OutcomeDistribution dist;
        std::size_t card = 1;
        for (int k = 0; k < N; ++k) {
            const auto& ag = net.agents[static_cast<std::size_t>(k)];
            int no = scenario.strategies[static_cast<std::size_t>(ag.strategy - 1)].outcomes;
            dist.shape.push_back(no);
            card *= static_cast<std::size_t>(no);
        }
        dist.probs.assign(card, Rational(0));

        std::size_t joint = 1;
        for (int s = 0; s < S; ++s) joint *= static_cast<std::size_t>(bins[static_cast<std::size_t>(s)]);
        Rational weight = rat(1, static_cast<long>(joint));

        std::vector<int> value(static_cast<std::size_t>(S), 1);  // 1-based bin values
        std::vector<int> inputs;
        for (std::size_t it = 0; it < joint; ++it) {
            std::size_t idx = 0;
            for (int k = 0; k < N; ++k) {
                const auto& ag = net.agents[static_cast<std::size_t>(k)];
                const auto& st = strategies[static_cast<std::size_t>(ag.strategy - 1)];
                inputs.clear();
                for (int s : ag.sources) inputs.push_back(value[static_cast<std::size_t>(s - 1)]);
                int o = st.eval(inputs);
                idx = idx * static_cast<std::size_t>(st.outcomes) + static_cast<std::size_t>(o - 1);
            }
            dist.probs[idx] += weight;
            for (int s = S - 1; s >= 0; --s) {
                auto& v = value[static_cast<std::size_t>(s)];
                if (++v <= bins[static_cast<std::size_t>(s)]) break;
                v = 1;
            }
        }
        out.push_back(std::move(dist));
    }
    return out;
}

std::vector<OutcomeDistribution> oracle_compatible(
    const NetworkScenario& scenario, const std::vector<DeterministicStrategy>& strategies,
    const std::vector<std::vector<int>>& bin_counts) {
    if (bin_counts.size() != strategies.size())
        throw std::invalid_argument("need one bin-count list per strategy");
    for (std::size_t p = 0; p < strategies.size(); ++p)
        if (bin_counts[p] != strategies[p].domain_sizes)
            throw std::invalid_argument("bin counts for strategy " + std::to_string(p + 1) +
                                        " do not match its arity/domains");
    return oracle_compatible(scenario, strategies);
}

namespace {

using nlohmann::json;

Rational json_rational(const json& v) {
    if (v.is_number_integer()) return Rational(static_cast<long>(v.get<long long>()));
    if (v.is_string()) return parse_rational(v.get<std::string>());
    throw std::invalid_argument("rationals must be integers or \"p/q\" strings");
}

}  // namespace

NetworkScenario load_scenario(std::istream& in) {
    json doc = json::parse(in);
    NetworkScenario sc;
    for (const auto& s : doc.at("strategies"))
        sc.strategies.push_back({s.at("arity").get<int>(), s.at("outcomes").get<int>()});
    for (const auto& n : doc.at("networks")) {
        Network net;
        net.num_sources = n.at("num_sources").get<int>();
        for (const auto& a : n.at("agents")) {
            AgentSpec ag;
            ag.strategy = a.at("strategy").get<int>();
            ag.sources = a.at("sources").get<std::vector<int>>();
            net.agents.push_back(std::move(ag));
        }
        sc.networks.push_back(std::move(net));
    }
    return sc;
}

NetworkScenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    try {
        return load_scenario(in);
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

std::string scenario_to_json(const NetworkScenario& sc) {
    json doc;
    doc["strategies"] = json::array();
    for (const auto& s : sc.strategies)
        doc["strategies"].push_back({{"arity", s.arity}, {"outcomes", s.outcomes}});
    doc["networks"] = json::array();
    for (const auto& n : sc.networks) {
        json net{{"num_sources", n.num_sources}, {"agents", json::array()}};
        for (const auto& a : n.agents)
            net["agents"].push_back({{"strategy", a.strategy}, {"sources", a.sources}});
        doc["networks"].push_back(std::move(net));
    }
    return doc.dump(2);
}

std::vector<OutcomeDistribution> load_targets_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open targets file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    std::vector<OutcomeDistribution> out;
    for (const auto& t : doc.at("targets")) {
        OutcomeDistribution d;
        d.shape = t.at("shape").get<std::vector<int>>();
        for (const auto& v : t.at("probs")) d.probs.push_back(json_rational(v));
        auto rep = d.validate();
        if (!rep.ok()) throw std::runtime_error(path + ": " + rep.violations.front());
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace psinf
