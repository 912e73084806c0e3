#include "psinf/inflation.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace psinf {

namespace {

constexpr std::size_t kAssignmentCap = 10'000'000;
constexpr std::size_t kGroupOrderCap = 20'000;

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int k) : parent(static_cast<std::size_t>(k)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
};

struct InflatedAgent {
    int strategy;                 // 0-based
    std::vector<int> source_ids;  // 0-based inflated source ids
};

std::vector<InflatedAgent> inflated_agents(const NetworkScenario& scenario, int network, int m) {
    const auto& net = scenario.networks[static_cast<std::size_t>(network)];
    std::vector<InflatedAgent> out;
    for (int j = 0; j < m; ++j)
        for (const auto& ag : net.agents) {
            InflatedAgent ia;
            ia.strategy = ag.strategy - 1;
            for (int s : ag.sources) ia.source_ids.push_back(j * net.num_sources + (s - 1));
            out.push_back(std::move(ia));
        }
    return out;
}

// Class id of every inflated source of a network, -1 for sources no agent
// reads. Classes are the global slot classes of the scenario.
std::vector<int> network_source_classes(const NetworkScenario& scenario,
                                        const std::vector<std::vector<int>>& classes, int network,
                                        int m) {
    const auto& net = scenario.networks[static_cast<std::size_t>(network)];
    std::vector<int> source_class(static_cast<std::size_t>(net.num_sources), -1);
    for (const auto& ag : net.agents) {
        for (std::size_t i = 0; i < ag.sources.size(); ++i) {
            int s = ag.sources[i] - 1;
            int cls = classes[static_cast<std::size_t>(ag.strategy - 1)][i];
            if (source_class[static_cast<std::size_t>(s)] == -1)
                source_class[static_cast<std::size_t>(s)] = cls;
        }
    }
    std::vector<int> out(static_cast<std::size_t>(m * net.num_sources));
    for (int j = 0; j < m; ++j)
        for (int s = 0; s < net.num_sources; ++s)
            out[static_cast<std::size_t>(j * net.num_sources + s)] =
                source_class[static_cast<std::size_t>(s)];
    return out;
}

void check_variables(const NetworkScenario& scenario, int n,
                     const std::vector<StrategyTuple>& variables) {
    for (const auto& tuple : variables) {
        if (static_cast<int>(tuple.size()) != scenario.num_strategies())
            throw std::invalid_argument("strategy tuple size does not match scenario");
        for (int p = 0; p < scenario.num_strategies(); ++p) {
            const auto& sig = scenario.strategies[static_cast<std::size_t>(p)];
            const auto& st = tuple[static_cast<std::size_t>(p)];
            if (st.arity() != sig.arity || st.outcomes != sig.outcomes)
                throw std::invalid_argument("tuple strategy does not match its signature");
            for (int d : st.domain_sizes)
                if (d != n) throw std::invalid_argument("tuple strategy domain must be {1..n}");
        }
    }
}

}  // namespace

ValidationReport validate_spec(const NetworkScenario& scenario, const InflationSpec& spec) {
    ValidationReport rep;
    if (spec.n < 1) rep.violations.push_back("n must be >= 1");
    if (static_cast<int>(spec.networks.size()) != scenario.num_networks()) {
        rep.violations.push_back("spec must list one inflation per network");
        return rep;
    }
    for (int c = 0; c < scenario.num_networks(); ++c) {
        const auto& inf = spec.networks[static_cast<std::size_t>(c)];
        const int S = scenario.networks[static_cast<std::size_t>(c)].num_sources;
        if (inf.m < 0)
            rep.violations.push_back("network " + std::to_string(c + 1) + ": m must be >= 0");
        std::set<int> seen;
        for (const auto& g : inf.groups) {
            for (int id : g) {
                if (id < 0 || id >= inf.m * S)
                    rep.violations.push_back("network " + std::to_string(c + 1) +
                                             ": group id " + std::to_string(id) + " out of range");
                else if (!seen.insert(id).second)
                    rep.violations.push_back("network " + std::to_string(c + 1) + ": group id " +
                                             std::to_string(id) + " listed twice");
            }
            if (static_cast<int>(g.size()) > spec.n)
                rep.violations.push_back("network " + std::to_string(c + 1) +
                                         ": unsatisfiable group of size " +
                                         std::to_string(g.size()) + " at n = " +
                                         std::to_string(spec.n));
        }
    }
    return rep;
}

InflationSpec full_postselection_spec(const NetworkScenario& scenario, int n, int m) {
    InflationSpec spec;
    spec.n = n;
    for (const auto& net : scenario.networks) {
        NetworkInflation inf;
        inf.m = m;
        std::vector<int> all(static_cast<std::size_t>(m * net.num_sources));
        std::iota(all.begin(), all.end(), 0);
        if (!all.empty()) inf.groups.push_back(std::move(all));
        if (m * net.num_sources > n)
            throw std::invalid_argument("need n >= " + std::to_string(m * net.num_sources) +
                                        " for the fully postselected spec");
        spec.networks.push_back(std::move(inf));
    }
    return spec;
}

InflationSpec slot_class_spec(const NetworkScenario& scenario, int n,
                              std::vector<int> m_per_network) {
    if (static_cast<int>(m_per_network.size()) != scenario.num_networks())
        throw std::invalid_argument("need one tensor power per network");
    const auto classes = slot_classes(scenario);
    InflationSpec spec;
    spec.n = n;
    for (int c = 0; c < scenario.num_networks(); ++c) {
        NetworkInflation inf;
        inf.m = m_per_network[static_cast<std::size_t>(c)];
        const auto src_class = network_source_classes(scenario, classes, c, inf.m);
        std::map<int, std::vector<int>> by_class;
        for (int id = 0; id < static_cast<int>(src_class.size()); ++id)
            if (src_class[static_cast<std::size_t>(id)] >= 0)
                by_class[src_class[static_cast<std::size_t>(id)]].push_back(id);
        for (auto& [cls, ids] : by_class) {
            if (static_cast<int>(ids.size()) > n)
                throw std::invalid_argument("slot-class group of size " +
                                            std::to_string(ids.size()) +
                                            " unsatisfiable at n = " + std::to_string(n));
            inf.groups.push_back(std::move(ids));
        }
        spec.networks.push_back(std::move(inf));
    }
    return spec;
}

std::vector<std::vector<int>> slot_classes(const NetworkScenario& scenario) {
    std::vector<int> offset;
    int total = 0;
    for (const auto& sig : scenario.strategies) {
        offset.push_back(total);
        total += sig.arity;
    }
    UnionFind uf(total);
    for (const auto& net : scenario.networks) {
        std::vector<int> first_slot(static_cast<std::size_t>(net.num_sources), -1);
        for (const auto& ag : net.agents) {
            for (std::size_t i = 0; i < ag.sources.size(); ++i) {
                int slot = offset[static_cast<std::size_t>(ag.strategy - 1)] + static_cast<int>(i);
                int s = ag.sources[i] - 1;
                if (first_slot[static_cast<std::size_t>(s)] == -1)
                    first_slot[static_cast<std::size_t>(s)] = slot;
                else
                    uf.unite(first_slot[static_cast<std::size_t>(s)], slot);
            }
        }
    }
    std::map<int, int> relabel;
    std::vector<std::vector<int>> out;
    for (int p = 0; p < scenario.num_strategies(); ++p) {
        std::vector<int> cls;
        for (int i = 0; i < scenario.strategies[static_cast<std::size_t>(p)].arity; ++i) {
            int root = uf.find(offset[static_cast<std::size_t>(p)] + i);
            auto [it, fresh] = relabel.try_emplace(root, static_cast<int>(relabel.size()));
            cls.push_back(it->second);
            (void)fresh;
        }
        out.push_back(std::move(cls));
    }
    return out;
}

InflationSpec load_inflation_spec_file(const std::string& path, const NetworkScenario& scenario) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open inflation spec file: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    InflationSpec spec;
    spec.n = doc.at("n").get<int>();
    for (const auto& n : doc.at("networks")) {
        NetworkInflation inf;
        inf.m = n.at("m").get<int>();
        if (n.contains("groups"))
            inf.groups = n.at("groups").get<std::vector<std::vector<int>>>();
        spec.networks.push_back(std::move(inf));
    }
    auto rep = validate_spec(scenario, spec);
    if (!rep.ok()) throw std::runtime_error(path + ": " + rep.violations.front());
    return spec;
}

AdmissibleSet admissible_assignments(const InflationSpec& spec, const NetworkScenario& scenario,
                                     int network) {
    auto rep = validate_spec(scenario, spec);
    if (!rep.ok()) throw std::invalid_argument("invalid inflation spec: " + rep.violations.front());

    const auto& inf = spec.networks[static_cast<std::size_t>(network)];
    const int S = scenario.networks[static_cast<std::size_t>(network)].num_sources;
    const int total_ids = inf.m * S;
    const int n = spec.n;

    // Choice units: one per group (an injective tuple) and one per singleton.
    std::vector<std::vector<int>> units;  // ids per unit
    std::vector<bool> grouped(static_cast<std::size_t>(total_ids), false);
    for (const auto& g : inf.groups) {
        units.push_back(g);
        for (int id : g) grouped[static_cast<std::size_t>(id)] = true;
    }
    for (int id = 0; id < total_ids; ++id)
        if (!grouped[static_cast<std::size_t>(id)]) units.push_back({id});

    std::size_t count = 1;
    for (const auto& u : units) {
        std::size_t c = 1;
        for (std::size_t i = 0; i < u.size(); ++i) c *= static_cast<std::size_t>(n) - i;
        if (c == 0 || count > kAssignmentCap / c)
            throw std::invalid_argument("admissible assignment set too large");
        count *= c;
    }

    AdmissibleSet out;
    out.weight = rat(1, static_cast<long>(count));
    out.assignments.reserve(count);

    // Odometer over per-unit injective tuples.
    std::vector<std::vector<std::vector<std::uint8_t>>> unit_tuples;
    for (const auto& u : units) {
        std::vector<std::vector<std::uint8_t>> tuples;
        std::vector<std::uint8_t> cur(u.size(), 0);
        std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
        // depth-first enumeration of injective tuples in lexicographic order
        std::size_t depth = 0;
        std::vector<int> next(u.size() + 1, 1);
        for (;;) {
            if (depth == u.size()) {
                tuples.push_back(cur);
                if (depth == 0) break;
                --depth;
                used[cur[depth]] = false;
                next[depth] = cur[depth] + 1;
                continue;
            }
            int v = next[depth];
            while (v <= n && used[static_cast<std::size_t>(v)]) ++v;
            if (v > n) {
                if (depth == 0) break;
                --depth;
                used[cur[depth]] = false;
                next[depth] = cur[depth] + 1;
                continue;
            }
            cur[depth] = static_cast<std::uint8_t>(v);
            used[static_cast<std::size_t>(v)] = true;
            next[depth] = v + 1;
            next[depth + 1] = 1;
            ++depth;
        }
        unit_tuples.push_back(std::move(tuples));
    }

    std::vector<std::size_t> pick(units.size(), 0);
    std::vector<std::uint8_t> assign(static_cast<std::size_t>(total_ids), 1);
    for (;;) {
        for (std::size_t u = 0; u < units.size(); ++u)
            for (std::size_t i = 0; i < units[u].size(); ++i)
                assign[static_cast<std::size_t>(units[u][i])] = unit_tuples[u][pick[u]][i];
        out.assignments.push_back(assign);
        std::size_t pos = units.size();
        while (pos > 0) {
            --pos;
            if (++pick[pos] < unit_tuples[pos].size()) break;
            pick[pos] = 0;
            if (pos == 0) return out;
        }
        if (units.empty()) return out;
    }
}

Rational coefficient(const StrategyTuple& tuple, const NetworkScenario& scenario,
                     const InflationSpec& spec, int network, const std::vector<int>& outcome) {
    check_variables(scenario, spec.n, {tuple});
    const auto& inf = spec.networks[static_cast<std::size_t>(network)];
    const auto agents = inflated_agents(scenario, network, inf.m);
    if (outcome.size() != agents.size())
        throw std::invalid_argument("outcome assignment arity mismatch");

    const auto adm = admissible_assignments(spec, scenario, network);
    long hits = 0;
    std::vector<int> inputs;
    for (const auto& assign : adm.assignments) {
        bool match = true;
        for (std::size_t k = 0; k < agents.size() && match; ++k) {
            const auto& st = tuple[static_cast<std::size_t>(agents[k].strategy)];
            inputs.clear();
            for (int id : agents[k].source_ids) inputs.push_back(assign[static_cast<std::size_t>(id)]);
            match = st.eval(inputs) == outcome[k];
        }
        if (match) ++hits;
    }
    return Rational(hits) * adm.weight;
}

std::vector<std::vector<long>> block_hit_counts(const NetworkScenario& scenario,
                                                const InflationSpec& spec, int network,
                                                const std::vector<StrategyTuple>& variables) {
    check_variables(scenario, spec.n, variables);
    const auto& inf = spec.networks[static_cast<std::size_t>(network)];
    const auto agents = inflated_agents(scenario, network, inf.m);
    const auto adm = admissible_assignments(spec, scenario, network);

    std::size_t out_card = 1;
    for (const auto& ia : agents)
        out_card *= static_cast<std::size_t>(
            scenario.strategies[static_cast<std::size_t>(ia.strategy)].outcomes);

    std::vector<std::vector<std::size_t>> flat(adm.assignments.size(),
                                               std::vector<std::size_t>(agents.size()));
    for (std::size_t a = 0; a < adm.assignments.size(); ++a)
        for (std::size_t k = 0; k < agents.size(); ++k) {
            std::size_t idx = 0;
            for (int id : agents[k].source_ids)
                idx = idx * static_cast<std::size_t>(spec.n) +
                      static_cast<std::size_t>(adm.assignments[a][static_cast<std::size_t>(id)] - 1);
            flat[a][k] = idx;
        }

    std::vector<std::vector<long>> counts(out_card, std::vector<long>(variables.size(), 0));
    for (std::size_t v = 0; v < variables.size(); ++v)
        for (std::size_t a = 0; a < adm.assignments.size(); ++a) {
            std::size_t outidx = 0;
            for (std::size_t k = 0; k < agents.size(); ++k) {
                const auto& st = variables[v][static_cast<std::size_t>(agents[k].strategy)];
                outidx = outidx * static_cast<std::size_t>(st.outcomes) +
                         static_cast<std::size_t>(st.table[flat[a][k]] - 1);
            }
            ++counts[outidx][v];
        }
    return counts;
}

StrategyTuple canonicalize_tuple(const StrategyTuple& tuple, int n,
                                 const std::vector<std::vector<int>>& classes, bool diagonal) {
    if (tuple.size() != classes.size())
        throw std::invalid_argument("one slot-class list per strategy required");
    int num_classes = 1;
    if (!diagonal)
        for (const auto& cls : classes)
            for (int c : cls) num_classes = std::max(num_classes, c + 1);

    const auto sn = symmetric_group(n);
    std::size_t order = 1;
    for (int i = 0; i < (diagonal ? 1 : num_classes); ++i) {
        order *= sn.size();
        if (order > kGroupOrderCap)
            throw std::invalid_argument("joint relabel group too large for explicit traversal");
    }

    // Per group element and strategy, the flat-domain gather permutation.
    std::vector<std::size_t> choice(static_cast<std::size_t>(diagonal ? 1 : num_classes), 0);
    StrategyTuple best = tuple;
    StrategyTuple image = tuple;
    for (;;) {
        for (std::size_t p = 0; p < tuple.size(); ++p) {
            const auto& src = tuple[p];
            auto& dst = image[p];
            const int arity = src.arity();
            std::vector<int> digits(static_cast<std::size_t>(arity), 0);
            for (std::size_t flat = 0; flat < src.table.size(); ++flat) {
                std::size_t from = 0;
                for (int i = 0; i < arity; ++i) {
                    int cls = diagonal ? 0 : classes[p][static_cast<std::size_t>(i)];
                    int v = sn[choice[static_cast<std::size_t>(cls)]]
                              [static_cast<std::size_t>(digits[static_cast<std::size_t>(i)])];
                    from = from * static_cast<std::size_t>(n) + static_cast<std::size_t>(v);
                }
                dst.table[flat] = src.table[from];
                for (int i = arity - 1; i >= 0; --i) {
                    auto& d = digits[static_cast<std::size_t>(i)];
                    if (++d < n) break;
                    d = 0;
                }
            }
        }
        // lexicographic comparison over concatenated tables
        bool smaller = false;
        for (std::size_t p = 0; p < tuple.size(); ++p) {
            if (image[p].table < best[p].table) {
                smaller = true;
                break;
            }
            if (best[p].table < image[p].table) break;
        }
        if (smaller) best = image;

        std::size_t pos = choice.size();
        bool done = true;
        while (pos > 0) {
            --pos;
            if (++choice[pos] < sn.size()) {
                done = false;
                break;
            }
            choice[pos] = 0;
        }
        if (done) break;
    }
    return best;
}

namespace {

std::vector<std::vector<int>> reduce_classes(const NetworkScenario& scenario,
                                             const InflationSpec& spec, Reduce reduce) {
    const auto classes = slot_classes(scenario);
    if (reduce == Reduce::slot_class) {
        for (int c = 0; c < scenario.num_networks(); ++c) {
            const auto& inf = spec.networks[static_cast<std::size_t>(c)];
            const auto src_class = network_source_classes(scenario, classes, c, inf.m);
            for (const auto& g : inf.groups) {
                int seen = -1;
                for (int id : g) {
                    int cls = src_class[static_cast<std::size_t>(id)];
                    if (cls < 0) continue;
                    if (seen == -1) seen = cls;
                    if (cls != seen)
                        throw std::invalid_argument(
                            "slot-class reduction invalid: a postselection group spans several "
                            "slot classes; use the diagonal reduction instead");
                }
            }
        }
    }
    return classes;
}

}  // namespace

std::vector<StrategyTuple> tuple_orbit_representatives(const NetworkScenario& scenario, int n,
                                                       Reduce reduce, std::size_t cap) {
    std::vector<std::vector<int>> classes;
    if (reduce != Reduce::none) classes = slot_classes(scenario);

    // Fast path: a single strategy reduces through the strategy-level helper.
    if (scenario.num_strategies() == 1 && reduce != Reduce::none) {
        const auto& sig = scenario.strategies[0];
        std::vector<int> domain(static_cast<std::size_t>(sig.arity), n);
        RelabelGroup g = reduce == Reduce::diagonal ? RelabelGroup::diagonal(n, sig.arity)
                                                    : RelabelGroup::independent(n, classes[0]);
        std::vector<StrategyTuple> out;
        for (auto& s : orbit_representatives(domain, sig.outcomes, g, cap))
            out.push_back({std::move(s)});
        return out;
    }

    mpz_class total = 1;
    std::vector<std::vector<DeterministicStrategy>> per_strategy;
    for (const auto& sig : scenario.strategies) {
        std::vector<int> domain(static_cast<std::size_t>(sig.arity), n);
        total *= strategy_count(domain, sig.outcomes);
        if (total > cap)
            throw std::runtime_error("strategy tuple space of " + total.get_str() +
                                     " tuples exceeds cap " + std::to_string(cap));
        per_strategy.push_back(enumerate_strategies(domain, sig.outcomes, cap));
    }

    std::set<StrategyTuple> reps;
    std::vector<std::size_t> pick(per_strategy.size(), 0);
    StrategyTuple tuple;
    for (const auto& list : per_strategy) tuple.push_back(list[0]);
    for (;;) {
        for (std::size_t p = 0; p < per_strategy.size(); ++p) tuple[p] = per_strategy[p][pick[p]];
        if (reduce == Reduce::none)
            reps.insert(tuple);
        else
            reps.insert(canonicalize_tuple(tuple, n, classes, reduce == Reduce::diagonal));
        std::size_t pos = pick.size();
        bool done = true;
        while (pos > 0) {
            --pos;
            if (++pick[pos] < per_strategy[pos].size()) {
                done = false;
                break;
            }
            pick[pos] = 0;
        }
        if (done) break;
    }
    return {reps.begin(), reps.end()};
}

namespace {

bool tuple_table_less(const StrategyTuple& a, const StrategyTuple& b) {
    for (std::size_t p = 0; p < a.size(); ++p) {
        if (a[p].table < b[p].table) return true;
        if (b[p].table < a[p].table) return false;
    }
    return false;
}

}  // namespace

InflationLPTemplate build_lp_template(const NetworkScenario& scenario, const InflationSpec& spec,
                                      std::vector<StrategyTuple> variables) {
    auto rep = validate(scenario);
    if (!rep.ok()) throw std::invalid_argument("invalid scenario: " + rep.violations.front());
    rep = validate_spec(scenario, spec);
    if (!rep.ok()) throw std::invalid_argument("invalid inflation spec: " + rep.violations.front());
    check_variables(scenario, spec.n, variables);

    InflationLPTemplate tpl;
    tpl.n = spec.n;
    tpl.variables = std::move(variables);
    const std::size_t V = tpl.variables.size();

    for (int c = 0; c < scenario.num_networks(); ++c) {
        const auto& inf = spec.networks[static_cast<std::size_t>(c)];
        if (inf.m == 0) continue;
        const auto agents = inflated_agents(scenario, c, inf.m);
        const Rational weight = admissible_assignments(spec, scenario, c).weight;

        std::vector<int> shape;
        std::size_t out_card = 1;
        for (const auto& ia : agents) {
            int no = scenario.strategies[static_cast<std::size_t>(ia.strategy)].outcomes;
            shape.push_back(no);
            out_card *= static_cast<std::size_t>(no);
        }

        const auto counts = block_hit_counts(scenario, spec, c, tpl.variables);

        NetworkBlockTemplate block;
        block.network = c;
        std::map<std::vector<long>, int> coeff_classes;
        for (std::size_t o = 0; o + 1 < out_card; ++o) {  // all-maximal outcome omitted
            BlockRowTemplate row;
            std::size_t rem = o;
            row.outcome.assign(shape.size(), 1);
            for (std::size_t k = shape.size(); k-- > 0;) {
                row.outcome[k] = static_cast<int>(rem % static_cast<std::size_t>(shape[k])) + 1;
                rem /= static_cast<std::size_t>(shape[k]);
            }
            auto [it, fresh] =
                coeff_classes.try_emplace(counts[o], static_cast<int>(coeff_classes.size()));
            (void)fresh;
            row.coeff_class = it->second;
            row.coeffs.reserve(V);
            for (std::size_t v = 0; v < V; ++v)
                row.coeffs.push_back(Rational(counts[o][v]) * weight);
            block.rows.push_back(std::move(row));
        }
        tpl.blocks.push_back(std::move(block));
    }
    return tpl;
}

InflationLPTemplate build_lp_template(const NetworkScenario& scenario, const InflationSpec& spec,
                                      Reduce reduce, std::size_t var_cap) {
    reduce_classes(scenario, spec, reduce);  // validates the slot-class rule
    auto variables = tuple_orbit_representatives(scenario, spec.n, reduce, var_cap);
    std::sort(variables.begin(), variables.end(), tuple_table_less);
    return build_lp_template(scenario, spec, std::move(variables));
}

RationalLP InflationLPTemplate::instantiate(const std::vector<OutcomeDistribution>& targets,
                                            std::vector<int>* block_row_counts) const {
    RationalLP lp;
    lp.num_vars = static_cast<int>(variables.size());
    lp.add_row(std::vector<Rational>(variables.size(), Rational(1)), Rational(1));
    if (block_row_counts) block_row_counts->clear();

    for (const auto& block : blocks) {
        const auto& target = targets.at(static_cast<std::size_t>(block.network));
        const std::size_t per_copy = target.shape.size();
        int kept = 0;
        std::map<std::pair<int, Rational>, bool> seen;
        for (const auto& row : block.rows) {
            Rational rhs = 1;
            for (std::size_t j = 0; j * per_copy < row.outcome.size(); ++j) {
                std::vector<int> slice(row.outcome.begin() + static_cast<long>(j * per_copy),
                                       row.outcome.begin() + static_cast<long>((j + 1) * per_copy));
                rhs *= target.probs[target.flat_index(slice)];
            }
            if (!seen.try_emplace({row.coeff_class, rhs}, true).second) continue;
            lp.add_row(row.coeffs, rhs);
            ++kept;
        }
        if (block_row_counts) block_row_counts->push_back(kept);
    }
    return lp;
}

RationalLP build_lp(const NetworkScenario& scenario, const InflationSpec& spec,
                    const std::vector<OutcomeDistribution>& targets, Reduce reduce,
                    std::size_t var_cap) {
    if (static_cast<int>(targets.size()) != scenario.num_networks())
        throw std::invalid_argument("need one target distribution per network");
    for (int c = 0; c < scenario.num_networks(); ++c) {
        std::vector<int> shape;
        for (const auto& ag : scenario.networks[static_cast<std::size_t>(c)].agents)
            shape.push_back(scenario.strategies[static_cast<std::size_t>(ag.strategy - 1)].outcomes);
        if (targets[static_cast<std::size_t>(c)].shape != shape)
            throw std::invalid_argument("target shape mismatch on network " + std::to_string(c + 1));
        auto rep = targets[static_cast<std::size_t>(c)].validate();
        if (!rep.ok())
            throw std::invalid_argument("target " + std::to_string(c + 1) + ": " +
                                        rep.violations.front());
    }
    return build_lp_template(scenario, spec, reduce, var_cap).instantiate(targets);
}

std::vector<int> dedup_rows(const std::vector<std::vector<Rational>>& rows,
                            const std::vector<Rational>& rhs) {
    std::vector<int> kept;
    std::set<std::pair<std::vector<Rational>, Rational>> seen;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (seen.emplace(rows[i], rhs[i]).second) kept.push_back(static_cast<int>(i));
    return kept;
}

std::vector<StrategyTuple> certification_support(const NetworkScenario& scenario,
                                                 const InflationSpec& spec,
                                                 const std::vector<DeterministicStrategy>& originals) {
    const auto classes = slot_classes(scenario);
    int num_classes = 0;
    for (const auto& cls : classes)
        for (int c : cls) num_classes = std::max(num_classes, c + 1);

    // Merge slot classes joined by a common postselection group.
    UnionFind pools(num_classes);
    for (int c = 0; c < scenario.num_networks(); ++c) {
        const auto& inf = spec.networks[static_cast<std::size_t>(c)];
        if (inf.m == 0) continue;
        const auto src_class = network_source_classes(scenario, classes, c, inf.m);
        for (const auto& g : inf.groups) {
            int prev = -1;
            for (int id : g) {
                int cls = src_class[static_cast<std::size_t>(id)];
                if (cls < 0) continue;
                if (prev >= 0) pools.unite(prev, cls);
                prev = cls;
            }
        }
        // The witness needs each pool's sources pairwise distinct: within a
        // network, sources of one pool must share a single group.
        std::vector<int> group_of(src_class.size(), -1);
        for (std::size_t gi = 0; gi < inf.groups.size(); ++gi)
            for (int id : inf.groups[gi]) group_of[static_cast<std::size_t>(id)] = static_cast<int>(gi);
        std::map<int, int> pool_group;
        for (std::size_t id = 0; id < src_class.size(); ++id) {
            if (src_class[id] < 0) continue;
            int pool = pools.find(src_class[id]);
            auto [it, fresh] = pool_group.try_emplace(pool, group_of[id]);
            if (!fresh && (it->second != group_of[id] || group_of[id] == -1))
                throw std::invalid_argument(
                    "certification witness unavailable: a slot-class pool is split across "
                    "postselection groups in network " + std::to_string(c + 1));
        }
    }

    // Bin count per pool, from the original strategies' slot domains.
    std::map<int, int> pool_bins;
    for (std::size_t p = 0; p < classes.size(); ++p) {
        if (originals[p].arity() != static_cast<int>(classes[p].size()))
            throw std::invalid_argument("original strategy arity mismatch");
        for (std::size_t i = 0; i < classes[p].size(); ++i) {
            int pool = pools.find(classes[p][i]);
            int b = originals[p].domain_sizes[i];
            auto [it, fresh] = pool_bins.try_emplace(pool, b);
            if (!fresh && it->second != b)
                throw std::invalid_argument(
                    "certification witness unavailable: unequal bin counts inside one pool");
        }
    }

    std::vector<int> pool_ids;
    for (const auto& [pool, bins] : pool_bins) pool_ids.push_back(pool);

    // One lookup table {1..n} -> {1..bins} per pool; enumerate all joint
    // choices and translate each into a strategy tuple.
    std::size_t combos = 1;
    for (const auto& [pool, bins] : pool_bins) {
        for (int i = 0; i < spec.n; ++i) {
            if (combos > (1u << 22) / static_cast<std::size_t>(bins))
                throw std::runtime_error("certification support too large");
            combos *= static_cast<std::size_t>(bins);
        }
    }

    std::map<int, std::vector<int>> table;  // pool -> values (1-based), length n
    for (int pool : pool_ids) table[pool].assign(static_cast<std::size_t>(spec.n), 1);

    std::set<StrategyTuple> support;
    for (;;) {
        StrategyTuple tuple;
        for (std::size_t p = 0; p < classes.size(); ++p) {
            const auto& sig = scenario.strategies[p];
            DeterministicStrategy st;
            st.domain_sizes.assign(static_cast<std::size_t>(sig.arity), spec.n);
            st.outcomes = sig.outcomes;
            st.table.resize(st.domain_card());
            std::vector<int> digits(static_cast<std::size_t>(sig.arity), 0);
            std::vector<int> inputs(static_cast<std::size_t>(sig.arity));
            for (std::size_t flat = 0; flat < st.table.size(); ++flat) {
                for (int i = 0; i < sig.arity; ++i) {
                    int pool = pools.find(classes[p][static_cast<std::size_t>(i)]);
                    inputs[static_cast<std::size_t>(i)] =
                        table[pool][static_cast<std::size_t>(digits[static_cast<std::size_t>(i)])];
                }
                st.table[flat] = static_cast<std::uint8_t>(originals[p].eval(inputs));
                for (int i = sig.arity - 1; i >= 0; --i) {
                    auto& d = digits[static_cast<std::size_t>(i)];
                    if (++d < spec.n) break;
                    d = 0;
                }
            }
            tuple.push_back(std::move(st));
        }
        support.insert(std::move(tuple));

        // advance the joint odometer over all pool tables
        bool done = true;
        for (int pool : pool_ids) {
            auto& t = table[pool];
            int bins = pool_bins[pool];
            std::size_t pos = t.size();
            bool carried = true;
            while (pos > 0 && carried) {
                --pos;
                if (++t[pos] <= bins) {
                    carried = false;
                } else {
                    t[pos] = 1;
                }
            }
            if (!carried) {
                done = false;
                break;
            }
        }
        if (done) break;
    }
    return {support.begin(), support.end()};
}

}  // namespace psinf
