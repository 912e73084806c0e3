#include "psinf/fanout.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "psinf/sleeper.hpp"

namespace psinf {

namespace {

struct AgentKey {
    std::string label;
    std::vector<int> axes;
    std::vector<int> coords;
    auto operator<=>(const AgentKey&) const = default;
};

AgentKey key_of(const FanoutAgent& a) { return {a.label, a.axes, a.coords}; }

// One permutation per axis, every element of the product group.
std::vector<std::vector<std::vector<int>>> axis_group(const std::vector<int>& axis_sizes) {
    std::vector<std::vector<std::vector<int>>> per_axis;
    for (int n : axis_sizes) per_axis.push_back(symmetric_group(n));
    std::vector<std::vector<std::vector<int>>> elements;
    std::vector<std::size_t> pick(axis_sizes.size(), 0);
    for (;;) {
        std::vector<std::vector<int>> element;
        for (std::size_t a = 0; a < axis_sizes.size(); ++a) element.push_back(per_axis[a][pick[a]]);
        elements.push_back(std::move(element));
        std::size_t pos = pick.size();
        bool done = true;
        while (pos > 0) {
            --pos;
            if (++pick[pos] < per_axis[pos].size()) {
                done = false;
                break;
            }
            pick[pos] = 0;
        }
        if (done) break;
    }
    return elements;
}

}  // namespace

ValidationReport validate_fanout(const FanoutProblem& problem) {
    ValidationReport rep;
    std::map<AgentKey, int> index;
    for (std::size_t i = 0; i < problem.agents.size(); ++i) {
        const auto& ag = problem.agents[i];
        if (ag.axes.size() != ag.coords.size()) {
            rep.violations.push_back("agent " + std::to_string(i) + ": axes/coords length mismatch");
            continue;
        }
        for (std::size_t k = 0; k < ag.axes.size(); ++k) {
            if (ag.axes[k] < 0 || ag.axes[k] >= static_cast<int>(problem.axis_sizes.size()))
                rep.violations.push_back("agent " + std::to_string(i) + ": bad axis id");
            else if (ag.coords[k] < 1 ||
                     ag.coords[k] > problem.axis_sizes[static_cast<std::size_t>(ag.axes[k])])
                rep.violations.push_back("agent " + std::to_string(i) + ": coordinate out of range");
        }
        if (ag.outcomes < 1)
            rep.violations.push_back("agent " + std::to_string(i) + ": outcomes < 1");
        if (!index.try_emplace(key_of(ag), static_cast<int>(i)).second)
            rep.violations.push_back("agent " + std::to_string(i) + ": duplicate copy");
    }
    if (!rep.ok()) return rep;

    // Agent set must be closed under the symmetry group action.
    for (const auto& element : axis_group(problem.axis_sizes)) {
        for (const auto& ag : problem.agents) {
            AgentKey img = key_of(ag);
            for (std::size_t k = 0; k < img.coords.size(); ++k)
                img.coords[k] =
                    element[static_cast<std::size_t>(img.axes[k])]
                           [static_cast<std::size_t>(img.coords[k] - 1)] + 1;
            auto it = index.find(img);
            if (it == index.end()) {
                rep.violations.push_back("agent set not closed under the symmetry action");
                return rep;
            }
            if (problem.agents[static_cast<std::size_t>(it->second)].outcomes != ag.outcomes) {
                rep.violations.push_back("symmetry maps between agents of unequal outcome counts");
                return rep;
            }
        }
    }

    for (std::size_t mi = 0; mi < problem.marginals.size(); ++mi) {
        const auto& m = problem.marginals[mi];
        std::size_t card = 1;
        for (int a : m.agents) {
            if (a < 0 || a >= static_cast<int>(problem.agents.size())) {
                rep.violations.push_back("marginal " + std::to_string(mi) + ": bad agent index");
                card = 0;
                break;
            }
            card *= static_cast<std::size_t>(problem.agents[static_cast<std::size_t>(a)].outcomes);
        }
        if (card != 0 && m.rhs.size() != card)
            rep.violations.push_back("marginal " + std::to_string(mi) + ": rhs has " +
                                     std::to_string(m.rhs.size()) + " entries, expected " +
                                     std::to_string(card));
    }
    return rep;
}

RationalLP build_fanout_lp(const FanoutProblem& problem, std::size_t cap, FanoutFold* fold) {
    auto rep = validate_fanout(problem);
    if (!rep.ok()) throw std::invalid_argument("invalid fanout problem: " + rep.violations.front());

    const std::size_t A = problem.agents.size();
    mpz_class total = 1;
    for (const auto& ag : problem.agents) total *= ag.outcomes;
    if (total > cap)
        throw std::runtime_error("fanout atomic-event count " + total.get_str() +
                                 " exceeds cap " + std::to_string(cap));
    const std::size_t count = total.get_ui();

    // Agent permutation per group element.
    std::map<AgentKey, int> index;
    for (std::size_t i = 0; i < A; ++i) index[key_of(problem.agents[i])] = static_cast<int>(i);
    std::vector<std::vector<int>> agent_perm;
    for (const auto& element : axis_group(problem.axis_sizes)) {
        std::vector<int> perm(A);
        for (std::size_t i = 0; i < A; ++i) {
            AgentKey img = key_of(problem.agents[i]);
            for (std::size_t k = 0; k < img.coords.size(); ++k)
                img.coords[k] =
                    element[static_cast<std::size_t>(img.axes[k])]
                           [static_cast<std::size_t>(img.coords[k] - 1)] + 1;
            perm[i] = index.at(img);
        }
        agent_perm.push_back(std::move(perm));
    }

    // Mixed-radix digits of an assignment, agent 0 most significant.
    std::vector<std::size_t> stride(A, 1);
    for (std::size_t i = A; i-- > 1;)
        stride[i - 1] = stride[i] * static_cast<std::size_t>(problem.agents[i].outcomes);

    std::vector<int> digits(A);
    auto decode = [&](std::size_t flat) {
        for (std::size_t i = 0; i < A; ++i) {
            digits[i] = static_cast<int>(flat / stride[i]);
            flat %= stride[i];
        }
    };

    // Canonical representative (minimal image) per assignment.
    std::vector<int> orbit_id(count, -1);
    std::vector<std::size_t> orbit_rep;
    std::vector<long> orbit_size;
    for (std::size_t flat = 0; flat < count; ++flat) {
        if (orbit_id[flat] >= 0) continue;
        decode(flat);
        const std::vector<int> base = digits;
        // collect the orbit explicitly, assigning ids as we go
        std::vector<std::size_t> members;
        for (const auto& perm : agent_perm) {
            std::size_t img = 0;
            for (std::size_t i = 0; i < A; ++i)
                img += stride[static_cast<std::size_t>(perm[i])] * static_cast<std::size_t>(base[i]);
            members.push_back(img);
        }
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        const int id = static_cast<int>(orbit_rep.size());
        orbit_rep.push_back(members.front());
        orbit_size.push_back(static_cast<long>(members.size()));
        for (std::size_t m : members) orbit_id[m] = id;
    }
    const std::size_t V = orbit_rep.size();
    if (fold) {
        fold->orbit_of = orbit_id;
        fold->rep_of = orbit_rep;
        fold->size_of = orbit_size;
    }

    RationalLP lp;
    lp.num_vars = static_cast<int>(V);
    {
        std::vector<Rational> norm;
        norm.reserve(V);
        for (std::size_t v = 0; v < V; ++v) norm.push_back(Rational(orbit_size[v]));
        lp.add_row(std::move(norm), Rational(1));
    }

    // Marginal rows: count, per orbit, the assignments matching each partial
    // outcome tuple.
    for (const auto& m : problem.marginals) {
        std::vector<std::vector<long>> counts(m.rhs.size(), std::vector<long>(V, 0));
        for (std::size_t flat = 0; flat < count; ++flat) {
            decode(flat);
            std::size_t row = 0;
            for (int a : m.agents)
                row = row * static_cast<std::size_t>(problem.agents[static_cast<std::size_t>(a)].outcomes) +
                      static_cast<std::size_t>(digits[static_cast<std::size_t>(a)]);
            ++counts[row][static_cast<std::size_t>(orbit_id[flat])];
        }
        for (std::size_t r = 0; r < m.rhs.size(); ++r) {
            std::vector<Rational> row;
            row.reserve(V);
            for (std::size_t v = 0; v < V; ++v) row.push_back(Rational(counts[r][v]));
            lp.add_row(std::move(row), m.rhs[r]);
        }
    }

    // Fold exact duplicate rows.
    auto kept = dedup_rows(lp.rows, lp.rhs);
    if (kept.size() != lp.rows.size()) {
        RationalLP folded;
        folded.num_vars = lp.num_vars;
        for (int i : kept)
            folded.add_row(std::move(lp.rows[static_cast<std::size_t>(i)]),
                           std::move(lp.rhs[static_cast<std::size_t>(i)]));
        return folded;
    }
    return lp;
}

namespace {

std::vector<Rational> product_rhs(const std::vector<const OutcomeDistribution*>& factors) {
    std::vector<Rational> rhs{Rational(1)};
    for (const auto* d : factors) {
        std::vector<Rational> next;
        next.reserve(rhs.size() * d->probs.size());
        for (const auto& a : rhs)
            for (const auto& b : d->probs) next.push_back(a * b);
        rhs = std::move(next);
    }
    return rhs;
}

}  // namespace

FanoutProblem fanout_sleeper(const OutcomeDistribution& p1, const OutcomeDistribution& p2,
                             const OutcomeDistribution& u2) {
    FanoutProblem fp;
    fp.axis_sizes = {4, 4};
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j) fp.agents.push_back({"A", {0, 1}, {i, j}, 2});
    auto at = [](int i, int j) { return (i - 1) * 4 + (j - 1); };

    fp.marginals.push_back({{at(1, 1), at(1, 2), at(2, 3), at(2, 4)}, product_rhs({&p1, &p1})});
    fp.marginals.push_back({{at(1, 1), at(2, 1), at(3, 2), at(4, 2)}, product_rhs({&p2, &p2})});
    fp.marginals.push_back(
        {{at(1, 1), at(2, 2), at(3, 3), at(4, 4)}, product_rhs({&u2, &u2, &u2, &u2})});
    fp.marginals.push_back(
        {{at(1, 1), at(1, 2), at(2, 3), at(3, 3), at(4, 4)}, product_rhs({&p1, &p2, &u2})});
    return fp;
}

FanoutProblem fanout_bilocal(const OutcomeDistribution& target) {
    if (target.shape.size() != 3)
        throw std::invalid_argument("bilocal target must cover three agents");
    FanoutProblem fp;
    fp.axis_sizes = {2, 2};
    for (int i = 1; i <= 2; ++i) fp.agents.push_back({"A", {0}, {i}, target.shape[0]});
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) fp.agents.push_back({"B", {0, 1}, {i, j}, target.shape[1]});
    for (int j = 1; j <= 2; ++j) fp.agents.push_back({"C", {1}, {j}, target.shape[2]});
    auto a = [](int i) { return i - 1; };
    auto b = [](int i, int j) { return 2 + (i - 1) * 2 + (j - 1); };
    auto c = [](int j) { return 6 + (j - 1); };

    // Two disjoint network copies on distinct source values.
    fp.marginals.push_back(
        {{a(1), b(1, 1), c(1), a(2), b(2, 2), c(2)}, product_rhs({&target, &target})});
    return fp;
}

FanoutProblem fanout_triangle3(const OutcomeDistribution& target, int n) {
    if (target.shape.size() != 3)
        throw std::invalid_argument("triangle target must cover three agents");
    if (n < 2) throw std::invalid_argument("need n >= 2");
    FanoutProblem fp;
    fp.axis_sizes = {n, n, n};  // axes shared pairwise by the three agent types
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            fp.agents.push_back({"A", {2, 0}, {i, j}, target.shape[0]});
        }
    for (int k = 1; k <= n; ++k)
        for (int l = 1; l <= n; ++l) fp.agents.push_back({"B", {0, 1}, {k, l}, target.shape[1]});
    for (int p = 1; p <= n; ++p)
        for (int q = 1; q <= n; ++q) fp.agents.push_back({"C", {1, 2}, {p, q}, target.shape[2]});
    auto a = [n](int i, int j) { return (i - 1) * n + (j - 1); };
    auto b = [n](int i, int j) { return n * n + (i - 1) * n + (j - 1); };
    auto c = [n](int i, int j) { return 2 * n * n + (i - 1) * n + (j - 1); };

    fp.marginals.push_back(
        {{a(1, 1), b(1, 1), c(1, 1), a(2, 2), b(2, 2), c(2, 2)}, product_rhs({&target, &target})});
    return fp;
}

FanoutProblem fanout_triangle1(const OutcomeDistribution& target, int n) {
    if (target.shape.size() != 3 || target.shape[0] != target.shape[1] ||
        target.shape[1] != target.shape[2])
        throw std::invalid_argument("one-strategy triangle target needs equal outcome counts");
    if (n < 6) throw std::invalid_argument("the two-copy construction needs n >= 6");
    FanoutProblem fp;
    fp.axis_sizes = {n};
    std::map<std::pair<int, int>, int> at;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            if (i == j) continue;
            at[{i, j}] = static_cast<int>(fp.agents.size());
            fp.agents.push_back({"A", {0, 0}, {i, j}, target.shape[0]});
        }

    fp.marginals.push_back(
        {{at[{1, 2}], at[{2, 3}], at[{3, 1}], at[{4, 5}], at[{5, 6}], at[{6, 4}]},
         product_rhs({&target, &target})});

    // Single-agent marginal of the target, three independent copies.
    OutcomeDistribution marg;
    marg.shape = {target.shape[0]};
    marg.probs.assign(static_cast<std::size_t>(target.shape[0]), Rational(0));
    for (int x = 1; x <= target.shape[0]; ++x)
        for (int y = 1; y <= target.shape[1]; ++y)
            for (int z = 1; z <= target.shape[2]; ++z)
                marg.probs[static_cast<std::size_t>(x - 1)] +=
                    target.probs[target.flat_index({x, y, z})];
    fp.marginals.push_back(
        {{at[{1, 2}], at[{3, 4}], at[{5, 6}]}, product_rhs({&marg, &marg, &marg})});
    return fp;
}

EquivalenceReport check_equivalence(const NetworkScenario& scenario, const InflationSpec& spec,
                                    const std::vector<OutcomeDistribution>& targets,
                                    const FanoutProblem& fanout, Reduce reduce,
                                    std::size_t fanout_cap) {
    EquivalenceReport rep;
    rep.post_feasible = solve_feasibility(build_lp(scenario, spec, targets, reduce)).feasible;
    rep.fanout_feasible = solve_feasibility(build_fanout_lp(fanout, fanout_cap)).feasible;
    rep.equal = rep.post_feasible == rep.fanout_feasible;
    return rep;
}

EquivalenceReport check_equivalence_sleeper(const Rational& lambda1, const Rational& lambda2) {
    const auto targets = lambdas_to_targets({lambda1, lambda2});
    EquivalenceReport rep;
    rep.post_feasible = check_point({lambda1, lambda2}).feasible;
    rep.fanout_feasible =
        solve_feasibility(build_fanout_lp(fanout_sleeper(targets[0], targets[1], targets[2])))
            .feasible;
    rep.equal = rep.post_feasible == rep.fanout_feasible;
    return rep;
}

EquivalenceReport check_equivalence_bilocal(const OutcomeDistribution& target) {
    const auto scenario = builtin(BuiltinScenario::bilocal);
    const auto spec = slot_class_spec(scenario, 2, {2});
    return check_equivalence(scenario, spec, {target}, fanout_bilocal(target), Reduce::slot_class);
}

}  // namespace psinf
