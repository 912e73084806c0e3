#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include "doctest.h"
#include "psinf/inflation.hpp"
#include "psinf/sleeper.hpp"

using namespace psinf;

namespace {

StrategyTuple matrix_tuple(std::initializer_list<int> entries) {
    DeterministicStrategy s;
    s.domain_sizes = {4, 4};
    s.outcomes = 2;
    for (int e : entries) s.table.push_back(static_cast<std::uint8_t>(e));
    return {s};
}

DeterministicStrategy random_strategy(std::mt19937_64& rng, std::vector<int> domain, int outcomes) {
    DeterministicStrategy s;
    s.domain_sizes = std::move(domain);
    s.outcomes = outcomes;
    for (std::size_t i = 0; i < s.domain_card(); ++i)
        s.table.push_back(static_cast<std::uint8_t>(1 + rng() % static_cast<unsigned>(outcomes)));
    return s;
}

}  // namespace

TEST_CASE("slot classes join slots through shared sources") {
    auto classes = slot_classes(builtin(BuiltinScenario::sleeper));
    REQUIRE(classes.size() == 1);
    CHECK(classes[0] == std::vector<int>{0, 1});

    classes = slot_classes(builtin(BuiltinScenario::bilocal));
    REQUIRE(classes.size() == 3);
    CHECK(classes[0][0] == classes[1][0]);  // A and B share the left source
    CHECK(classes[1][1] == classes[2][0]);  // B and C share the right source
    CHECK(classes[0][0] != classes[1][1]);

    classes = slot_classes(builtin(BuiltinScenario::triangle3));
    std::set<int> distinct;
    for (const auto& cls : classes) distinct.insert(cls.begin(), cls.end());
    CHECK(distinct.size() == 3);

    // one strategy on the triangle: both slots collapse into one class
    classes = slot_classes(builtin(BuiltinScenario::triangle1));
    CHECK(classes[0][0] == classes[0][1]);
}

TEST_CASE("admissible assignment counts and weights") {
    auto sleeper = builtin(BuiltinScenario::sleeper);

    SUBCASE("one group of two at n = 4") {
        InflationSpec spec;
        spec.n = 4;
        spec.networks = {{0, {}}, {0, {}}, {1, {{0, 1}}}, {0, {}}};
        // the isolated round has exactly two sources
        auto adm = admissible_assignments(spec, sleeper, 2);
        CHECK(adm.assignments.size() == 12);
        CHECK(adm.weight == rat(1, 12));
        for (const auto& a : adm.assignments) CHECK(a[0] != a[1]);
    }

    SUBCASE("unconstrained sources multiply in") {
        InflationSpec spec;
        spec.n = 4;
        spec.networks = {{1, {{0, 1}}}, {0, {}}, {0, {}}, {0, {}}};
        // network 1 has 3 sources at m = 1; constrain the first two
        auto adm = admissible_assignments(spec, sleeper, 0);
        CHECK(adm.assignments.size() == 12 * 4);
        CHECK(adm.weight == rat(1, 48));
        for (const auto& a : adm.assignments) CHECK(a[0] != a[1]);
    }

    SUBCASE("singleton groups impose nothing") {
        InflationSpec spec;
        spec.n = 2;
        spec.networks = {{0, {}}, {0, {}}, {1, {{0}, {1}}}, {0, {}}};
        auto adm = admissible_assignments(spec, sleeper, 2);
        CHECK(adm.assignments.size() == 4);
        CHECK(adm.weight == rat(1, 4));
    }

    SUBCASE("sleeper network-1 inflation") {
        auto spec = sleeper_default_spec();
        auto adm = admissible_assignments(spec, sleeper, 0);
        CHECK(adm.assignments.size() == 288);  // 12 * 24
        CHECK(adm.weight == rat(1, 288));
        Rational total = 0;
        for (std::size_t i = 0; i < adm.assignments.size(); ++i) total += adm.weight;
        CHECK(total == 1);
    }

    SUBCASE("unsatisfiable group errors") {
        InflationSpec spec;
        spec.n = 2;
        spec.networks = {{1, {{0, 1, 2}}}, {0, {}}, {0, {}}, {0, {}}};
        CHECK_THROWS_WITH_AS(admissible_assignments(spec, sleeper, 0),
                             doctest::Contains("unsatisfiable"), std::invalid_argument);
    }
}

TEST_CASE("sleeper default spec matches the reduced postselection") {
    auto spec = sleeper_default_spec();
    CHECK(spec.n == 4);
    REQUIRE(spec.networks.size() == 4);
    CHECK(spec.networks[0].m == 2);
    CHECK(spec.networks[1].m == 2);
    CHECK(spec.networks[2].m == 4);
    CHECK(spec.networks[3].m == 1);

    // network 1: the shared-source class {0,3} and the private class {1,2,4,5}
    auto sizes = [](const NetworkInflation& inf) {
        std::multiset<std::size_t> out;
        for (const auto& g : inf.groups) out.insert(g.size());
        return out;
    };
    CHECK(sizes(spec.networks[0]) == std::multiset<std::size_t>{2, 4});
    CHECK(sizes(spec.networks[1]) == std::multiset<std::size_t>{2, 4});
    CHECK(sizes(spec.networks[2]) == std::multiset<std::size_t>{4, 4});
    CHECK(sizes(spec.networks[3]) == std::multiset<std::size_t>{4, 4});
}

TEST_CASE("coefficient values from the explicit constraint sums") {
    auto sleeper = builtin(BuiltinScenario::sleeper);
    auto spec = sleeper_default_spec();

    auto ones = matrix_tuple({1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1});
    CHECK(coefficient(ones, sleeper, spec, 0, {1, 1, 1, 1}) == 1);
    CHECK(coefficient(ones, sleeper, spec, 0, {1, 1, 1, 2}) == 0);

    // first row all 2s: both alpha values must avoid row 1
    auto row1 = matrix_tuple({2, 2, 2, 2, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1});
    CHECK(coefficient(row1, sleeper, spec, 0, {1, 1, 1, 1}) == rat(1, 2));
    CHECK_THROWS(coefficient(ones, sleeper, spec, 0, {1, 1, 1}));
}

TEST_CASE("block rows sum to one per variable") {
    auto sleeper = builtin(BuiltinScenario::sleeper);
    auto spec = sleeper_default_spec();
    std::mt19937_64 rng(3);
    std::vector<StrategyTuple> vars;
    for (int i = 0; i < 5; ++i) vars.push_back({random_strategy(rng, {4, 4}, 2)});
    for (int c = 0; c < 4; ++c) {
        auto counts = block_hit_counts(sleeper, spec, c, vars);
        auto adm = admissible_assignments(spec, sleeper, c);
        for (std::size_t v = 0; v < vars.size(); ++v) {
            long total = 0;
            for (const auto& row : counts) total += row[v];
            CHECK(Rational(total) * adm.weight == 1);
        }
    }
}

TEST_CASE("coefficients are orbit-invariant") {
    auto sleeper = builtin(BuiltinScenario::sleeper);

    SUBCASE("exhaustive at n = 2") {
        auto spec = slot_class_spec(sleeper, 2, {1, 1, 1, 0});
        const auto perms = domain_index_perms(RelabelGroup::rows_cols(2), {2, 2});
        for (const auto& s : enumerate_strategies({2, 2}, 2)) {
            for (const auto& p : perms) {
                DeterministicStrategy img = s;
                for (std::size_t i = 0; i < 4; ++i) img.table[i] = s.table[p[i]];
                for (int c = 0; c < 3; ++c) {
                    auto a = block_hit_counts(sleeper, spec, c, {{s}});
                    auto b = block_hit_counts(sleeper, spec, c, {{img}});
                    CHECK(a == b);
                }
            }
        }
    }

    SUBCASE("sampled at n = 4") {
        auto spec = sleeper_default_spec();
        std::mt19937_64 rng(17);
        const auto perms = domain_index_perms(RelabelGroup::rows_cols(4), {4, 4});
        for (int trial = 0; trial < 3; ++trial) {
            auto s = random_strategy(rng, {4, 4}, 2);
            const auto& p = perms[rng() % perms.size()];
            DeterministicStrategy img = s;
            for (std::size_t i = 0; i < 16; ++i) img.table[i] = s.table[p[i]];
            for (int c = 0; c < 4; ++c)
                CHECK(block_hit_counts(sleeper, spec, c, {{s}}) ==
                      block_hit_counts(sleeper, spec, c, {{img}}));
        }
    }
}

TEST_CASE("tuple orbits join relabelings across shared slots") {
    auto bilocal = builtin(BuiltinScenario::bilocal);
    // A copies its input; B copies its left input; relabeling A's inputs
    // alone changes the correlation, so per-strategy reduction would be
    // unsound; the joint orbit keeps A and B relabeled together.
    StrategyTuple t1;
    t1.push_back({{2}, 2, {1, 2}});
    t1.push_back({{2, 2}, 2, {1, 1, 2, 2}});
    t1.push_back({{2}, 2, {1, 1}});
    StrategyTuple t2 = t1;
    t2[0].table = {2, 1};  // A relabeled alone

    auto classes = slot_classes(bilocal);
    auto c1 = canonicalize_tuple(t1, 2, classes, false);
    auto c2 = canonicalize_tuple(t2, 2, classes, false);
    CHECK(c1 != c2);

    // a joint relabeling of the left class lands in the same orbit
    StrategyTuple t3 = t1;
    t3[0].table = {2, 1};
    t3[1].table = {2, 2, 1, 1};
    CHECK(canonicalize_tuple(t3, 2, classes, false) == c1);

    auto reps = tuple_orbit_representatives(bilocal, 2, Reduce::slot_class);
    std::size_t all = tuple_orbit_representatives(bilocal, 2, Reduce::none).size();
    CHECK(all == 256);
    CHECK(reps.size() < all);
    for (const auto& t : reps) CHECK(canonicalize_tuple(t, 2, classes, false) == t);
}

TEST_CASE("sleeper template matches the explicit linear program") {
    SleeperSolver solver;
    CHECK(solver.variables().size() == 317);

    std::vector<int> block_rows;
    auto lp = solver.lp_for({rat(1, 2), rat(1, 4)}, &block_rows);
    CHECK(lp.num_vars == 317);
    CHECK(block_rows == std::vector<int>{5, 5, 4, 17});
    CHECK(lp.num_rows() == 32);  // normalization + the four deduped blocks

    // normalization row first
    for (const auto& c : lp.rows[0]) CHECK(c == 1);
    CHECK(lp.rhs[0] == 1);
}

TEST_CASE("dedup keeps first occurrences and distinct rhs apart") {
    std::vector<std::vector<Rational>> rows{{rat(1), rat(2)}, {rat(1), rat(2)}, {rat(1), rat(2)}};
    std::vector<Rational> rhs{rat(1, 2), rat(1, 2), rat(1, 3)};
    CHECK(dedup_rows(rows, rhs) == std::vector<int>{0, 2});
}

TEST_CASE("point-mass targets are certified by the constant tuple") {
    auto bilocal = builtin(BuiltinScenario::bilocal);
    auto spec = slot_class_spec(bilocal, 2, {2});

    OutcomeDistribution target;
    target.shape = {2, 2, 2};
    target.probs.assign(8, Rational(0));
    target.probs[0] = 1;

    auto tpl = build_lp_template(bilocal, spec, Reduce::none);
    CHECK(tpl.variables.size() == 256);
    auto lp = tpl.instantiate({target});

    // the all-ones tuple alone satisfies every row
    std::vector<Rational> x(tpl.variables.size(), Rational(0));
    for (std::size_t v = 0; v < tpl.variables.size(); ++v) {
        bool constant = true;
        for (const auto& s : tpl.variables[v])
            for (auto e : s.table) constant = constant && e == 1;
        if (constant) x[v] = 1;
    }
    CHECK(verify_witness(lp, x));
    CHECK(solve_feasibility(lp).feasible);
}

TEST_CASE("slot-class reduction rejects groups spanning classes") {
    auto bilocal = builtin(BuiltinScenario::bilocal);
    auto spec = full_postselection_spec(bilocal, 4, 2);
    CHECK_THROWS_WITH_AS(build_lp_template(bilocal, spec, Reduce::slot_class),
                         doctest::Contains("diagonal"), std::invalid_argument);
}

TEST_CASE("inflation spec file loading") {
    auto sleeper = builtin(BuiltinScenario::sleeper);
    const std::string path = "inflation_spec_test.json";
    {
        std::ofstream out(path);
        out << R"({"n": 4, "networks": [
            {"m": 2, "groups": [[0, 3], [1, 2, 4, 5]]},
            {"m": 2, "groups": [[0, 1, 3, 4], [2, 5]]},
            {"m": 4, "groups": [[0, 2, 4, 6], [1, 3, 5, 7]]},
            {"m": 1, "groups": [[0, 3, 4, 6], [1, 2, 5, 7]]}]})";
    }
    auto spec = load_inflation_spec_file(path, sleeper);
    CHECK(spec.n == 4);
    CHECK(spec.networks[2].m == 4);
    CHECK(validate_spec(sleeper, spec).ok());

    {
        std::ofstream out(path);
        out << R"({"n": 2, "networks": [{"m": 1, "groups": [[0, 9]]},
                   {"m": 1}, {"m": 1}, {"m": 1}]})";
    }
    CHECK_THROWS(load_inflation_spec_file(path, sleeper));
    std::remove(path.c_str());
}

TEST_CASE("certification: oracle targets stay feasible") {
    std::mt19937_64 rng(2025);

    SUBCASE("fully postselected bilocal at n = 4, m = 2") {
        auto bilocal = builtin(BuiltinScenario::bilocal);
        auto spec = full_postselection_spec(bilocal, 4, 2);
        for (int trial = 0; trial < 10; ++trial) {
            int bins = 2 + static_cast<int>(rng() % 3);
            std::vector<DeterministicStrategy> originals{
                random_strategy(rng, {bins}, 2), random_strategy(rng, {bins, bins}, 2),
                random_strategy(rng, {bins}, 2)};
            auto targets = oracle_compatible(bilocal, originals);
            auto support = certification_support(bilocal, spec, originals);
            auto lp = build_lp_template(bilocal, spec, support).instantiate(targets);
            CHECK(solve_feasibility(lp).feasible);
        }
    }

    SUBCASE("sleeper reduced postselection") {
        auto sleeper = builtin(BuiltinScenario::sleeper);
        SleeperSolver solver;
        auto tpl = build_lp_template(sleeper, sleeper_default_spec(), Reduce::slot_class);
        for (int trial = 0; trial < 5; ++trial) {
            int b1 = 2 + static_cast<int>(rng() % 3), b2 = 2 + static_cast<int>(rng() % 3);
            auto original = random_strategy(rng, {b1, b2}, 2);
            auto targets = oracle_compatible(sleeper, {original});
            CHECK(solve_feasibility(tpl.instantiate(targets)).feasible);
        }
    }
}

TEST_CASE("hierarchy: weaker specs keep feasible points feasible") {
    auto sleeper = builtin(BuiltinScenario::sleeper);
    std::vector<InflationSpec> chain{
        sleeper_default_spec(),
        slot_class_spec(sleeper, 4, {1, 1, 2, 1}),
        slot_class_spec(sleeper, 3, {1, 1, 1, 0}),
    };
    std::vector<SleeperSolver> solvers;
    for (const auto& spec : chain) solvers.emplace_back(spec);

    for (auto [l1, l2] : {std::pair{rat(1, 4), rat(1, 4)}, {rat(1, 2), rat(1, 4)},
                          {rat(2, 5), rat(2, 5)}, {rat(9, 20), rat(9, 20)}}) {
        bool prev = solvers[0].check({l1, l2}).feasible;
        for (std::size_t k = 1; k < solvers.size(); ++k) {
            bool cur = solvers[k].check({l1, l2}).feasible;
            bool lost_feasibility = prev && !cur;
            CHECK_FALSE(lost_feasibility);
            prev = cur;
        }
    }
}
