#include <random>

#include "doctest.h"
#include "psinf/fanout.hpp"
#include "psinf/sleeper.hpp"

using namespace psinf;

namespace {

OutcomeDistribution random_target(std::mt19937_64& rng, std::vector<int> shape) {
    OutcomeDistribution d;
    d.shape = std::move(shape);
    std::size_t card = 1;
    for (int k : d.shape) card *= static_cast<std::size_t>(k);
    long total = 0;
    std::vector<long> raw(card);
    for (auto& r : raw) {
        r = static_cast<long>(rng() % 20);
        total += r;
    }
    raw[rng() % card] += 1;
    ++total;
    for (long r : raw) d.probs.push_back(rat(r, total));
    return d;
}

}  // namespace

TEST_CASE("builders produce valid problems of the right size") {
    auto targets = lambdas_to_targets({rat(1, 2), rat(1, 4)});
    auto sleeper = fanout_sleeper(targets[0], targets[1], targets[2]);
    CHECK(sleeper.agents.size() == 16);
    CHECK(sleeper.marginals.size() == 4);
    CHECK(validate_fanout(sleeper).ok());

    OutcomeDistribution uni;
    uni.shape = {2, 2, 2};
    uni.probs.assign(8, rat(1, 8));
    auto bilocal = fanout_bilocal(uni);
    CHECK(bilocal.agents.size() == 8);  // 2 + 4 + 2 copies
    CHECK(validate_fanout(bilocal).ok());

    auto tri3 = fanout_triangle3(uni, 2);
    CHECK(tri3.agents.size() == 12);
    CHECK(validate_fanout(tri3).ok());

    auto tri1 = fanout_triangle1(uni, 6);
    CHECK(tri1.agents.size() == 30);
    CHECK(tri1.marginals.size() == 2);  // two-triangle and single-agent products
    CHECK(validate_fanout(tri1).ok());
}

TEST_CASE("the one-strategy triangle exceeds the default cap") {
    OutcomeDistribution uni;
    uni.shape = {2, 2, 2};
    uni.probs.assign(8, rat(1, 8));
    auto tri1 = fanout_triangle1(uni, 6);
    CHECK_THROWS_WITH_AS(build_fanout_lp(tri1), doctest::Contains("1073741824"),
                         std::runtime_error);
}

TEST_CASE("validation catches broken symmetry and shapes") {
    FanoutProblem fp;
    fp.axis_sizes = {2};
    fp.agents = {{"A", {0}, {1}, 2}};  // missing the image A_2
    CHECK_FALSE(validate_fanout(fp).ok());

    fp.agents.push_back({"A", {0}, {2}, 2});
    CHECK(validate_fanout(fp).ok());

    fp.marginals.push_back({{0, 1}, {rat(1, 2), rat(1, 2)}});  // needs 4 entries
    CHECK_FALSE(validate_fanout(fp).ok());
}

TEST_CASE("sleeper fanout folds to the strategy orbit count") {
    auto targets = lambdas_to_targets({rat(1, 4), rat(1, 4)});
    auto lp = build_fanout_lp(fanout_sleeper(targets[0], targets[1], targets[2]));
    CHECK(lp.num_vars == 317);
}

TEST_CASE("unfolded witnesses are symmetric and reproduce the marginal rows") {
    OutcomeDistribution uni;
    uni.shape = {2, 2, 2};
    uni.probs.assign(8, rat(1, 8));
    auto fp = fanout_bilocal(uni);
    FanoutFold fold;
    auto lp = build_fanout_lp(fp, 1u << 16, &fold);
    auto res = solve_feasibility(lp);
    REQUIRE(res.feasible);
    CHECK(verify_witness(lp, res.witness));

    const std::size_t count = 256;  // 8 binary agents
    REQUIRE(fold.orbit_of.size() == count);
    std::vector<Rational> q(count);
    for (std::size_t flat = 0; flat < count; ++flat)
        q[flat] = res.witness[static_cast<std::size_t>(fold.orbit_of[flat])];

    // test-local action of the four (alpha, beta) swaps on the agent list
    // A1 A2 B11 B12 B21 B22 C1 C2 (agent 0 is the most significant bit)
    auto permute = [&](const std::vector<Rational>& src, bool swap_a, bool swap_b) {
        std::vector<int> perm{0, 1, 2, 3, 4, 5, 6, 7};
        if (swap_a) perm = {1, 0, 4, 5, 2, 3, 6, 7};
        if (swap_b) {
            std::vector<int> sb{0, 1, 3, 2, 5, 4, 7, 6};
            std::vector<int> both(8);
            for (int i = 0; i < 8; ++i) both[static_cast<std::size_t>(i)] =
                sb[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
            perm = both;
        }
        std::vector<Rational> dst(count);
        for (std::size_t flat = 0; flat < count; ++flat) {
            std::size_t img = 0;
            for (int i = 0; i < 8; ++i) {
                int bit = static_cast<int>((flat >> (7 - i)) & 1);
                img |= static_cast<std::size_t>(bit) << (7 - perm[static_cast<std::size_t>(i)]);
            }
            dst[img] = src[flat];
        }
        return dst;
    };

    auto marginal_values = [&](const std::vector<Rational>& dist) {
        std::vector<Rational> vals(64, Rational(0));
        const auto& m = fp.marginals[0];
        for (std::size_t flat = 0; flat < count; ++flat) {
            std::size_t row = 0;
            for (int a : m.agents) row = row * 2 + ((flat >> (7 - a)) & 1);
            vals[row] += dist[flat];
        }
        return vals;
    };

    const auto base = marginal_values(q);
    CHECK(base == fp.marginals[0].rhs);
    for (bool sa : {false, true})
        for (bool sb : {false, true}) {
            auto moved = permute(q, sa, sb);
            CHECK(moved == q);  // the unfolded witness is group-invariant
            CHECK(marginal_values(moved) == base);
        }
}

TEST_CASE("postselected and fanout verdicts agree on the bilocal") {
    std::mt19937_64 rng(31);

    OutcomeDistribution uni;
    uni.shape = {2, 2, 2};
    uni.probs.assign(8, rat(1, 8));
    auto rep = check_equivalence_bilocal(uni);
    CHECK(rep.post_feasible);
    CHECK(rep.equal);

    for (int trial = 0; trial < 6; ++trial) {
        auto target = random_target(rng, {2, 2, 2});
        auto r = check_equivalence_bilocal(target);
        CHECK(r.equal);
    }

    // point mass on the constant outputs: certified by constant strategies
    OutcomeDistribution point;
    point.shape = {2, 2, 2};
    point.probs.assign(8, Rational(0));
    point.probs[0] = 1;
    auto rp = check_equivalence_bilocal(point);
    CHECK(rp.post_feasible);
    CHECK(rp.fanout_feasible);
    CHECK(rp.equal);
}

TEST_CASE("postselected and fanout verdicts agree on the sleeper") {
    auto inside = check_equivalence_sleeper(rat(1, 2), rat(1, 4));
    CHECK(inside.post_feasible);
    CHECK(inside.fanout_feasible);
    CHECK(inside.equal);

    auto outside = check_equivalence_sleeper(rat(9, 20), rat(9, 20));
    CHECK_FALSE(outside.post_feasible);
    CHECK_FALSE(outside.fanout_feasible);
    CHECK(outside.equal);
}

TEST_CASE("triangle three-strategy correspondence at n = 2") {
    auto tri = builtin(BuiltinScenario::triangle3);
    auto spec = slot_class_spec(tri, 2, {2});

    DeterministicStrategy parity;
    parity.domain_sizes = {2, 2};
    parity.outcomes = 2;
    parity.table = {1, 2, 2, 1};
    auto targets = oracle_compatible(tri, {parity, parity, parity});
    auto rep = check_equivalence(tri, spec, targets, fanout_triangle3(targets[0], 2),
                                 Reduce::slot_class);
    CHECK(rep.post_feasible);
    CHECK(rep.equal);

    OutcomeDistribution ghz;
    ghz.shape = {2, 2, 2};
    ghz.probs = {rat(1, 2), 0, 0, 0, 0, 0, 0, rat(1, 2)};
    auto rep2 = check_equivalence(tri, spec, {ghz}, fanout_triangle3(ghz, 2), Reduce::slot_class);
    CHECK_FALSE(rep2.post_feasible);
    CHECK(rep2.equal);
}
