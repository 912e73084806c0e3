#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "psinf/strategy.hpp"

using namespace psinf;

namespace {

DeterministicStrategy matrix4(std::initializer_list<int> entries) {
    DeterministicStrategy s;
    s.domain_sizes = {4, 4};
    s.outcomes = 2;
    for (int e : entries) s.table.push_back(static_cast<std::uint8_t>(e));
    return s;
}

// Independent orbit oracle: closure under the swap/cycle generators of the
// row and column permutation groups.
std::set<std::vector<std::uint8_t>> orbit_bfs(const DeterministicStrategy& s) {
    auto row_perm = [](const std::vector<std::uint8_t>& t, const std::vector<int>& p) {
        std::vector<std::uint8_t> out(16);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                out[static_cast<std::size_t>(4 * r + c)] =
                    t[static_cast<std::size_t>(4 * p[static_cast<std::size_t>(r)] + c)];
        return out;
    };
    auto col_perm = [](const std::vector<std::uint8_t>& t, const std::vector<int>& p) {
        std::vector<std::uint8_t> out(16);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                out[static_cast<std::size_t>(4 * r + c)] =
                    t[static_cast<std::size_t>(4 * r + p[static_cast<std::size_t>(c)])];
        return out;
    };
    const std::vector<int> swap01{1, 0, 2, 3}, cycle{1, 2, 3, 0};
    std::set<std::vector<std::uint8_t>> seen{s.table};
    std::vector<std::vector<std::uint8_t>> frontier{s.table};
    while (!frontier.empty()) {
        std::vector<std::vector<std::uint8_t>> next;
        for (const auto& t : frontier)
            for (const auto& img :
                 {row_perm(t, swap01), row_perm(t, cycle), col_perm(t, swap01), col_perm(t, cycle)})
                if (seen.insert(img).second) next.push_back(img);
        frontier = std::move(next);
    }
    return seen;
}

}  // namespace

TEST_CASE("strategy counts and enumeration order") {
    CHECK(strategy_count({4, 4}, 2) == 65536);
    CHECK(strategy_count({1}, 1) == 1);
    CHECK(strategy_count({2, 2}, 2) == 16);

    auto all = enumerate_strategies({2, 2}, 2);
    REQUIRE(all.size() == 16);
    CHECK(all.front().table == std::vector<std::uint8_t>{1, 1, 1, 1});
    CHECK(all.back().table == std::vector<std::uint8_t>{2, 2, 2, 2});
    CHECK(std::is_sorted(all.begin(), all.end(),
                         [](const auto& a, const auto& b) { return a.table < b.table; }));

    auto single = enumerate_strategies({1}, 1);
    REQUIRE(single.size() == 1);
    CHECK(single[0].table == std::vector<std::uint8_t>{1});

    CHECK_THROWS_WITH_AS(enumerate_strategies({4, 4}, 2, 1000),
                         doctest::Contains("65536"), std::runtime_error);
}

TEST_CASE("eval uses 1-based row-major tables") {
    auto s = matrix4({1, 1, 1, 1, 1, 1, 1, 1, 1, 2, 1, 1, 1, 1, 1, 1});
    CHECK(s.eval({3, 2}) == 2);
    CHECK(s.eval({2, 3}) == 1);
    CHECK_THROWS(s.eval({5, 1}));
    CHECK_THROWS(s.eval({1}));
}

TEST_CASE("canonicalize fixed points and single-marked-cell orbit") {
    const auto g = RelabelGroup::rows_cols(4);
    auto ones = matrix4({1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1});
    CHECK(canonicalize(ones, g) == ones);

    // one 2 at row 3, column 2: every single-marked matrix is in one orbit,
    // whose least table pushes the 2 to the last cell
    auto marked = matrix4({1, 1, 1, 1, 1, 1, 1, 1, 1, 2, 1, 1, 1, 1, 1, 1});
    auto canon = canonicalize(marked, g);
    CHECK(canon.table == std::vector<std::uint8_t>{1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 2});
    CHECK(orbit_size(marked, g) == 16);
}

TEST_CASE("canonicalize agrees with brute-force orbit expansion") {
    const auto g = RelabelGroup::rows_cols(4);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 8; ++trial) {
        DeterministicStrategy s;
        s.domain_sizes = {4, 4};
        s.outcomes = 2;
        for (int i = 0; i < 16; ++i)
            s.table.push_back(static_cast<std::uint8_t>(1 + (rng() & 1)));

        const auto orbit = orbit_bfs(s);
        const auto canon = canonicalize(s, g);
        CHECK(canon.table == *orbit.begin());
        CHECK(orbit_size(s, g) == orbit.size());

        // constant on the orbit, and idempotent
        std::size_t probe = 0;
        for (const auto& t : orbit) {
            if (probe++ % 97 != 0) continue;
            DeterministicStrategy member = s;
            member.table = t;
            CHECK(canonicalize(member, g) == canon);
        }
        CHECK(canonicalize(canon, g) == canon);
    }
}

TEST_CASE("orbit representative counts") {
    auto reps22 = orbit_representatives({2, 2}, 2, RelabelGroup::rows_cols(2));
    CHECK(reps22.size() == 7);

    // Burnside over the four row/column permutations of a 2x2 table
    {
        long fixed = 0;
        const auto perms = domain_index_perms(RelabelGroup::rows_cols(2), {2, 2});
        REQUIRE(perms.size() == 4);
        for (const auto& p : perms)
            for (const auto& s : enumerate_strategies({2, 2}, 2)) {
                bool fix = true;
                for (std::size_t i = 0; i < 4 && fix; ++i) fix = s.table[i] == s.table[p[i]];
                fixed += fix;
            }
        CHECK(fixed / 4 == 7);
    }

    // orbit sizes over representatives partition the full strategy set
    std::size_t total22 = 0;
    for (const auto& r : reps22) total22 += orbit_size(r, RelabelGroup::rows_cols(2));
    CHECK(total22 == 16);

    CHECK(orbit_representatives({3}, 1, RelabelGroup::diagonal(3, 1)).size() == 1);

    // diagonal 2x2 group: Burnside gives (16 + 4) / 2
    CHECK(orbit_representatives({2, 2}, 2, RelabelGroup::diagonal(2, 2)).size() == 10);
}

TEST_CASE("representative list is sorted and closed") {
    const auto g = RelabelGroup::rows_cols(2);
    auto reps = orbit_representatives({2, 2}, 2, g);
    CHECK(std::is_sorted(reps.begin(), reps.end(),
                         [](const auto& a, const auto& b) { return a.table < b.table; }));
    for (const auto& s : enumerate_strategies({2, 2}, 2)) {
        auto canon = canonicalize(s, g);
        CHECK(std::find(reps.begin(), reps.end(), canon) != reps.end());
    }
}

TEST_CASE("rectangular independent relabeling") {
    // 2x3 tables under S2 x S3, by Burnside: (2^6 + 2^3)/2 averaged over the
    // six column permutations by cycle type: (64+8 + 3*(16+4) + 2*(4+2))/12
    auto reps = orbit_representatives({2, 3}, 2, RelabelGroup::independent(2, {0, 1}));
    CHECK(reps.size() == 13);

    DeterministicStrategy s;
    s.domain_sizes = {2, 3};
    s.outcomes = 2;
    s.table = {1, 1, 1, 1, 1, 1};
    CHECK_THROWS(canonicalize(s, RelabelGroup::independent(2, {0, 0})));
}

TEST_CASE("group order guard") {
    DeterministicStrategy s;
    s.domain_sizes = {9, 9};
    s.outcomes = 2;
    s.table.assign(81, 1);
    CHECK_THROWS(canonicalize(s, RelabelGroup::independent(9, {0, 1})));
}
