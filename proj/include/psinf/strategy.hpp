#ifndef PSINF_STRATEGY_HPP
#define PSINF_STRATEGY_HPP

#include <cstdint>
#include <gmpxx.h>

#include <vector>

namespace psinf {

// A total map from discretized input tuples to an outcome. Entries and input
// values are 1-based; the table is stored row-major with slot 0 as the most
// significant digit, so enumeration order is lexicographic in the table.
struct DeterministicStrategy {
    std::vector<int> domain_sizes;  // per input slot
    int outcomes = 1;
    std::vector<std::uint8_t> table;  // entries in 1..outcomes

    int arity() const { return static_cast<int>(domain_sizes.size()); }
    std::size_t domain_card() const;

    // Output on 1-based input values.
    int eval(const std::vector<int>& inputs) const;

    // Flat index of a 1-based input tuple.
    std::size_t flat_index(const std::vector<int>& inputs) const;

    auto operator<=>(const DeterministicStrategy& other) const = default;
};

// Input-value relabeling group: either one symmetric group S_n acting
// independently per slot class, or a single common S_n across all slots
// (the diagonal group).
struct RelabelGroup {
    int n = 1;
    bool is_diagonal = true;
    std::vector<int> slot_class;  // per slot, contiguous class ids from 0

    static RelabelGroup diagonal(int n, int arity);
    static RelabelGroup independent(int n, std::vector<int> slot_class);
    // Rows/columns relabeled independently (the 2-slot matrix case).
    static RelabelGroup rows_cols(int n) { return independent(n, {0, 1}); }

    int num_classes() const;
    std::size_t order() const;  // n!^(number of independent permutations)
};

// All elements of S_n as 0-based value maps, in lexicographic order.
std::vector<std::vector<int>> symmetric_group(int n);

// One flat-domain index permutation per group element: element e maps a
// table t to t' with t'[i] = t[perm[e][i]].
std::vector<std::vector<std::size_t>> domain_index_perms(
    const RelabelGroup& g, const std::vector<int>& domain_sizes);

mpz_class strategy_count(const std::vector<int>& domain_sizes, int outcomes);

// All strategies over the given domain, lexicographic in the table.
// Throws if the count exceeds `cap` (the error names the count).
std::vector<DeterministicStrategy> enumerate_strategies(
    const std::vector<int>& domain_sizes, int outcomes, std::size_t cap = 1u << 20);

// Lexicographically least table in the orbit of `s` under `g`.
DeterministicStrategy canonicalize(const DeterministicStrategy& s, const RelabelGroup& g);

std::size_t orbit_size(const DeterministicStrategy& s, const RelabelGroup& g);

// Sorted list of canonical orbit representatives of the full strategy set.
std::vector<DeterministicStrategy> orbit_representatives(
    const std::vector<int>& domain_sizes, int outcomes, const RelabelGroup& g,
    std::size_t cap = 1u << 20);

}  // namespace psinf

#endif
