#include "psinf/strategy.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace psinf {

namespace {

constexpr std::size_t kGroupOrderCap = 20'000;

// Per-class permuted domain size: slots of one class must share a size; the
// diagonal group additionally needs one size across all slots (equal to n).
std::vector<int> class_sizes(const RelabelGroup& g, const std::vector<int>& domain_sizes) {
    if (!g.is_diagonal && g.slot_class.size() != domain_sizes.size())
        throw std::invalid_argument("relabel group slot classes incompatible with strategy arity");
    const int k = g.is_diagonal ? 1 : g.num_classes();
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < domain_sizes.size(); ++i) {
        int cls = g.is_diagonal ? 0 : g.slot_class[i];
        auto& sz = sizes[static_cast<std::size_t>(cls)];
        if (sz == 0)
            sz = domain_sizes[i];
        else if (sz != domain_sizes[i])
            throw std::invalid_argument("slots of one relabel class have unequal domain sizes");
    }
    for (auto& sz : sizes)
        if (sz == 0) sz = g.n;
    if (g.is_diagonal && sizes[0] != g.n && !domain_sizes.empty())
        throw std::invalid_argument("diagonal relabel group size does not match the slot domains");
    return sizes;
}

}  // namespace

std::size_t DeterministicStrategy::domain_card() const {
    std::size_t card = 1;
    for (int d : domain_sizes) card *= static_cast<std::size_t>(d);
    return card;
}

std::size_t DeterministicStrategy::flat_index(const std::vector<int>& inputs) const {
    if (inputs.size() != domain_sizes.size())
        throw std::invalid_argument("input arity mismatch");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (inputs[i] < 1 || inputs[i] > domain_sizes[i])
            throw std::out_of_range("input value out of domain");
        idx = idx * static_cast<std::size_t>(domain_sizes[i]) +
              static_cast<std::size_t>(inputs[i] - 1);
    }
    return idx;
}

int DeterministicStrategy::eval(const std::vector<int>& inputs) const {
    return table[flat_index(inputs)];
}

RelabelGroup RelabelGroup::diagonal(int n, int arity) {
    RelabelGroup g;
    g.n = n;
    g.is_diagonal = true;
    g.slot_class.assign(static_cast<std::size_t>(arity), 0);
    return g;
}

RelabelGroup RelabelGroup::independent(int n, std::vector<int> slot_class) {
    RelabelGroup g;
    g.n = n;
    g.is_diagonal = false;
    g.slot_class = std::move(slot_class);
    int k = g.num_classes();
    std::vector<bool> seen(static_cast<std::size_t>(k), false);
    for (int c : g.slot_class) {
        if (c < 0 || c >= k) throw std::invalid_argument("slot class ids must be contiguous from 0");
        seen[static_cast<std::size_t>(c)] = true;
    }
    for (bool b : seen)
        if (!b) throw std::invalid_argument("slot class ids must be contiguous from 0");
    return g;
}

int RelabelGroup::num_classes() const {
    if (is_diagonal) return 1;
    int k = 0;
    for (int c : slot_class) k = std::max(k, c + 1);
    return k;
}

std::size_t RelabelGroup::order() const {
    std::size_t fact = 1;
    for (int i = 2; i <= n; ++i) fact *= static_cast<std::size_t>(i);
    std::size_t ord = 1;
    int reps = is_diagonal ? 1 : num_classes();
    for (int i = 0; i < reps; ++i) {
        if (ord > kGroupOrderCap / fact + 1) return kGroupOrderCap + 1;
        ord *= fact;
    }
    return ord;
}

std::vector<std::vector<int>> symmetric_group(int n) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> out;
    do out.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

std::vector<std::vector<std::size_t>> domain_index_perms(const RelabelGroup& g,
                                                         const std::vector<int>& domain_sizes) {
    const auto sizes = class_sizes(g, domain_sizes);
    const int arity = static_cast<int>(domain_sizes.size());
    const int k = static_cast<int>(sizes.size());

    std::size_t order = 1;
    for (int sz : sizes) {
        std::size_t fact = 1;
        for (int i = 2; i <= sz; ++i) fact *= static_cast<std::size_t>(i);
        if (fact > kGroupOrderCap || order > kGroupOrderCap / fact)
            throw std::invalid_argument("relabel group too large for explicit traversal");
        order *= fact;
    }
    std::vector<std::vector<std::vector<int>>> class_sn;
    for (int sz : sizes) class_sn.push_back(symmetric_group(sz));

    std::size_t card = 1;
    for (int d : domain_sizes) card *= static_cast<std::size_t>(d);

    // Current choice of one permutation per class.
    std::vector<std::size_t> choice(static_cast<std::size_t>(k), 0);
    std::vector<std::vector<std::size_t>> perms;
    for (;;) {
        std::vector<std::size_t> p(card);
        std::vector<int> digits(static_cast<std::size_t>(arity), 0);  // 0-based values
        for (std::size_t flat = 0; flat < card; ++flat) {
            std::size_t src = 0;
            for (int i = 0; i < arity; ++i) {
                int cls = g.is_diagonal ? 0 : g.slot_class[static_cast<std::size_t>(i)];
                int v = class_sn[static_cast<std::size_t>(cls)][choice[static_cast<std::size_t>(cls)]]
                                [static_cast<std::size_t>(digits[static_cast<std::size_t>(i)])];
                src = src * static_cast<std::size_t>(domain_sizes[static_cast<std::size_t>(i)]) +
                      static_cast<std::size_t>(v);
            }
            p[flat] = src;
            for (int i = arity - 1; i >= 0; --i) {
                auto& d = digits[static_cast<std::size_t>(i)];
                if (++d < domain_sizes[static_cast<std::size_t>(i)]) break;
                d = 0;
            }
        }
        perms.push_back(std::move(p));
        int pos = k - 1;
        while (pos >= 0 && ++choice[static_cast<std::size_t>(pos)] ==
                               class_sn[static_cast<std::size_t>(pos)].size()) {
            choice[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return perms;
}

mpz_class strategy_count(const std::vector<int>& domain_sizes, int outcomes) {
    mpz_class card = 1;
    for (int d : domain_sizes) card *= d;
    if (!card.fits_ulong_p())
        throw std::runtime_error("strategy domain too large to even count");
    mpz_class count;
    mpz_pow_ui(count.get_mpz_t(), mpz_class(outcomes).get_mpz_t(), card.get_ui());
    return count;
}

std::vector<DeterministicStrategy> enumerate_strategies(const std::vector<int>& domain_sizes,
                                                        int outcomes, std::size_t cap) {
    for (int d : domain_sizes)
        if (d < 1) throw std::invalid_argument("domain sizes must be >= 1");
    if (outcomes < 1) throw std::invalid_argument("outcome count must be >= 1");
    mpz_class count = strategy_count(domain_sizes, outcomes);
    if (count > cap)
        throw std::runtime_error("strategy enumeration of " + count.get_str() +
                                 " maps exceeds cap " + std::to_string(cap));

    DeterministicStrategy s;
    s.domain_sizes = domain_sizes;
    s.outcomes = outcomes;
    s.table.assign(s.domain_card(), 1);

    std::vector<DeterministicStrategy> out;
    out.reserve(count.get_ui());
    for (;;) {
        out.push_back(s);
        int pos = static_cast<int>(s.table.size()) - 1;
        while (pos >= 0 && s.table[static_cast<std::size_t>(pos)] == outcomes) {
            s.table[static_cast<std::size_t>(pos)] = 1;
            --pos;
        }
        if (pos < 0) break;
        ++s.table[static_cast<std::size_t>(pos)];
    }
    return out;
}

DeterministicStrategy canonicalize(const DeterministicStrategy& s, const RelabelGroup& g) {
    const auto perms = domain_index_perms(g, s.domain_sizes);
    DeterministicStrategy best = s;
    std::vector<std::uint8_t> image(s.table.size());
    for (const auto& p : perms) {
        for (std::size_t i = 0; i < image.size(); ++i) image[i] = s.table[p[i]];
        if (image < best.table) best.table = image;
    }
    return best;
}

std::size_t orbit_size(const DeterministicStrategy& s, const RelabelGroup& g) {
    const auto perms = domain_index_perms(g, s.domain_sizes);
    std::set<std::vector<std::uint8_t>> images;
    std::vector<std::uint8_t> image(s.table.size());
    for (const auto& p : perms) {
        for (std::size_t i = 0; i < image.size(); ++i) image[i] = s.table[p[i]];
        images.insert(image);
    }
    return images.size();
}

std::vector<DeterministicStrategy> orbit_representatives(const std::vector<int>& domain_sizes,
                                                         int outcomes, const RelabelGroup& g,
                                                         std::size_t cap) {
    const auto all = enumerate_strategies(domain_sizes, outcomes, cap);
    const auto perms = domain_index_perms(g, domain_sizes);

    std::set<std::vector<std::uint8_t>> reps;
    std::vector<std::uint8_t> image(all.empty() ? 0 : all[0].table.size());
    for (const auto& s : all) {
        std::vector<std::uint8_t> best = s.table;
        for (const auto& p : perms) {
            for (std::size_t i = 0; i < image.size(); ++i) image[i] = s.table[p[i]];
            if (image < best) best = image;
        }
        reps.insert(std::move(best));
    }

    std::vector<DeterministicStrategy> out;
    out.reserve(reps.size());
    for (const auto& t : reps) {
        DeterministicStrategy s;
        s.domain_sizes = domain_sizes;
        s.outcomes = outcomes;
        s.table = t;
        out.push_back(std::move(s));
    }
    return out;  // std::set iteration is already lexicographic
}

}  // namespace psinf
