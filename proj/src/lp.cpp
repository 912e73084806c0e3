#include "psinf/lp.hpp"

#include <cassert>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "psinf/strategy.hpp"

namespace psinf {

void RationalLP::add_row(std::vector<Rational> coeffs, Rational b) {
    if (static_cast<int>(coeffs.size()) != num_vars)
        throw std::invalid_argument("row length does not match num_vars");
    rows.push_back(std::move(coeffs));
    rhs.push_back(std::move(b));
}

namespace {

// Dense tableau simplex over exact rationals, Bland's pivot rule throughout.
// Columns 0..n-1 are the original variables, n..n+m-1 the artificials.
class Simplex {
public:
    explicit Simplex(const RationalLP& lp)
        : n_(lp.num_vars), m_(lp.num_rows()), flip_(static_cast<std::size_t>(m_), false) {
        tab_.assign(static_cast<std::size_t>(m_),
                    std::vector<Rational>(static_cast<std::size_t>(n_ + m_ + 1)));
        basis_.resize(static_cast<std::size_t>(m_));
        for (int i = 0; i < m_; ++i) {
            bool flip = lp.rhs[static_cast<std::size_t>(i)] < 0;
            flip_[static_cast<std::size_t>(i)] = flip;
            auto& row = tab_[static_cast<std::size_t>(i)];
            for (int j = 0; j < n_; ++j) {
                const auto& a = lp.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                row[static_cast<std::size_t>(j)] = flip ? Rational(-a) : a;
            }
            row[static_cast<std::size_t>(n_ + i)] = 1;
            const auto& b = lp.rhs[static_cast<std::size_t>(i)];
            row.back() = flip ? Rational(-b) : b;
            basis_[static_cast<std::size_t>(i)] = n_ + i;
        }
    }

    // Minimizes the sum of artificials. Returns the optimal value.
    Rational phase_one() {
        std::vector<Rational> cost(static_cast<std::size_t>(n_ + m_), Rational(0));
        for (int i = 0; i < m_; ++i) cost[static_cast<std::size_t>(n_ + i)] = 1;
        run(cost, /*allow_artificial_entering=*/true);
        Rational value = 0;
        for (int i = 0; i < m_; ++i)
            if (basis_[static_cast<std::size_t>(i)] >= n_)
                value += tab_[static_cast<std::size_t>(i)].back();
        return value;
    }

    // After a zero-value phase one: pivot basic artificials out wherever an
    // original column has a nonzero entry in their row. Rows that are zero
    // across all original columns are inert and never change again.
    void drive_out_artificials() {
        for (int i = 0; i < m_; ++i) {
            if (basis_[static_cast<std::size_t>(i)] < n_) continue;
            for (int j = 0; j < n_; ++j) {
                if (tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 0) {
                    pivot(i, j);
                    break;
                }
            }
        }
    }

    // Maximizes c.x over the original variables. Returns false if unbounded
    // (entering_ then names the unbounded column).
    bool phase_two(const std::vector<Rational>& c) {
        std::vector<Rational> cost(static_cast<std::size_t>(n_ + m_), Rational(0));
        for (int j = 0; j < n_; ++j) cost[static_cast<std::size_t>(j)] = -c[static_cast<std::size_t>(j)];
        return run(cost, /*allow_artificial_entering=*/false);
    }

    std::vector<Rational> witness() const {
        std::vector<Rational> x(static_cast<std::size_t>(n_), Rational(0));
        for (int i = 0; i < m_; ++i)
            if (basis_[static_cast<std::size_t>(i)] < n_)
                x[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] =
                    tab_[static_cast<std::size_t>(i)].back();
        return x;
    }

    // y = c_B B^{-1} (per original row, flip signs mapped back), for the cost
    // vector used in the last run.
    std::vector<Rational> dual_vector(const std::vector<Rational>& cost) const {
        std::vector<Rational> y(static_cast<std::size_t>(m_), Rational(0));
        for (int i = 0; i < m_; ++i) {
            Rational yi = 0;
            for (int k = 0; k < m_; ++k) {
                const auto& ck = cost[static_cast<std::size_t>(basis_[static_cast<std::size_t>(k)])];
                if (ck != 0)
                    yi += ck * tab_[static_cast<std::size_t>(k)][static_cast<std::size_t>(n_ + i)];
            }
            y[static_cast<std::size_t>(i)] = flip_[static_cast<std::size_t>(i)] ? Rational(-yi) : yi;
        }
        return y;
    }

    // Ray certificate for an unbounded entering column.
    std::vector<Rational> ray() const {
        std::vector<Rational> d(static_cast<std::size_t>(n_), Rational(0));
        d[static_cast<std::size_t>(entering_)] = 1;
        for (int i = 0; i < m_; ++i)
            if (basis_[static_cast<std::size_t>(i)] < n_)
                d[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] =
                    -tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(entering_)];
        return d;
    }

    std::vector<Rational> phase_one_cost() const {
        std::vector<Rational> cost(static_cast<std::size_t>(n_ + m_), Rational(0));
        for (int i = 0; i < m_; ++i) cost[static_cast<std::size_t>(n_ + i)] = 1;
        return cost;
    }

private:
    // Minimizes cost.x with Bland's rule; false on unbounded.
    bool run(const std::vector<Rational>& cost, bool allow_artificial_entering) {
        const int limit = allow_artificial_entering ? n_ + m_ : n_;
        // reduced costs d_j = c_j - c_B B^{-1} A_j
        std::vector<Rational> d(cost.begin(), cost.begin() + limit);
        for (int k = 0; k < m_; ++k) {
            const auto& ck = cost[static_cast<std::size_t>(basis_[static_cast<std::size_t>(k)])];
            if (ck == 0) continue;
            const auto& row = tab_[static_cast<std::size_t>(k)];
            for (int j = 0; j < limit; ++j)
                if (row[static_cast<std::size_t>(j)] != 0)
                    d[static_cast<std::size_t>(j)] -= ck * row[static_cast<std::size_t>(j)];
        }

        for (;;) {
            int enter = -1;
            for (int j = 0; j < limit; ++j) {
                if (d[static_cast<std::size_t>(j)] < 0) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return true;

            int leave = -1;
            Rational best_ratio;
            for (int i = 0; i < m_; ++i) {
                const auto& a = tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
                if (a <= 0) continue;
                Rational ratio = tab_[static_cast<std::size_t>(i)].back() / a;
                if (leave < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[static_cast<std::size_t>(i)] <
                                                basis_[static_cast<std::size_t>(leave)])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave < 0) {
                entering_ = enter;
                return false;  // unbounded in the cost's improving direction
            }

            Rational dj = d[static_cast<std::size_t>(enter)];
            pivot(leave, enter);
            const auto& prow = tab_[static_cast<std::size_t>(leave)];
            for (int j = 0; j < limit; ++j)
                if (prow[static_cast<std::size_t>(j)] != 0)
                    d[static_cast<std::size_t>(j)] -= dj * prow[static_cast<std::size_t>(j)];
        }
    }

    void pivot(int prow, int pcol) {
        auto& row = tab_[static_cast<std::size_t>(prow)];
        Rational inv = 1 / row[static_cast<std::size_t>(pcol)];
        if (inv != 1)
            for (auto& v : row)
                if (v != 0) v *= inv;
        for (int i = 0; i < m_; ++i) {
            if (i == prow) continue;
            auto& other = tab_[static_cast<std::size_t>(i)];
            const Rational f = other[static_cast<std::size_t>(pcol)];
            if (f == 0) continue;
            for (std::size_t j = 0; j < other.size(); ++j)
                if (row[j] != 0) other[j] -= f * row[j];
        }
        basis_[static_cast<std::size_t>(prow)] = pcol;
    }

    int n_, m_;
    std::vector<std::vector<Rational>> tab_;
    std::vector<int> basis_;
    std::vector<bool> flip_;
    int entering_ = -1;
};

}  // namespace

FeasibilityResult solve_feasibility(const RationalLP& lp) {
    Simplex sx(lp);
    Rational infeas = sx.phase_one();
    FeasibilityResult res;
    if (infeas == 0) {
        res.feasible = true;
        res.witness = sx.witness();
        assert(verify_witness(lp, res.witness));
    } else {
        res.feasible = false;
        res.farkas = sx.dual_vector(sx.phase_one_cost());
        assert(verify_farkas(lp, res.farkas));
    }
    return res;
}

MaxResult solve_max(const RationalLP& lp) {
    if (lp.objective.empty()) throw std::invalid_argument("solve_max needs an objective");
    MaxResult res;
    Simplex sx(lp);
    if (sx.phase_one() != 0) {
        res.status = SolveStatus::infeasible;
        res.farkas = sx.dual_vector(sx.phase_one_cost());
        assert(verify_farkas(lp, res.farkas));
        return res;
    }
    sx.drive_out_artificials();
    if (!sx.phase_two(lp.objective)) {
        res.status = SolveStatus::unbounded;
        res.ray = sx.ray();
        return res;
    }
    res.status = SolveStatus::optimal;
    res.witness = sx.witness();
    res.optimum = 0;
    for (int j = 0; j < lp.num_vars; ++j)
        res.optimum +=
            lp.objective[static_cast<std::size_t>(j)] * res.witness[static_cast<std::size_t>(j)];
    std::vector<Rational> cost(static_cast<std::size_t>(lp.num_vars + lp.num_rows()), Rational(0));
    for (int j = 0; j < lp.num_vars; ++j)
        cost[static_cast<std::size_t>(j)] = -lp.objective[static_cast<std::size_t>(j)];
    res.dual = sx.dual_vector(cost);
    for (auto& v : res.dual) v = -v;
    assert(verify_witness(lp, res.witness));
    assert(verify_dual(lp, res.dual, res.optimum));
    return res;
}

bool verify_certificate(const RationalLP& lp, const Certificate& cert) {
    switch (cert.kind) {
        case CertKind::feasible_witness: return verify_witness(lp, cert.vec);
        case CertKind::farkas: return verify_farkas(lp, cert.vec);
        case CertKind::dual: return verify_dual(lp, cert.vec, cert.value);
    }
    return false;
}

bool verify_witness(const RationalLP& lp, const std::vector<Rational>& x) {
    if (static_cast<int>(x.size()) != lp.num_vars) return false;
    for (const auto& v : x)
        if (v < 0) return false;
    for (int i = 0; i < lp.num_rows(); ++i) {
        Rational dot = 0;
        for (int j = 0; j < lp.num_vars; ++j)
            dot += lp.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                   x[static_cast<std::size_t>(j)];
        if (dot != lp.rhs[static_cast<std::size_t>(i)]) return false;
    }
    return true;
}

bool verify_farkas(const RationalLP& lp, const std::vector<Rational>& y) {
    if (static_cast<int>(y.size()) != lp.num_rows()) return false;
    for (int j = 0; j < lp.num_vars; ++j) {
        Rational dot = 0;
        for (int i = 0; i < lp.num_rows(); ++i)
            dot += y[static_cast<std::size_t>(i)] *
                   lp.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (dot > 0) return false;
    }
    Rational yb = 0;
    for (int i = 0; i < lp.num_rows(); ++i)
        yb += y[static_cast<std::size_t>(i)] * lp.rhs[static_cast<std::size_t>(i)];
    return yb > 0;
}

bool verify_dual(const RationalLP& lp, const std::vector<Rational>& y, const Rational& value) {
    if (static_cast<int>(y.size()) != lp.num_rows() || lp.objective.empty()) return false;
    for (int j = 0; j < lp.num_vars; ++j) {
        Rational dot = 0;
        for (int i = 0; i < lp.num_rows(); ++i)
            dot += y[static_cast<std::size_t>(i)] *
                   lp.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (dot < lp.objective[static_cast<std::size_t>(j)]) return false;
    }
    Rational yb = 0;
    for (int i = 0; i < lp.num_rows(); ++i)
        yb += y[static_cast<std::size_t>(i)] * lp.rhs[static_cast<std::size_t>(i)];
    return yb == value;
}

void write_lp(std::ostream& out, const RationalLP& lp) {
    out << "vars " << lp.num_vars << " rows " << lp.num_rows() << "\n";
    for (int i = 0; i < lp.num_rows(); ++i) {
        for (int j = 0; j < lp.num_vars; ++j)
            out << frac_string(lp.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
                << ' ';
        out << frac_string(lp.rhs[static_cast<std::size_t>(i)]) << "\n";
    }
    if (!lp.objective.empty()) {
        out << "objective";
        for (const auto& c : lp.objective) out << ' ' << frac_string(c);
        out << "\n";
    }
}

RationalLP read_lp(std::istream& in) {
    std::string kw1, kw2;
    int n = 0, m = 0;
    if (!(in >> kw1 >> n >> kw2 >> m) || kw1 != "vars" || kw2 != "rows")
        throw std::runtime_error("bad LP header, expected 'vars N rows M'");
    RationalLP lp;
    lp.num_vars = n;
    std::string tok;
    for (int i = 0; i < m; ++i) {
        std::vector<Rational> row;
        for (int j = 0; j < n; ++j) {
            if (!(in >> tok)) throw std::runtime_error("truncated LP row");
            row.push_back(parse_rational(tok));
        }
        if (!(in >> tok)) throw std::runtime_error("truncated LP row (missing rhs)");
        lp.add_row(std::move(row), parse_rational(tok));
    }
    if (in >> tok) {
        if (tok != "objective") throw std::runtime_error("unexpected trailing token: " + tok);
        for (int j = 0; j < n; ++j) {
            if (!(in >> tok)) throw std::runtime_error("truncated objective line");
            lp.objective.push_back(parse_rational(tok));
        }
    }
    return lp;
}

namespace {

// Integer tallies of the sleeper dual inequality for one 4x4 matrix with
// entries 1/2 packed as the bits of a 16-bit word (bit 4*r+c set <=> entry 2).
struct SleeperTallies {
    long pair[2][2];  // distinct rows, distinct columns
    long row_diag[2], col_diag[2];
};

SleeperTallies sleeper_tallies(unsigned mask) {
    int rowc[4][2] = {}, colc[4][2] = {};
    int total[2] = {};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            int v = (mask >> (4 * r + c)) & 1;
            ++rowc[r][v];
            ++colc[c][v];
            ++total[v];
        }
    SleeperTallies t{};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            int v = (mask >> (4 * r + c)) & 1;
            for (int w = 0; w < 2; ++w)
                t.pair[v][w] += total[w] - rowc[r][w] - colc[c][w] + (v == w ? 1 : 0);
        }
    for (int v = 0; v < 2; ++v) {
        for (int r = 0; r < 4; ++r) t.row_diag[v] += static_cast<long>(rowc[r][v]) * (rowc[r][v] - 1);
        for (int c = 0; c < 4; ++c) t.col_diag[v] += static_cast<long>(colc[c][v]) * (colc[c][v] - 1);
    }
    return t;
}

bool sleeper_dual_row_holds(const std::array<Rational, 4>& z, unsigned mask) {
    const SleeperTallies t = sleeper_tallies(mask);
    // Inequality scaled by 144; the right-hand side gets 144/(2*48) = 3/2.
    Rational lhs = z[0] * t.pair[0][0] + z[1] * t.pair[0][1] + z[2] * t.pair[1][0] +
                   z[3] * t.pair[1][1];
    Rational rhs = Rational(3, 2) * Rational(t.row_diag[0] + t.row_diag[1] + t.col_diag[0] +
                                             t.col_diag[1]);
    return lhs >= rhs;
}

}  // namespace

SleeperDualCheck verify_dual_sleeper(const std::array<Rational, 4>& z) {
    bool all_ok = true;
    for (unsigned mask = 0; mask < (1u << 16); ++mask) {
        if (!sleeper_dual_row_holds(z, mask)) {
            all_ok = false;
            break;
        }
    }

    static const std::vector<DeterministicStrategy> reps =
        orbit_representatives({4, 4}, 2, RelabelGroup::rows_cols(4));
    bool reps_ok = true;
    for (const auto& s : reps) {
        unsigned mask = 0;
        for (int i = 0; i < 16; ++i)
            if (s.table[static_cast<std::size_t>(i)] == 2) mask |= 1u << i;
        if (!sleeper_dual_row_holds(z, mask)) {
            reps_ok = false;
            break;
        }
    }
    if (all_ok != reps_ok)
        throw std::logic_error("sleeper dual check disagrees between full scan and representatives");

    SleeperDualCheck out;
    out.valid = all_ok;
    out.value = (z[0] + z[1] + z[2] + z[3]) / 4;
    return out;
}

}  // namespace psinf
