#ifndef PSINF_LP_HPP
#define PSINF_LP_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "psinf/rational.hpp"

namespace psinf {

// An exact-rational linear program in equality form:
//   find / maximize   objective . x
//   subject to        rows[i] . x == rhs[i]   for all i,
//                     x >= 0.
struct RationalLP {
    int num_vars = 0;
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    std::vector<Rational> objective;  // empty for pure feasibility problems

    int num_rows() const { return static_cast<int>(rows.size()); }
    void add_row(std::vector<Rational> coeffs, Rational b);
};

enum class CertKind { feasible_witness, farkas, dual };

struct Certificate {
    CertKind kind = CertKind::feasible_witness;
    std::vector<Rational> vec;
    Rational value;  // objective value for dual certificates
};

// Exact substitution check of any certificate kind against the program.
bool verify_certificate(const RationalLP& lp, const Certificate& cert);

struct FeasibilityResult {
    bool feasible = false;
    std::vector<Rational> witness;  // satisfies every row exactly, x >= 0
    std::vector<Rational> farkas;   // y with yA <= 0 componentwise and y.b > 0
};

enum class SolveStatus { optimal, infeasible, unbounded };

struct MaxResult {
    SolveStatus status = SolveStatus::optimal;
    Rational optimum;
    std::vector<Rational> witness;
    std::vector<Rational> dual;    // y with yA >= objective componentwise, y.b == optimum
    std::vector<Rational> farkas;  // set when infeasible
    std::vector<Rational> ray;     // set when unbounded: d >= 0, Ad = 0, c.d > 0
};

// Exact verdict, no tolerances. Always decides.
FeasibilityResult solve_feasibility(const RationalLP& lp);

// Requires lp.objective to be set.
MaxResult solve_max(const RationalLP& lp);

// Independent certificate checks by exact substitution.
bool verify_witness(const RationalLP& lp, const std::vector<Rational>& x);
bool verify_farkas(const RationalLP& lp, const std::vector<Rational>& y);
bool verify_dual(const RationalLP& lp, const std::vector<Rational>& y, const Rational& value);

// Text exchange format: header "vars N rows M", then one row per line as
// space-separated "num/den" rationals with the rhs last, then an optional
// line "objective" followed by N rationals.
void write_lp(std::ostream& out, const RationalLP& lp);
RationalLP read_lp(std::istream& in);

struct SleeperDualCheck {
    bool valid = false;
    Rational value;
};

// Checks the sleeper dual inequality
//   sum_ab z_ab /144 * #{a1!=a2, b1!=b2 : M[a1,b1]=a, M[a2,b2]=b}
//     >= 1/2 sum_a ( #{a1, b1!=b2 : M[a1,b1]=M[a1,b2]=a}/48
//                  + #{a1!=a2, b1 : M[a1,b1]=M[a2,b1]=a}/48 )
// for every 4x4 binary strategy matrix M -- over all 65536 of them and over
// the 317 row/column-relabeling representatives, asserting that the two scans
// agree. value = (1/4) sum_ab z_ab. z is ordered (z11, z12, z21, z22).
SleeperDualCheck verify_dual_sleeper(const std::array<Rational, 4>& z);

}  // namespace psinf

#endif
