#ifndef PSINF_RATIONAL_HPP
#define PSINF_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <vector>

namespace psinf {

using Rational = mpq_class;

// Parses "p/q", a plain integer "p", or a decimal like "0.45" (read exactly
// as a fraction over a power of ten). Throws std::invalid_argument on junk.
Rational parse_rational(const std::string& text);

// Canonical "num/den" form, den > 0 (e.g. "3/4", "-1/2", "2/1").
std::string frac_string(const Rational& q);

// Like frac_string, but integers drop the "/1" (e.g. "3/4", "2").
std::string short_frac_string(const Rational& q);

// Correctly rounded fixed-point decimal with `digits` fractional digits.
std::string decimal_string(const Rational& q, int digits = 12);

inline Rational rat(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Sum of entries, exact.
Rational sum(const std::vector<Rational>& xs);

}  // namespace psinf

#endif
