#include "psinf/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace psinf {

Rational parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("empty rational literal");

    auto is_int = [](const std::string& t) {
        if (t.empty()) return false;
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };

    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!is_int(num) || !is_int(den))
            throw std::invalid_argument("bad rational literal: " + text);
        Rational q{mpz_class(num), mpz_class(den)};
        if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
        q.canonicalize();
        return q;
    }

    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        bool neg = !ip.empty() && ip[0] == '-';
        if (!ip.empty() && (ip[0] == '-' || ip[0] == '+')) ip = ip.substr(1);
        if (ip.empty()) ip = "0";
        if (fp.empty()) fp = "0";
        if (!is_int(ip) || !is_int(fp) || fp[0] == '-' || fp[0] == '+')
            throw std::invalid_argument("bad decimal literal: " + text);
        mpz_class whole(ip), frac(fp), den(1);
        for (std::size_t i = 0; i < s.size() - dot - 1; ++i) den *= 10;
        Rational fpart{frac, den};
        fpart.canonicalize();
        Rational q = Rational(whole) + fpart;
        return neg ? Rational(-q) : q;
    }

    if (!is_int(s)) throw std::invalid_argument("bad rational literal: " + text);
    return Rational(mpz_class(s));
}

std::string frac_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string short_frac_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return frac_string(q);
}

std::string decimal_string(const Rational& q, int digits) {
    mpz_class scale(1);
    for (int i = 0; i < digits; ++i) scale *= 10;
    bool neg = q < 0;
    Rational a = neg ? Rational(-q) : q;
    // round-half-up on |q|
    mpz_class scaled = (a.get_num() * scale * 2 + a.get_den()) / (a.get_den() * 2);
    mpz_class whole = scaled / scale, frac = scaled % scale;
    std::string fs = frac.get_str();
    fs.insert(fs.begin(), digits - static_cast<int>(fs.size()), '0');
    std::string out = whole.get_str() + "." + fs;
    if (neg && scaled != 0) out = "-" + out;
    return out;
}

Rational sum(const std::vector<Rational>& xs) {
    Rational s = 0;
    for (const auto& x : xs) s += x;
    return s;
}

}  // namespace psinf
