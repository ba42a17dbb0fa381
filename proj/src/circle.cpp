#include "juliaspec/circle.hpp"

#include <map>
#include <numeric>
#include <stdexcept>

namespace juliaspec {

using i128 = __int128;

Rational::Rational(i64 n, i64 d) {
    if (d == 0) throw std::invalid_argument("zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    i64 g = std::gcd(n < 0 ? -n : n, d);
    if (g == 0) g = 1;
    num = n / g;
    den = d / g;
}

std::string Rational::str() const { return std::to_string(num) + "/" + std::to_string(den); }

bool operator<(const Rational& a, const Rational& b) {
    return i128(a.num) * b.den < i128(b.num) * a.den;
}

i64 ipow(i64 base, int exp) {
    i64 r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

CircleParams CircleParams::family(int p, int k) {
    if (p < 2 || k < 2) throw std::invalid_argument("family needs p >= 2 and k >= 2");
    return CircleParams{p, k, Rational(1, i64(p) * (ipow(p, k) - 1))};
}

CircleParams CircleParams::dendrite() { return CircleParams{2, 0, Rational(1, 12)}; }

CirclePoint::CirclePoint(i64 n, i64 d) : num(n), den(d) {
    if (d <= 0 || n < 0 || n >= d) throw std::invalid_argument("circle point out of range");
}

CirclePoint multiply_mod1(const CirclePoint& t, int p) {
    return CirclePoint(i64((i128(t.num) * p) % t.den), t.den);
}

int arc_digit(const CirclePoint& t, const CircleParams& params) {
    const i128 full = i128(t.den) * params.theta.den;
    i128 y = (i128(t.num) * params.theta.den - i128(params.theta.num) * t.den) % full;
    if (y < 0) y += full;
    if (y == 0) return params.p - 1;
    i128 scaled = i128(params.p) * y;
    return int((scaled + full - 1) / full) - 1;
}

KneadingSequence canonicalize(std::vector<int> pre, std::vector<int> per) {
    if (per.empty()) throw std::invalid_argument("empty period");
    const size_t L = per.size();
    for (size_t d = 1; d <= L; ++d) {
        if (L % d) continue;
        bool ok = true;
        for (size_t i = d; i < L && ok; ++i) ok = per[i] == per[i - d];
        if (ok) {
            per.resize(d);
            break;
        }
    }
    // a preperiod digit equal to the period's last digit can be absorbed
    while (!pre.empty() && pre.back() == per.back()) {
        pre.pop_back();
        int last = per.back();
        per.pop_back();
        per.insert(per.begin(), last);
    }
    return KneadingSequence{std::move(pre), std::move(per)};
}

KneadingSequence KneadingSequence::shifted() const {
    if (!preperiod.empty())
        return canonicalize(std::vector<int>(preperiod.begin() + 1, preperiod.end()), period);
    std::vector<int> per(period.begin() + 1, period.end());
    per.push_back(period.front());
    return canonicalize({}, per);
}

std::string KneadingSequence::str() const {
    std::string s;
    for (int d : preperiod) s += std::to_string(d);
    s += "(";
    for (int d : period) s += std::to_string(d);
    return s + ")";
}

KneadingSequence kneading_sequence(const CirclePoint& t, const CircleParams& params) {
    std::map<i64, size_t> seen;
    std::vector<int> digits;
    CirclePoint x = t;
    while (seen.find(x.num) == seen.end()) {
        seen.emplace(x.num, digits.size());
        digits.push_back(arc_digit(x, params));
        x = multiply_mod1(x, params.p);
    }
    size_t start = seen[x.num];
    return canonicalize(std::vector<int>(digits.begin(), digits.begin() + start),
                        std::vector<int>(digits.begin() + start, digits.end()));
}

bool same_class(const CirclePoint& t1, const CirclePoint& t2, const CircleParams& params) {
    return kneading_sequence(t1, params) == kneading_sequence(t2, params);
}

}  // namespace juliaspec
