#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace juliaspec {

using i64 = std::int64_t;

// Reduced fraction with positive denominator.
struct Rational {
    i64 num = 0;
    i64 den = 1;

    Rational() = default;
    Rational(i64 n, i64 d);

    double to_double() const { return double(num) / double(den); }
    std::string str() const;

    friend bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator<(const Rational& a, const Rational& b);
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
};

// Parameters of the partition used by the kneading map t -> p t mod 1.
// k is the period of the critical value orbit for the (p,k) family; it is 0
// for the Dendrite partition, which is not part of that family.
struct CircleParams {
    int p = 2;
    int k = 0;
    Rational theta;

    // theta = 1/(p(p^k - 1)); the basilica-type polynomials z^p + c
    static CircleParams family(int p, int k);
    // z^2 + i: arcs split at 1/12 and 7/12
    static CircleParams dendrite();
};

// Exact point num/den on R/Z. The denominator is the level's canonical one
// and is never reduced, so numerators index arrays directly.
struct CirclePoint {
    i64 num = 0;
    i64 den = 1;

    CirclePoint() = default;
    CirclePoint(i64 n, i64 d);

    Rational value() const { return Rational(num, den); }
    friend bool operator==(const CirclePoint& a, const CirclePoint& b) { return a.num == b.num && a.den == b.den; }
};

struct KneadingSequence {
    std::vector<int> preperiod;
    std::vector<int> period;

    // Sequence of P(t): drop the first digit, stay canonical.
    KneadingSequence shifted() const;
    std::string str() const;

    friend bool operator==(const KneadingSequence& a, const KneadingSequence& b) {
        return a.preperiod == b.preperiod && a.period == b.period;
    }
    friend bool operator<(const KneadingSequence& a, const KneadingSequence& b) {
        if (a.preperiod != b.preperiod) return a.preperiod < b.preperiod;
        return a.period < b.period;
    }
};

CirclePoint multiply_mod1(const CirclePoint& t, int p);

// Index n of the half-open arc (theta + n/p, theta + (n+1)/p] containing t.
int arc_digit(const CirclePoint& t, const CircleParams& params);

// Reduce to minimal period, then shortest preperiod.
KneadingSequence canonicalize(std::vector<int> preperiod, std::vector<int> period);

KneadingSequence kneading_sequence(const CirclePoint& t, const CircleParams& params);

bool same_class(const CirclePoint& t1, const CirclePoint& t2, const CircleParams& params);

i64 ipow(i64 base, int exp);

}  // namespace juliaspec
