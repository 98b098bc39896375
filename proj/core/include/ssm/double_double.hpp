#ifndef SSM_DOUBLE_DOUBLE_HPP
#define SSM_DOUBLE_DOUBLE_HPP

#include <cmath>

namespace ssm {

// Unevaluated double-double value: hi + lo with |lo| <= ulp(hi)/2.
// Used where two eigenfunction series cancel almost completely and the
// ~16 digits of a plain double are not enough (eval_N at large argument,
// Gaver-Stehfest accumulation).
struct dd {
    double hi = 0.0;
    double lo = 0.0;

    dd() = default;
    constexpr dd(double h) : hi(h), lo(0.0) {}
    constexpr dd(double h, double l) : hi(h), lo(l) {}

    double to_double() const { return hi + lo; }
};

namespace dd_detail {

inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline dd quick_two_sum(double a, double b) {  // requires |a| >= |b|
    double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

}  // namespace dd_detail

inline dd operator+(dd a, dd b) {
    using namespace dd_detail;
    dd s = two_sum(a.hi, b.hi);
    double lo = s.lo + a.lo + b.lo;
    return quick_two_sum(s.hi, lo);
}

inline dd operator-(dd a) { return {-a.hi, -a.lo}; }
inline dd operator-(dd a, dd b) { return a + (-b); }

inline dd operator*(dd a, dd b) {
    using namespace dd_detail;
    dd p = two_prod(a.hi, b.hi);
    double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, lo);
}

inline dd operator/(dd a, dd b) {
    using namespace dd_detail;
    double q1 = a.hi / b.hi;
    dd r = a - dd(q1) * b;
    double q2 = r.hi / b.hi;
    r = r - dd(q2) * b;
    double q3 = r.hi / b.hi;
    dd q = quick_two_sum(q1, q2);
    return q + dd(q3);
}

inline dd operator+(dd a, double b) { return a + dd(b); }
inline dd operator*(dd a, double b) { return a * dd(b); }
inline dd operator/(dd a, double b) { return a / dd(b); }
inline bool operator<(dd a, dd b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }

inline dd dd_abs(dd a) { return a.hi < 0 ? -a : a; }

// exp in double-double: reduce by powers of two and ln 2, then Taylor.
inline dd dd_exp(dd a) {
    static const dd LN2{6.931471805599452862e-01, 2.319046813846299558e-17};
    if (a.hi > 709.0) return {HUGE_VAL, 0.0};
    if (a.hi < -745.0) return {0.0, 0.0};
    double m = std::floor(a.hi / LN2.hi + 0.5);
    dd r = a - LN2 * m;
    // |r| <= ln2/2; scale down for faster convergence
    const int k = 16;
    r = r / double(1 << 4);  // /16
    dd sum{1.0, 0.0};
    dd term{1.0, 0.0};
    for (int i = 1; i < 26; ++i) {
        term = term * r / double(i);
        sum = sum + term;
        if (std::fabs(term.hi) < 1e-35 * std::fabs(sum.hi)) break;
    }
    (void)k;
    for (int i = 0; i < 4; ++i) sum = sum * sum;  // undo the /16
    int mi = int(m);
    return sum * std::ldexp(1.0, mi >= -1021 && mi <= 1021 ? mi : 0) *
           (mi >= -1021 && mi <= 1021 ? 1.0 : std::ldexp(1.0, mi));
}

// log in double-double via one Newton step on dd_exp.
inline dd dd_log(dd a) {
    double l = std::log(a.hi);
    dd e = dd_exp(dd(l));
    dd r = (a - e) / e;  // a/e - 1 to double-double accuracy
    return dd(l) + r;
}

// x^p for x > 0.
inline dd dd_pow(dd x, dd p) { return dd_exp(dd_log(x) * p); }

}  // namespace ssm

#endif
