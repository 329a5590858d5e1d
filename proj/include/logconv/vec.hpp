#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace logconv {

using Real = double;

inline constexpr Real kNegInf = -std::numeric_limits<Real>::infinity();
inline constexpr Real kPosInf = std::numeric_limits<Real>::infinity();

/* Point/vector in dimension 1..3.  Unused coordinates stay zero so that
   dot/cross formulas need no dimension branches. */
struct Vec {
    int dim = 0;
    std::array<Real, 3> c{0.0, 0.0, 0.0};

    Vec() = default;
    explicit Vec(int d) : dim(d) {
        if (d < 1 || d > 3) throw std::invalid_argument("Vec: dim must be 1..3");
    }
    Vec(int d, Real x, Real y = 0.0, Real z = 0.0) : Vec(d) {
        c[0] = x;
        c[1] = y;
        c[2] = z;
    }
    static Vec of(std::initializer_list<Real> xs) {
        Vec v(static_cast<int>(xs.size()));
        int i = 0;
        for (Real x : xs) v.c[i++] = x;
        return v;
    }

    Real& operator[](int i) { return c[static_cast<size_t>(i)]; }
    Real operator[](int i) const { return c[static_cast<size_t>(i)]; }

    Vec operator+(const Vec& o) const {
        Vec r(dim);
        for (int i = 0; i < dim; ++i) r.c[i] = c[i] + o.c[i];
        return r;
    }
    Vec operator-(const Vec& o) const {
        Vec r(dim);
        for (int i = 0; i < dim; ++i) r.c[i] = c[i] - o.c[i];
        return r;
    }
    Vec operator-() const {
        Vec r(dim);
        for (int i = 0; i < dim; ++i) r.c[i] = -c[i];
        return r;
    }
    Vec operator*(Real s) const {
        Vec r(dim);
        for (int i = 0; i < dim; ++i) r.c[i] = c[i] * s;
        return r;
    }
    friend Vec operator*(Real s, const Vec& v) { return v * s; }

    bool operator==(const Vec& o) const { return dim == o.dim && c == o.c; }
};

inline Real dot(const Vec& a, const Vec& b) {
    Real s = 0.0;
    for (int i = 0; i < a.dim; ++i) s += a.c[i] * b.c[i];
    return s;
}

inline Vec cross(const Vec& a, const Vec& b) {
    Vec r(3);
    r.c[0] = a.c[1] * b.c[2] - a.c[2] * b.c[1];
    r.c[1] = a.c[2] * b.c[0] - a.c[0] * b.c[2];
    r.c[2] = a.c[0] * b.c[1] - a.c[1] * b.c[0];
    return r;
}

inline Real norm2(const Vec& a) { return dot(a, a); }
inline Real norm(const Vec& a) { return std::sqrt(norm2(a)); }

inline Real dist_inf(const Vec& a, const Vec& b) {
    Real m = 0.0;
    for (int i = 0; i < a.dim; ++i) m = std::max(m, std::abs(a.c[i] - b.c[i]));
    return m;
}

/* Strict lexicographic order; used everywhere a tie between maximizers must
   resolve deterministically. */
inline bool lex_less(const Vec& a, const Vec& b) {
    for (int i = 0; i < a.dim; ++i) {
        if (a.c[i] < b.c[i]) return true;
        if (a.c[i] > b.c[i]) return false;
    }
    return false;
}

/* Axis-aligned box, dimension matching lo/hi. */
struct Box {
    Vec lo, hi;

    int dim() const { return lo.dim; }
    Real extent(int i) const { return hi[i] - lo[i]; }
    Real volume() const {
        Real v = 1.0;
        for (int i = 0; i < dim(); ++i) v *= extent(i);
        return v;
    }
    bool contains(const Box& inner, Real tol) const {
        for (int i = 0; i < dim(); ++i)
            if (inner.lo[i] < lo[i] - tol || inner.hi[i] > hi[i] + tol) return false;
        return true;
    }
    Vec center() const { return (lo + hi) * 0.5; }
};

inline Box bounding_box(const std::vector<Vec>& pts) {
    if (pts.empty()) throw std::invalid_argument("bounding_box: no points");
    Box b{pts[0], pts[0]};
    for (const Vec& p : pts)
        for (int i = 0; i < p.dim; ++i) {
            b.lo[i] = std::min(b.lo[i], p[i]);
            b.hi[i] = std::max(b.hi[i], p[i]);
        }
    return b;
}

inline long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace logconv
