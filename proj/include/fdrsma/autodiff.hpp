// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdrsma::ad {

/// Scalar reverse-mode tape. Nodes record up to two parents and the local
/// partials toward them; topological order equals insertion order. One tape
/// per evaluation point, single-threaded.
class Tape {
public:
    int leaf(double v) { return push(v, -1, -1, 0.0, 0.0); }

    int unary(double v, int a, double da) { return push(v, a, -1, da, 0.0); }

    int binary(double v, int a, int b, double da, double db) { return push(v, a, b, da, db); }

    double value(int i) const { return val_[i]; }
    int size() const { return static_cast<int>(val_.size()); }

    /// Index of the first node whose value or partials went non-finite,
    /// or -1 when the whole graph is clean.
    int first_bad() const { return first_bad_; }

    /// Adjoints of every node with respect to node `root`.
    std::vector<double> backward(int root) const {
        std::vector<double> adj(val_.size(), 0.0);
        adj[root] = 1.0;
        for (int i = static_cast<int>(val_.size()) - 1; i >= 0; --i) {
            double a = adj[i];
            if (a == 0.0) continue;
            const Rec& r = rec_[i];
            if (r.a >= 0) adj[r.a] += a * r.da;
            if (r.b >= 0) adj[r.b] += a * r.db;
        }
        return adj;
    }

    void reserve(size_t n) {
        val_.reserve(n);
        rec_.reserve(n);
    }

private:
    struct Rec {
        int a, b;
        double da, db;
    };

    int push(double v, int a, int b, double da, double db) {
        if (first_bad_ < 0 && (!std::isfinite(v) || !std::isfinite(da) || !std::isfinite(db)))
            first_bad_ = static_cast<int>(val_.size());
        val_.push_back(v);
        rec_.push_back({a, b, da, db});
        return static_cast<int>(val_.size()) - 1;
    }

    std::vector<double> val_;
    std::vector<Rec> rec_;
    int first_bad_ = -1;
};

/// Tape-backed scalar. Carries its value so comparisons and branch decisions
/// never touch the tape.
struct Var {
    Tape* t = nullptr;
    int i = -1;
    double v = 0.0;
};

inline Var make_leaf(Tape& t, double v) { return {&t, t.leaf(v), v}; }

inline Var operator+(const Var& a, const Var& b) {
    return {a.t, a.t->binary(a.v + b.v, a.i, b.i, 1.0, 1.0), a.v + b.v};
}
inline Var operator+(const Var& a, double b) { return {a.t, a.t->unary(a.v + b, a.i, 1.0), a.v + b}; }
inline Var operator+(double a, const Var& b) { return b + a; }

inline Var operator-(const Var& a) { return {a.t, a.t->unary(-a.v, a.i, -1.0), -a.v}; }
inline Var operator-(const Var& a, const Var& b) {
    return {a.t, a.t->binary(a.v - b.v, a.i, b.i, 1.0, -1.0), a.v - b.v};
}
inline Var operator-(const Var& a, double b) { return a + (-b); }
inline Var operator-(double a, const Var& b) { return {b.t, b.t->unary(a - b.v, b.i, -1.0), a - b.v}; }

inline Var operator*(const Var& a, const Var& b) {
    return {a.t, a.t->binary(a.v * b.v, a.i, b.i, b.v, a.v), a.v * b.v};
}
inline Var operator*(const Var& a, double b) { return {a.t, a.t->unary(a.v * b, a.i, b), a.v * b}; }
inline Var operator*(double a, const Var& b) { return b * a; }

inline Var operator/(const Var& a, const Var& b) {
    double v = a.v / b.v;
    return {a.t, a.t->binary(v, a.i, b.i, 1.0 / b.v, -v / b.v), v};
}
inline Var operator/(const Var& a, double b) { return a * (1.0 / b); }
inline Var operator/(double a, const Var& b) {
    double v = a / b.v;
    return {b.t, b.t->unary(v, b.i, -v / b.v), v};
}

inline Var& operator+=(Var& a, const Var& b) { return a = a + b; }
inline Var& operator-=(Var& a, const Var& b) { return a = a - b; }
inline Var& operator*=(Var& a, const Var& b) { return a = a * b; }

inline Var sin(const Var& a) { return {a.t, a.t->unary(std::sin(a.v), a.i, std::cos(a.v)), std::sin(a.v)}; }
inline Var cos(const Var& a) { return {a.t, a.t->unary(std::cos(a.v), a.i, -std::sin(a.v)), std::cos(a.v)}; }
inline Var exp(const Var& a) {
    double v = std::exp(a.v);
    return {a.t, a.t->unary(v, a.i, v), v};
}
inline Var log(const Var& a) { return {a.t, a.t->unary(std::log(a.v), a.i, 1.0 / a.v), std::log(a.v)}; }
inline Var log2(const Var& a) {
    constexpr double inv_ln2 = 1.4426950408889634074;
    return {a.t, a.t->unary(std::log2(a.v), a.i, inv_ln2 / a.v), std::log2(a.v)};
}
inline Var sqrt(const Var& a) {
    double v = std::sqrt(a.v);
    return {a.t, a.t->unary(v, a.i, 0.5 / v), v};
}
inline Var tanh(const Var& a) {
    double v = std::tanh(a.v);
    return {a.t, a.t->unary(v, a.i, 1.0 - v * v), v};
}

/// Branch-decision value of a scalar, for code generic over double/Var.
inline double scalar_value(double x) { return x; }
inline double scalar_value(const Var& x) { return x.v; }

} // namespace fdrsma::ad

namespace fdrsma {

using ad::scalar_value;

/// hinge: max(0, x) with subgradient 0 at the kink.
template <class S>
S max0(const S& x) {
    return scalar_value(x) > 0.0 ? x : x * 0.0;
}

/// |x| with subgradient +1 at zero.
template <class S>
S vabs(const S& x) {
    return scalar_value(x) >= 0.0 ? x : -x;
}

/// Minimum of a non-empty list; ties resolve to the first minimizing index,
/// and the subgradient flows only through the winner.
template <class S>
S list_min(const std::vector<S>& xs) {
    if (xs.empty()) throw std::invalid_argument("list_min: empty list");
    size_t best = 0;
    for (size_t i = 1; i < xs.size(); ++i)
        if (scalar_value(xs[i]) < scalar_value(xs[best])) best = i;
    return xs[best];
}

} // namespace fdrsma
