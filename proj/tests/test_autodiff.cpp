// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "fdrsma/autodiff.hpp"

using namespace fdrsma;
using ad::Tape;
using ad::Var;

namespace {

/// d/dx f at x by central differences.
template <class F>
double fd(F f, double x, double h = 1e-6) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

template <class F>
double grad_at(F f, double x) {
    Tape t;
    Var v = ad::make_leaf(t, x);
    Var y = f(v);
    return t.backward(y.i)[v.i];
}

} // namespace

TEST_CASE("primitive derivatives match finite differences") {
    auto check = [](auto f, double x) {
        CHECK(grad_at(f, x) == doctest::Approx(fd(f, x)).epsilon(1e-6));
    };
    check([](auto v) { return sin(v) * cos(v); }, 0.7);
    check([](auto v) { return exp(v) / (1.0 + v * v); }, 0.3);
    check([](auto v) { return log(v) + sqrt(v); }, 2.4);
    check([](auto v) { return tanh(3.0 * v); }, 0.2);
    check([](auto v) { return log2(1.0 + v * v); }, 1.1);
    check([](auto v) { return (2.0 - v) * (v - 0.5) / (v + 4.0); }, 1.6);
}

TEST_CASE("rate-expression gradient hand value") {
    // d/dp log2(1 + p g) = g / ((1 + p g) ln 2); at p = g = 1 that is
    // 1 / (2 ln 2).
    Tape t;
    Var p = ad::make_leaf(t, 1.0);
    Var g = ad::make_leaf(t, 1.0);
    Var r = log2(1.0 + p * g);
    auto adj = t.backward(r.i);
    CHECK(adj[p.i] == doctest::Approx(1.0 / (2.0 * std::log(2.0))).epsilon(1e-14));
    CHECK(adj[g.i] == doctest::Approx(1.0 / (2.0 * std::log(2.0))).epsilon(1e-14));
}

TEST_CASE("gradient of a norm is linear in the point") {
    // grad ||x||^2 = 2x
    Tape t;
    std::vector<double> x = {0.3, -1.2, 2.5};
    std::vector<Var> v;
    for (double xi : x) v.push_back(ad::make_leaf(t, xi));
    Var n = v[0] * v[0];
    for (size_t i = 1; i < v.size(); ++i) n += v[i] * v[i];
    auto adj = t.backward(n.i);
    for (size_t i = 0; i < v.size(); ++i)
        CHECK(adj[v[i].i] == doctest::Approx(2.0 * x[i]).epsilon(1e-14));
}

TEST_CASE("fan-out accumulates adjoints") {
    Tape t;
    Var x = ad::make_leaf(t, 0.9);
    Var y = x * x + sin(x) * x; // x used three times
    auto adj = t.backward(y.i);
    CHECK(adj[x.i] ==
          doctest::Approx(2.0 * 0.9 + std::cos(0.9) * 0.9 + std::sin(0.9)).epsilon(1e-13));
}

TEST_CASE("hinge and abs subgradients") {
    CHECK(max0(3.0) == 3.0);
    CHECK(max0(-2.0) == 0.0);
    CHECK(vabs(-2.0) == 2.0);
    CHECK(vabs(0.0) == 0.0);

    Tape t;
    Var a = ad::make_leaf(t, 1.5);
    Var b = ad::make_leaf(t, -1.5);
    Var y = max0(a) + max0(b) + vabs(b);
    auto adj = t.backward(y.i);
    CHECK(adj[a.i] == 1.0);  // active hinge
    CHECK(adj[b.i] == -1.0); // dead hinge contributes 0, |.| contributes -1
}

TEST_CASE("list_min ties resolve to the first index") {
    Tape t;
    Var a = ad::make_leaf(t, 1.0);
    Var b = ad::make_leaf(t, 1.0);
    Var c = ad::make_leaf(t, 2.0);
    Var m = list_min(std::vector<Var>{a, b, c});
    auto adj = t.backward(m.i);
    CHECK(adj[a.i] == 1.0);
    CHECK(adj[b.i] == 0.0);
    CHECK(adj[c.i] == 0.0);
}

TEST_CASE("first_bad reports the first non-finite node") {
    Tape t;
    Var x = ad::make_leaf(t, 0.0);
    CHECK(t.first_bad() == -1);
    Var bad = x / x; // 0/0
    Var after = bad + 1.0;
    (void)after;
    CHECK(t.first_bad() == bad.i);
}
