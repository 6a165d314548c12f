// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "fdrsma/mlp.hpp"

using namespace fdrsma;

TEST_CASE("mlp forward basics") {
    SUBCASE("zero parameters give zero output") {
        Mlp net(3, 4, 2, 1);
        for (auto& p : net.params()) p = 0.0;
        auto y = net.forward({1.0, -2.0, 3.0});
        REQUIRE(y.size() == 2);
        CHECK(y[0] == 0.0);
        CHECK(y[1] == 0.0);
    }

    SUBCASE("hand-built 1-1-1 network") {
        Mlp net(1, 1, 1, 1);
        // layout: W1, b1, W2, b2, W3, b3
        REQUIRE(net.n_params() == 6);
        net.params() = {2.0, 1.0, 3.0, -0.5, 0.5, 0.25};
        // x=1: h1 = relu(2*1+1) = 3; h2 = relu(3*3-0.5) = 8.5; y = 0.5*8.5+0.25
        CHECK(net.forward({1.0})[0] == doctest::Approx(4.5).epsilon(1e-14));
        // x=-1: h1 = relu(-1) = 0; h2 = relu(-0.5) = 0; y = 0.25
        CHECK(net.forward({-1.0})[0] == doctest::Approx(0.25).epsilon(1e-14));
    }

    SUBCASE("positive scaling commutes through bias-free rectifier layers") {
        Mlp net(2, 5, 2, 7);
        // zero all biases, keep the random weights
        size_t w1 = 5 * 2;
        for (size_t i = w1; i < w1 + 5; ++i) net.params()[i] = 0.0;
        size_t b2 = w1 + 5 + 5 * 5;
        for (size_t i = b2; i < b2 + 5; ++i) net.params()[i] = 0.0;
        size_t b3 = b2 + 5 + 2 * 5;
        for (size_t i = b3; i < b3 + 2; ++i) net.params()[i] = 0.0;
        auto y1 = net.forward({0.3, -0.8});
        auto y2 = net.forward({0.9, -2.4});
        CHECK(y2[0] == doctest::Approx(3.0 * y1[0]).epsilon(1e-12));
        CHECK(y2[1] == doctest::Approx(3.0 * y1[1]).epsilon(1e-12));
    }

    SUBCASE("construction is deterministic in the seed") {
        Mlp a(4, 8, 3, 42), b(4, 8, 3, 42), c(4, 8, 3, 43);
        CHECK(a.params() == b.params());
        CHECK(a.params() != c.params());
    }
}

TEST_CASE("param_grads match finite differences") {
    Mlp net(3, 6, 2, 5);
    std::vector<double> x = {0.4, -1.1, 0.7};
    std::vector<double> up = {1.3, -0.6};
    auto g = net.param_grads(x, up);
    REQUIRE(g.size() == net.n_params());

    auto loss = [&](const Mlp& m) {
        auto y = m.forward(x);
        return up[0] * y[0] + up[1] * y[1];
    };
    double h = 1e-6;
    for (size_t i = 0; i < net.n_params(); i += 7) { // sample every 7th parameter
        Mlp plus = net, minus = net;
        plus.params()[i] += h;
        minus.params()[i] -= h;
        double fd = (loss(plus) - loss(minus)) / (2.0 * h);
        CHECK(g[i] == doctest::Approx(fd).epsilon(1e-5));
    }

    SUBCASE("zero upstream gives zero gradient") {
        auto g0 = net.param_grads(x, {0.0, 0.0});
        for (double v : g0) CHECK(v == 0.0);
    }
}

TEST_CASE("adam optimizer") {
    SUBCASE("zero gradient leaves parameters unchanged") {
        AdamState opt(3, 0.01);
        std::vector<double> p = {1.0, -2.0, 0.5};
        auto p0 = p;
        opt.update(p, {0.0, 0.0, 0.0});
        CHECK(p == p0);
    }

    SUBCASE("first step closed form") {
        // after one update: m_hat = g, v_hat = g^2, so the step is
        // -lr * g / (|g| + eps)
        AdamState opt(2, 0.1);
        std::vector<double> p = {1.0, 1.0};
        std::vector<double> g = {0.5, -2.0};
        opt.update(p, g);
        for (int i = 0; i < 2; ++i) {
            double want = 1.0 - 0.1 * g[i] / (std::abs(g[i]) + opt.eps);
            CHECK(p[i] == doctest::Approx(want).epsilon(1e-12));
        }
    }

    SUBCASE("two-step recomputation") {
        AdamState opt(1, 0.05);
        std::vector<double> p = {0.3};
        opt.update(p, {1.5});
        opt.update(p, {-0.4});
        // replay the textbook recursion by hand
        double m = 0.0, v = 0.0, th = 0.3;
        double gs[2] = {1.5, -0.4};
        for (int t = 1; t <= 2; ++t) {
            double g = gs[t - 1];
            m = 0.9 * m + 0.1 * g;
            v = 0.999 * v + 0.001 * g * g;
            double mh = m / (1.0 - std::pow(0.9, t));
            double vh = v / (1.0 - std::pow(0.999, t));
            th -= 0.05 * mh / (std::sqrt(vh) + 1e-8);
        }
        CHECK(p[0] == doctest::Approx(th).epsilon(1e-12));
    }

    SUBCASE("descends a quadratic") {
        AdamState opt(1, 0.05);
        std::vector<double> p = {4.0};
        for (int it = 0; it < 400; ++it) opt.update(p, {2.0 * p[0]});
        CHECK(std::abs(p[0]) < 0.05);
    }
}
