// SPDX-License-Identifier: Apache-2.0
#include "fdrsma/mlp.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace fdrsma {

Mlp::Mlp(int n_in, int n_hidden, int n_out, std::uint64_t seed)
    : n_in_(n_in), n_hidden_(n_hidden), n_out_(n_out) {
    if (n_in < 1 || n_hidden < 1 || n_out < 1) throw std::invalid_argument("Mlp: bad shape");
    size_t total = size_t(n_hidden) * n_in + n_hidden + size_t(n_hidden) * n_hidden + n_hidden +
                   size_t(n_out) * n_hidden + n_out;
    params_.assign(total, 0.0);
    std::mt19937_64 rng(seed);
    // The extra 0.1 keeps early increments small relative to the decision
    // variables; gradient inputs are not normalized, so O(1/sqrt(fan_in))
    // weights would produce steps orders of magnitude above the variable
    // scale before any training has happened.
    auto init_layer = [&](double* w, size_t n, int fan_in) {
        std::uniform_real_distribution<double> u(-0.1 / std::sqrt(double(fan_in)),
                                                 0.1 / std::sqrt(double(fan_in)));
        for (size_t i = 0; i < n; ++i) w[i] = u(rng);
    };
    init_layer(params_.data(), size_t(n_hidden) * n_in, n_in);
    init_layer(const_cast<double*>(w2()), size_t(n_hidden) * n_hidden, n_hidden);
    init_layer(const_cast<double*>(w3()), size_t(n_out) * n_hidden, n_hidden);
    // biases stay zero
}

namespace {

void affine(const double* w, const double* b, const double* x, int rows, int cols, double* out) {
    for (int r = 0; r < rows; ++r) {
        double acc = b[r];
        const double* wr = w + size_t(r) * cols;
        for (int c = 0; c < cols; ++c) acc += wr[c] * x[c];
        out[r] = acc;
    }
}

} // namespace

std::vector<double> Mlp::forward(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != n_in_) throw std::invalid_argument("Mlp::forward: shape");
    std::vector<double> h1(n_hidden_), h2(n_hidden_), out(n_out_);
    affine(w1(), b1(), x.data(), n_hidden_, n_in_, h1.data());
    for (auto& v : h1) v = v > 0.0 ? v : 0.0;
    affine(w2(), b2(), h1.data(), n_hidden_, n_hidden_, h2.data());
    for (auto& v : h2) v = v > 0.0 ? v : 0.0;
    affine(w3(), b3(), h2.data(), n_out_, n_hidden_, out.data());
    return out;
}

std::vector<double> Mlp::param_grads(const std::vector<double>& x,
                                     const std::vector<double>& upstream) const {
    if (static_cast<int>(x.size()) != n_in_ || static_cast<int>(upstream.size()) != n_out_)
        throw std::invalid_argument("Mlp::param_grads: shape");
    // forward with pre-activation caches
    std::vector<double> a1(n_hidden_), h1(n_hidden_), a2(n_hidden_), h2(n_hidden_);
    affine(w1(), b1(), x.data(), n_hidden_, n_in_, a1.data());
    for (int i = 0; i < n_hidden_; ++i) h1[i] = a1[i] > 0.0 ? a1[i] : 0.0;
    affine(w2(), b2(), h1.data(), n_hidden_, n_hidden_, a2.data());
    for (int i = 0; i < n_hidden_; ++i) h2[i] = a2[i] > 0.0 ? a2[i] : 0.0;

    std::vector<double> g(params_.size(), 0.0);
    double* gw1 = g.data();
    double* gb1 = gw1 + size_t(n_hidden_) * n_in_;
    double* gw2 = gb1 + n_hidden_;
    double* gb2 = gw2 + size_t(n_hidden_) * n_hidden_;
    double* gw3 = gb2 + n_hidden_;
    double* gb3 = gw3 + size_t(n_out_) * n_hidden_;

    // layer 3
    std::vector<double> d2(n_hidden_, 0.0);
    for (int r = 0; r < n_out_; ++r) {
        double u = upstream[r];
        gb3[r] = u;
        const double* w3r = w3() + size_t(r) * n_hidden_;
        double* gw3r = gw3 + size_t(r) * n_hidden_;
        for (int c = 0; c < n_hidden_; ++c) {
            gw3r[c] = u * h2[c];
            d2[c] += u * w3r[c];
        }
    }
    // layer 2
    std::vector<double> d1(n_hidden_, 0.0);
    for (int r = 0; r < n_hidden_; ++r) {
        double u = a2[r] > 0.0 ? d2[r] : 0.0;
        gb2[r] = u;
        const double* w2r = w2() + size_t(r) * n_hidden_;
        double* gw2r = gw2 + size_t(r) * n_hidden_;
        for (int c = 0; c < n_hidden_; ++c) {
            gw2r[c] = u * h1[c];
            d1[c] += u * w2r[c];
        }
    }
    // layer 1
    for (int r = 0; r < n_hidden_; ++r) {
        double u = a1[r] > 0.0 ? d1[r] : 0.0;
        gb1[r] = u;
        double* gw1r = gw1 + size_t(r) * n_in_;
        for (int c = 0; c < n_in_; ++c) gw1r[c] = u * x[c];
    }
    return g;
}

void AdamState::update(std::vector<double>& params, const std::vector<double>& grads) {
    if (params.size() != m.size() || grads.size() != m.size())
        throw std::invalid_argument("AdamState::update: shape");
    ++step;
    double bc1 = 1.0 - std::pow(beta1, double(step));
    double bc2 = 1.0 - std::pow(beta2, double(step));
    for (size_t i = 0; i < params.size(); ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * grads[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * grads[i] * grads[i];
        params[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
    }
}

} // namespace fdrsma
