// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace fdrsma {

/// Two-hidden-layer perceptron (rectifier hidden activations, identity
/// output) mapping a per-block loss gradient to an additive update step.
class Mlp {
public:
    Mlp() = default;
    Mlp(int n_in, int n_hidden, int n_out, std::uint64_t seed);

    std::vector<double> forward(const std::vector<double>& x) const;

    int n_in() const { return n_in_; }
    int n_out() const { return n_out_; }
    size_t n_params() const { return params_.size(); }
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    /// Exact backprop gradient of <upstream, forward(x)> with respect to the
    /// parameters, in params() order.
    std::vector<double> param_grads(const std::vector<double>& x,
                                    const std::vector<double>& upstream) const;

private:
    int n_in_ = 0, n_hidden_ = 0, n_out_ = 0;
    // layout: W1 (hidden x in), b1, W2 (hidden x hidden), b2, W3 (out x hidden), b3
    std::vector<double> params_;

    const double* w1() const { return params_.data(); }
    const double* b1() const { return w1() + size_t(n_hidden_) * n_in_; }
    const double* w2() const { return b1() + n_hidden_; }
    const double* b2() const { return w2() + size_t(n_hidden_) * n_hidden_; }
    const double* w3() const { return b2() + n_hidden_; }
    const double* b3() const { return w3() + size_t(n_out_) * n_hidden_; }
};

/// Bias-corrected Adam over a flat parameter vector; applied as a descent
/// step on the (to be minimized) averaged meta-loss.
struct AdamState {
    double lr = 1e-3;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    std::vector<double> m, v;
    std::int64_t step = 0;

    explicit AdamState(size_t n = 0, double lr_ = 1e-3) : lr(lr_), m(n, 0.0), v(n, 0.0) {}

    void update(std::vector<double>& params, const std::vector<double>& grads);
};

} // namespace fdrsma
