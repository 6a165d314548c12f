// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <vector>

namespace fdrsma {

/// Complex value over a generic real scalar (double or ad::Var). All complex
/// arithmetic lowers to real-pair operations so the tape sees only real
/// primitives.
template <class S>
struct Cx {
    S re, im;
};

template <class S>
Cx<S> operator+(const Cx<S>& a, const Cx<S>& b) {
    return {a.re + b.re, a.im + b.im};
}

template <class S>
Cx<S> operator-(const Cx<S>& a, const Cx<S>& b) {
    return {a.re - b.re, a.im - b.im};
}

template <class S>
Cx<S> operator*(const Cx<S>& a, const Cx<S>& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

template <class S>
Cx<S> operator*(const Cx<S>& a, const std::complex<double>& b) {
    return {a.re * b.real() - a.im * b.imag(), a.re * b.imag() + a.im * b.real()};
}

template <class S>
Cx<S> operator*(const Cx<S>& a, double b) {
    return {a.re * b, a.im * b};
}

template <class S>
Cx<S> conj(const Cx<S>& a) {
    return {a.re, -a.im};
}

template <class S>
S abs2(const Cx<S>& a) {
    return a.re * a.re + a.im * a.im;
}

/// e^{j phase}
template <class S>
Cx<S> expj(const S& phase) {
    using std::cos;
    using std::sin;
    return {cos(phase), sin(phase)};
}

/// a^H b over equal-length vectors.
template <class S>
Cx<S> hdot(const std::vector<Cx<S>>& a, const std::vector<Cx<S>>& b) {
    Cx<S> acc = conj(a[0]) * b[0];
    for (size_t i = 1; i < a.size(); ++i) acc = acc + conj(a[i]) * b[i];
    return acc;
}

template <class S>
S norm2(const std::vector<Cx<S>>& a) {
    S acc = abs2(a[0]);
    for (size_t i = 1; i < a.size(); ++i) acc = acc + abs2(a[i]);
    return acc;
}

/// 2-D position / offset over a generic scalar.
template <class S>
struct Vec2 {
    S x, y;
};

} // namespace fdrsma
