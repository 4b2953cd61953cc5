// Copyright 2026 The gsw Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file neuralnet.hpp
 * @brief Feed-forward network nu(R; gamma) from geometry parameters to
 * circuit angles, with reverse-mode gradients and an Adam optimizer.
 *
 * Hidden layers use tanh, the output layer is linear. gamma is flat: for
 * each layer, the weight matrix (row-major, out x in) followed by the bias.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gsw/core.hpp"

namespace gsw {

class MLP {
public:
    MLP() = default;

    /// Xavier-uniform hidden weights, zero output layer, zero biases.
    MLP(std::vector<int> widths, std::uint64_t seed) : widths_(std::move(widths)) {
        if (widths_.size() < 2) throw Error("MLP: need input and output widths");
        for (int w : widths_) {
            if (w < 0) throw Error("MLP: negative width");
        }
        if (widths_.front() < 1) throw Error("MLP: input width must be positive");
        gamma_.assign(count_params(widths_), 0.0);
        shift_.assign(static_cast<std::size_t>(widths_.front()), 0.0);
        scale_.assign(static_cast<std::size_t>(widths_.front()), 1.0);
        std::mt19937_64 rng(seed);
        for (std::size_t l = 0; l + 2 < widths_.size(); ++l) {
            const int in = widths_[l], out = widths_[l + 1];
            const double lim = std::sqrt(6.0 / static_cast<double>(in + out));
            std::uniform_real_distribution<double> u(-lim, lim);
            double* W = gamma_.data() + offset(l);
            for (int i = 0; i < in * out; ++i) W[i] = u(rng);
        }
    }

    static std::size_t count_params(const std::vector<int>& widths) {
        std::size_t n = 0;
        for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
            n += static_cast<std::size_t>(widths[l + 1]) * static_cast<std::size_t>(widths[l] + 1);
        }
        return n;
    }

    [[nodiscard]] const std::vector<int>& widths() const { return widths_; }
    [[nodiscard]] std::size_t input_dim() const { return static_cast<std::size_t>(widths_.front()); }
    [[nodiscard]] std::size_t output_dim() const { return static_cast<std::size_t>(widths_.back()); }
    [[nodiscard]] std::size_t num_params() const { return gamma_.size(); }

    [[nodiscard]] const RVec& params() const { return gamma_; }
    RVec& params() { return gamma_; }
    void set_params(RVec g) {
        if (g.size() != gamma_.size()) throw Error("MLP: parameter count mismatch");
        gamma_ = std::move(g);
    }

    [[nodiscard]] const RVec& shift() const { return shift_; }
    [[nodiscard]] const RVec& scale() const { return scale_; }

    void set_normalization(RVec shift, RVec scale) {
        if (shift.size() != input_dim() || scale.size() != input_dim()) throw Error("MLP: normalization size mismatch");
        for (double s : scale) {
            if (!(s > 0.0) || !std::isfinite(s)) throw Error("MLP: normalization scale must be positive");
        }
        for (double s : shift) {
            if (!std::isfinite(s)) throw Error("MLP: normalization shift must be finite");
        }
        shift_ = std::move(shift);
        scale_ = std::move(scale);
    }

    /// Zero mean, unit variance over the given points (scale 1 for constant columns).
    void standardize(const std::vector<RVec>& points) {
        if (points.empty()) throw Error("MLP: no points to standardize over");
        const std::size_t d = input_dim();
        RVec mu(d, 0.0), sd(d, 0.0);
        for (const auto& p : points) {
            check_input(p);
            for (std::size_t k = 0; k < d; ++k) mu[k] += p[k];
        }
        for (auto& m : mu) m /= static_cast<double>(points.size());
        for (const auto& p : points) {
            for (std::size_t k = 0; k < d; ++k) sd[k] += (p[k] - mu[k]) * (p[k] - mu[k]);
        }
        for (auto& s : sd) {
            s = std::sqrt(s / static_cast<double>(points.size()));
            if (!(s > 1e-300)) s = 1.0;
        }
        set_normalization(std::move(mu), std::move(sd));
    }

    [[nodiscard]] RVec normalize(const RVec& R) const {
        check_input(R);
        RVec x(R.size());
        for (std::size_t k = 0; k < R.size(); ++k) x[k] = (R[k] - shift_[k]) / scale_[k];
        return x;
    }

    [[nodiscard]] RVec forward(const RVec& R) const {
        std::vector<RVec> acts;
        return forward_cached(R, acts);
    }

    /// upstream^T (d nu / d gamma).
    [[nodiscard]] RVec backward(const RVec& R, const RVec& upstream) const {
        if (upstream.size() != output_dim()) throw Error("MLP: upstream size mismatch");
        std::vector<RVec> acts;
        forward_cached(R, acts);
        RVec grad(gamma_.size(), 0.0);
        RVec delta = upstream;  // dL/d(pre-activation) of the current layer
        const std::size_t L = widths_.size() - 1;
        for (std::size_t l = L; l-- > 0;) {
            const int in = widths_[l], out = widths_[l + 1];
            const RVec& a_in = acts[l];
            double* gW = grad.data() + offset(l);
            double* gb = gW + static_cast<std::size_t>(in * out);
            for (int o = 0; o < out; ++o) {
                const double d = delta[static_cast<std::size_t>(o)];
                gb[o] = d;
                for (int i = 0; i < in; ++i) gW[o * in + i] = d * a_in[static_cast<std::size_t>(i)];
            }
            if (l == 0) break;
            const double* W = gamma_.data() + offset(l);
            RVec prev(static_cast<std::size_t>(in), 0.0);
            for (int o = 0; o < out; ++o) {
                const double d = delta[static_cast<std::size_t>(o)];
                for (int i = 0; i < in; ++i) prev[static_cast<std::size_t>(i)] += W[o * in + i] * d;
            }
            // a_in = tanh(z) for hidden layers
            for (int i = 0; i < in; ++i) {
                const double t = a_in[static_cast<std::size_t>(i)];
                prev[static_cast<std::size_t>(i)] *= 1.0 - t * t;
            }
            delta = std::move(prev);
        }
        return grad;
    }

    /// Rows d nu_a / d gamma for every output a.
    [[nodiscard]] std::vector<RVec> jacobian(const RVec& R) const {
        std::vector<RVec> rows(output_dim());
        RVec e(output_dim(), 0.0);
        for (std::size_t a = 0; a < output_dim(); ++a) {
            e[a] = 1.0;
            rows[a] = backward(R, e);
            e[a] = 0.0;
        }
        return rows;
    }

private:
    [[nodiscard]] std::size_t offset(std::size_t layer) const {
        std::size_t off = 0;
        for (std::size_t l = 0; l < layer; ++l) {
            off += static_cast<std::size_t>(widths_[l + 1]) * static_cast<std::size_t>(widths_[l] + 1);
        }
        return off;
    }

    void check_input(const RVec& R) const {
        if (R.size() != input_dim()) {
            throw Error("MLP: input has " + std::to_string(R.size()) + " values, expected " +
                        std::to_string(input_dim()));
        }
    }

    /// acts[l] is the input to layer l (normalized R for l = 0).
    RVec forward_cached(const RVec& R, std::vector<RVec>& acts) const {
        acts.clear();
        acts.push_back(normalize(R));
        const std::size_t L = widths_.size() - 1;
        for (std::size_t l = 0; l < L; ++l) {
            const int in = widths_[l], out = widths_[l + 1];
            const double* W = gamma_.data() + offset(l);
            const double* b = W + static_cast<std::size_t>(in * out);
            const RVec& x = acts.back();
            RVec y(static_cast<std::size_t>(out));
            for (int o = 0; o < out; ++o) {
                double z = b[o];
                for (int i = 0; i < in; ++i) z += W[o * in + i] * x[static_cast<std::size_t>(i)];
                y[static_cast<std::size_t>(o)] = (l + 1 < L) ? std::tanh(z) : z;
            }
            if (l + 1 == L) return y;
            acts.push_back(std::move(y));
        }
        return {};
    }

    std::vector<int> widths_;
    RVec gamma_;
    RVec shift_;
    RVec scale_;
};

struct AdamState {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long step = 0;
    RVec m;
    RVec v;
};

/// One bias-corrected Adam update of gamma in place.
inline void adam_step(AdamState& s, RVec& gamma, const RVec& grad) {
    if (grad.size() != gamma.size()) throw Error("adam_step: gradient size mismatch");
    for (std::size_t i = 0; i < grad.size(); ++i) {
        if (!std::isfinite(grad[i])) throw Error("adam_step: non-finite gradient at index " + std::to_string(i));
    }
    if (s.m.empty()) {
        s.m.assign(gamma.size(), 0.0);
        s.v.assign(gamma.size(), 0.0);
    }
    if (s.m.size() != gamma.size()) throw Error("adam_step: state size mismatch");
    ++s.step;
    const double c1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.step));
    const double c2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.step));
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        s.m[i] = s.beta1 * s.m[i] + (1.0 - s.beta1) * grad[i];
        s.v[i] = s.beta2 * s.v[i] + (1.0 - s.beta2) * grad[i] * grad[i];
        const double mh = s.m[i] / c1, vh = s.v[i] / c2;
        gamma[i] -= s.lr * mh / (std::sqrt(vh) + s.eps);
    }
}

}  // namespace gsw
