// Copyright 2026 The gsw Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gsw/neuralnet.hpp"
#include "test_util.hpp"

namespace gsw {
namespace {

MLP random_net(const std::vector<int>& widths, std::uint64_t seed) {
    MLP net(widths, seed);
    std::mt19937_64 rng(seed + 1);
    std::normal_distribution<double> nd(0.0, 0.6);
    RVec g = net.params();
    for (auto& x : g) x = nd(rng);
    net.set_params(g);
    return net;
}

TEST(MLP, ParameterCount) {
    EXPECT_EQ(MLP::count_params({1, 20, 20, 20, 1}), 20u * 2 + 20u * 21 * 2 + 21u);
    EXPECT_EQ(MLP({2, 3, 4}, 1).num_params(), 3u * 3 + 4u * 4);
}

TEST(MLP, FlatLayoutIsWeightsRowMajorThenBias) {
    MLP net({2, 2, 1}, 0);
    // layer 0: W = [[1, 2], [3, 4]], b = [0.1, -0.2]; layer 1: W = [0.5, -1], b = 0.25
    net.set_params({1, 2, 3, 4, 0.1, -0.2, 0.5, -1, 0.25});
    const RVec x{0.3, -0.7};
    const double h0 = std::tanh(1 * 0.3 + 2 * -0.7 + 0.1), h1 = std::tanh(3 * 0.3 + 4 * -0.7 - 0.2);
    EXPECT_NEAR(net.forward(x)[0], 0.5 * h0 - h1 + 0.25, 1e-15);
}

TEST(MLP, FreshNetworkOutputsZero) {
    MLP net({3, 8, 8, 5}, 42);
    for (double v : net.forward({0.1, 2.0, -1.0})) EXPECT_EQ(v, 0.0);
}

TEST(MLP, XavierBoundsAndSeedDeterminism) {
    MLP a({4, 6, 2}, 9), b({4, 6, 2}, 9), c({4, 6, 2}, 10);
    EXPECT_EQ(a.params(), b.params());
    EXPECT_NE(a.params(), c.params());
    const double lim = std::sqrt(6.0 / 10.0);
    for (std::size_t i = 0; i < 24; ++i) EXPECT_LE(std::abs(a.params()[i]), lim);
}

TEST(MLP, BackwardMatchesFiniteDifferences) {
    const MLP net = random_net({2, 5, 4, 3}, 3);
    const RVec R{0.4, -1.1}, up{0.3, -0.8, 1.7};
    const RVec g = net.backward(R, up);
    const double h = 1e-6;
    for (std::size_t k = 0; k < net.num_params(); ++k) {
        MLP p = net, m = net;
        p.params()[k] += h;
        m.params()[k] -= h;
        double fd = 0.0;
        const RVec yp = p.forward(R), ym = m.forward(R);
        for (std::size_t a = 0; a < up.size(); ++a) fd += up[a] * (yp[a] - ym[a]) / (2 * h);
        EXPECT_NEAR(g[k], fd, 1e-8 * std::max(1.0, std::abs(fd))) << "param " << k;
    }
}

TEST(MLP, JacobianRowsAreUnitBackward) {
    const MLP net = random_net({1, 4, 3}, 5);
    const auto rows = net.jacobian({0.7});
    ASSERT_EQ(rows.size(), 3u);
    for (std::size_t a = 0; a < 3; ++a) {
        RVec e(3, 0.0);
        e[a] = 1.0;
        EXPECT_EQ(rows[a], net.backward({0.7}, e));
    }
}

TEST(MLP, StandardizeGivesZeroMeanUnitVariance) {
    MLP net({2, 3, 1}, 1);
    const std::vector<RVec> pts{{1.0, 5.0}, {2.0, 5.0}, {4.0, 5.0}};
    net.standardize(pts);
    double s = 0.0, s2 = 0.0;
    for (const auto& p : pts) {
        const double x = net.normalize(p)[0];
        s += x;
        s2 += x * x;
    }
    EXPECT_NEAR(s / 3, 0.0, 1e-15);
    EXPECT_NEAR(s2 / 3, 1.0, 1e-14);
    EXPECT_EQ(net.scale()[1], 1.0);  // constant column
}

TEST(MLP, RejectsBadShapes) {
    EXPECT_THROW(MLP({3}, 0), Error);
    EXPECT_THROW(MLP({0, 2}, 0), Error);
    MLP net({2, 2}, 0);
    EXPECT_THROW(net.forward({1.0}), Error);
    EXPECT_THROW(net.set_params({1.0}), Error);
    EXPECT_THROW(net.set_normalization({0, 0}, {1, 0}), Error);
}

TEST(Adam, FirstStepHasLearningRateMagnitude) {
    AdamState s;
    RVec g{1.0, -2.0, 0.0};
    adam_step(s, g, {0.5, -3.0, 0.0});
    EXPECT_NEAR(g[0], 1.0 - 1e-3, 1e-10);
    EXPECT_NEAR(g[1], -2.0 + 1e-3, 1e-10);
    EXPECT_EQ(g[2], 0.0);
}

TEST(Adam, MinimizesQuadratic) {
    AdamState s;
    s.lr = 0.05;
    RVec x{3.0, -4.0};
    for (int i = 0; i < 3000; ++i) adam_step(s, x, {2 * (x[0] - 1.0), 2 * (x[1] + 0.5)});
    EXPECT_NEAR(x[0], 1.0, 1e-3);
    EXPECT_NEAR(x[1], -0.5, 1e-3);
}

TEST(Adam, RejectsNonFiniteGradient) {
    AdamState s;
    RVec x{1.0};
    EXPECT_THROW(adam_step(s, x, {std::nan("")}), Error);
    EXPECT_THROW(adam_step(s, x, {1.0, 2.0}), Error);
}

}  // namespace
}  // namespace gsw
