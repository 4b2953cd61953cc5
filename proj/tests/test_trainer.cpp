// Copyright 2026 The gsw Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "gsw/trainer.hpp"
#include "model_util.hpp"
#include "test_util.hpp"

namespace gsw {
namespace {

const MolecularDataset& h2() {
    static const MolecularDataset d = load_dataset(testing::data_path("h2_sto3g_rhf.qcd"));
    return d;
}
const MolecularDataset& h3() {
    static const MolecularDataset d = load_dataset(testing::data_path("h3plus_sto3g_rhf.qcd"));
    return d;
}

const Circuit kH2Circuit{4, {ExcitationGate::dbl(0, 1, 2, 3)}};

TEST(TrainingSet, RejectsBadGeometries) {
    EXPECT_THROW(build_training_set(h2(), {}), Error);
    EXPECT_THROW(build_training_set(h2(), {{0.05}}), Error);
    EXPECT_THROW(build_training_set(h2(), {{0.0}, {0.0}}), Error);
    const TrainingSet t = build_training_set(h2(), {{0.0}, {1.5}});
    ASSERT_EQ(t.size(), 2u);
    EXPECT_NEAR(norm2(t.points[0].target), 1.0, 1e-12);
}

TEST(Cost, FreshModelIsHartreeFock) {
    const GenerativeModel m = make_model(kH2Circuit, 2, 1, {6, 6}, 1);
    const TrainingSet t = build_training_set(h2(), {{-0.3}, {1.0}, {3.5}});
    double s = 0.0;
    for (const auto& p : t.points) s += fidelity(p.target, m.init_state());
    EXPECT_NEAR(cost(m, t), 1.0 - s / 3.0, 1e-14);
}

void check_gradient(const MolecularDataset& d, const Circuit& c, const std::vector<RVec>& pts, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    GenerativeModel m = testing::random_model(c, d.n_electrons(), d.parameter_names.size(), {4, 3}, rng);
    const TrainingSet t = build_training_set(d, pts);
    const RVec g = cost_gradient(m, t);
    const RVec g0 = m.net.params();
    double gmax = 0.0;
    for (double x : g) gmax = std::max(gmax, std::abs(x));
    for (std::size_t k = 0; k < g0.size(); ++k) {
        const double h = 1e-5;
        RVec gp = g0, gm = g0;
        gp[k] += h;
        gm[k] -= h;
        m.net.set_params(gp);
        const double cp = cost(m, t);
        m.net.set_params(gm);
        const double cm = cost(m, t);
        m.net.set_params(g0);
        const double fd = (cp - cm) / (2 * h);
        EXPECT_LE(std::abs(g[k] - fd), 1e-6 * std::max(std::abs(fd), gmax)) << "k=" << k;
    }
}

TEST(Cost, GradientMatchesFiniteDifferencesH2) {
    for (std::uint64_t s = 0; s < 3; ++s) check_gradient(h2(), kH2Circuit, {{-0.2}, {0.8}, {2.5}}, s);
}

TEST(Cost, GradientMatchesFiniteDifferencesH3plus) {
    const Circuit c = testing::pool_circuit(h3());
    std::vector<RVec> pts{h3().records[0].params, h3().records[h3().records.size() / 2].params};
    for (std::uint64_t s = 10; s < 12; ++s) check_gradient(h3(), c, pts, s);
}

TEST(Train, DeterministicAndConverges) {
    const TrainingSet t = build_training_set(h2(), {{0.0}, {1.5}, {3.5}});
    const auto run = [&] {
        GenerativeModel m = make_model(kH2Circuit, 2, 1, {20, 20, 20}, 5);
        m.net.standardize({{0.0}, {1.5}, {3.5}});
        const TrainResult r = train(m, t, {});
        return std::make_pair(m, r);
    };
    const auto [m1, r1] = run();
    const auto [m2, r2] = run();
    EXPECT_EQ(m1.net.params(), m2.net.params());
    EXPECT_EQ(r1.trace, r2.trace);
    EXPECT_TRUE(r1.converged);
    EXPECT_LT(r1.trace.back(), 1e-6);
    double min_fid = 1.0;
    for (const auto& row : evaluate_pes(m1, h2())) min_fid = std::min(min_fid, row.fid_exact);
    EXPECT_GE(min_fid, 0.99);
}

TEST(Train, ZeroStepsLeavesHartreeFock) {
    GenerativeModel m = make_model(kH2Circuit, 2, 1, {5}, 2);
    const TrainingSet t = build_training_set(h2(), {{0.0}});
    const TrainResult r = train(m, t, {1e-3, 0, 1e-6});
    EXPECT_EQ(r.steps_taken, 0);
    ASSERT_EQ(r.trace.size(), 1u);
    for (const auto& row : evaluate_pes(m, h2())) {
        EXPECT_NEAR(row.fid_hf, 1.0, 1e-14);
        EXPECT_LE(row.e0, row.e_model + 1e-12);
        EXPECT_LE(row.e0, row.e1);
    }
    EXPECT_THROW(train(m, t, {std::nan(""), 10, 1e-6}), Error);
}

TEST(ModelJson, RoundTripIsExact) {
    std::mt19937_64 rng(3);
    GenerativeModel m = testing::random_model(kH2Circuit, 2, 1, {7, 3}, rng);
    m.net.set_normalization({0.25}, {1.7});
    m.ansatz_ref = "ansatz.json";
    const GenerativeModel r = model_from_json(json::parse(to_json_string(model_to_json(m))));
    EXPECT_EQ(r.net.params(), m.net.params());
    EXPECT_EQ(r.net.widths(), m.net.widths());
    EXPECT_EQ(r.circuit.gates, m.circuit.gates);
    EXPECT_EQ(r.net.forward({0.9}), m.net.forward({0.9}));
    EXPECT_EQ(r.ansatz_ref, "ansatz.json");
}

TEST(ModelJson, RejectsMalformedOrMismatched) {
    json j = model_to_json(make_model(kH2Circuit, 2, 1, {3}, 1));
    json bad = j;
    bad.erase("params");
    EXPECT_THROW(model_from_json(bad), Error);
    bad = j;
    bad["widths"] = {1, 3, 2};
    EXPECT_THROW(model_from_json(bad), Error);
    GenerativeModel m = make_model(kH2Circuit, 2, 1, {3}, 1);
    m.circuit.gates.push_back(ExcitationGate::single(0, 2));
    EXPECT_THROW(m.check(), Error);
}

}  // namespace
}  // namespace gsw
