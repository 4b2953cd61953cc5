// Copyright 2026 The gsw Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "gsw/ansatz.hpp"
#include "gsw/dataset.hpp"
#include "gsw/hamiltonian.hpp"
#include "test_util.hpp"

namespace gsw {
namespace {

const MolecularDataset& h2() {
    static const MolecularDataset d = load_dataset(testing::data_path("h2_sto3g_rhf.qcd"));
    return d;
}

TEST(Pool, SpinConservingCounts) {
    const GatePool p2 = generate_pool(4, 2);
    EXPECT_EQ(p2.singles.size(), 2u);
    ASSERT_EQ(p2.doubles.size(), 1u);
    EXPECT_EQ(p2.doubles[0], ExcitationGate::dbl(0, 1, 2, 3));
    // 8 spin orbitals, 4 electrons: singles 2*2*2; doubles aa 1, bb 1, ab 4*4
    const GatePool p4 = generate_pool(8, 4);
    EXPECT_EQ(p4.singles.size(), 8u);
    EXPECT_EQ(p4.doubles.size(), 18u);
    for (const auto& g : p4.doubles) EXPECT_NO_THROW(check_gate(g, 8));
    EXPECT_TRUE(generate_pool(4, 0).doubles.empty());
}

TEST(Energy, GradientMatchesFiniteDifferences) {
    const PauliSum h = build_hamiltonian(h2().records[10]);
    const GatePool p = generate_pool(4, 2);
    Circuit c{4, p.doubles};
    c.gates.insert(c.gates.end(), p.singles.begin(), p.singles.end());
    const StateVector init = hartree_fock_state(4, 2);
    const RVec th{0.3, -0.2, 0.45};
    const EnergyEval e = energy_and_gradient(h, c, th, init);
    for (std::size_t a = 0; a < th.size(); ++a) {
        RVec p1 = th, m1 = th;
        p1[a] += 1e-5;
        m1[a] -= 1e-5;
        const double fd = (expectation(run_circuit(c, p1, init), h) - expectation(run_circuit(c, m1, init), h)) / 2e-5;
        EXPECT_NEAR(e.grad[a], fd, 1e-8);
    }
}

TEST(Selection, SinglesVanishAtHartreeFockForH2) {
    const PauliSum h = build_hamiltonian(h2().records[5]);
    const StateVector init = hartree_fock_state(4, 2);
    for (const auto& g : generate_pool(4, 2).singles) {
        EXPECT_NEAR(selection_gradient(h, Circuit{4, {}}, {}, init, g), 0.0, 1e-12);
    }
    EXPECT_GT(std::abs(selection_gradient(h, Circuit{4, {}}, {}, init, ExcitationGate::dbl(0, 1, 2, 3))), 1e-2);
}

TEST(Vqe, TraceNonIncreasingAndReachesGroundState) {
    for (std::size_t r : {0u, 13u, 40u}) {
        const auto& rec = h2().records[r];
        const PauliSum h = build_hamiltonian(rec);
        const Circuit c{4, {ExcitationGate::dbl(0, 1, 2, 3)}};
        const VqeResult v = vqe_minimize(h, c, {0.0}, hartree_fock_state(4, 2));
        EXPECT_TRUE(v.converged);
        for (std::size_t i = 1; i < v.energy_trace.size(); ++i) {
            EXPECT_LE(v.energy_trace[i], v.energy_trace[i - 1] + 1e-15);
        }
        const double e0 = exact_spectrum(h, 1, reference_sector(2)).eigenvalues[0];
        EXPECT_NEAR(v.energy_trace.back(), e0, 1e-8);
    }
}

TEST(Adapt, H2SelectsOneDoubleNoSingles) {
    std::vector<PauliSum> hs;
    for (const auto& R : default_anchors(h2())) hs.push_back(build_hamiltonian(h2().records[find_record(h2(), R)]));
    const AdaptReport rep = adapt_build(hs, 2);
    ASSERT_EQ(rep.merged.size(), 1u);
    EXPECT_EQ(rep.merged[0], ExcitationGate::dbl(0, 1, 2, 3));
    for (const auto& a : rep.anchors) {
        EXPECT_EQ(a.selected_doubles.size(), 1u);
        EXPECT_TRUE(a.selected_singles.empty());
        EXPECT_TRUE(a.vqe_converged);
    }
}

TEST(Adapt, HugeThresholdGivesEmptyAnsatz) {
    const AdaptReport rep = adapt_build({build_hamiltonian(h2().records[3])}, 2, 1e9);
    EXPECT_TRUE(rep.merged.empty());
    EXPECT_THROW(adapt_build({}, 2), Error);
}

TEST(Adapt, MergeKeepsFirstSeenOrder) {
    const MolecularDataset h4 = load_dataset(testing::data_path("h4_sto3g_uhf.qcd"));
    const auto anchors = default_anchors(h4);
    std::vector<PauliSum> hs;
    for (const auto& R : anchors) hs.push_back(build_hamiltonian(h4.records[find_record(h4, R)]));
    const AdaptReport rep = adapt_build(hs, 4);
    std::vector<ExcitationGate> expect;
    for (const auto& a : rep.anchors) {
        for (const auto* l : {&a.selected_doubles, &a.selected_singles}) {
            for (const auto& g : *l) {
                if (std::find(expect.begin(), expect.end(), g) == expect.end()) expect.push_back(g);
            }
        }
    }
    EXPECT_EQ(rep.merged, expect);
    for (const auto& a : rep.anchors) {
        for (std::size_t i = 0; i < a.double_gradients.size(); ++i) {
            const bool kept = std::find(a.selected_doubles.begin(), a.selected_doubles.end(),
                                        generate_pool(8, 4).doubles[i]) != a.selected_doubles.end();
            EXPECT_EQ(kept, std::abs(a.double_gradients[i]) >= kDefaultSelectTol);
        }
    }
}

TEST(Anchors, SpreadAndSnapped) {
    const auto a = default_anchors(h2(), 3);
    ASSERT_EQ(a.size(), 3u);
    for (const auto& R : a) EXPECT_GE(find_record(h2(), R), 0);
    EXPECT_EQ(a.front(), h2().records.front().params);
    EXPECT_EQ(a.back(), h2().records.back().params);
}

TEST(AnsatzJson, RoundTripAndBothShapes) {
    const std::vector<ExcitationGate> gates{ExcitationGate::dbl(0, 1, 2, 3), ExcitationGate::single(1, 3)};
    const json j = gates_to_json(gates);
    EXPECT_EQ(gates_from_json(j), gates);
    EXPECT_EQ(gates_from_json(json{{"gates", j}}), gates);
    EXPECT_THROW(gates_from_json(json::parse(R"([{"kind":"triple","wires":[0]}])")), Error);
    EXPECT_THROW(gates_from_json(json::parse(R"({"x":1})")), Error);
}

}  // namespace
}  // namespace gsw
