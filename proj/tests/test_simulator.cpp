// Copyright 2026 The gsw Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "gsw/dataset.hpp"
#include "gsw/hamiltonian.hpp"
#include "gsw/simulator.hpp"
#include "test_util.hpp"

namespace gsw {
namespace {

using testing::Mat;

// Excitation operator from occupation-bit annihilator matrices.
Mat excitation_matrix(const ExcitationGate& g, int n) {
    const auto a = [n](int p) { return testing::annihilator(p, n); };
    const auto& w = g.wires;
    if (g.kind == ExcitationGate::Kind::Single) return a(w[1]).adjoint() * a(w[0]);
    return a(w[2]).adjoint() * a(w[3]).adjoint() * a(w[1]) * a(w[0]);
}

Mat gate_oracle(const ExcitationGate& g, double theta, int n) {
    const Mat E = excitation_matrix(g, n);
    const Mat G = cplx{0, 0.5} * (E - E.adjoint());
    return testing::expm_antihermitian(cplx{0, -theta} * G);
}

std::vector<ExcitationGate> all_gates(int n) {
    std::vector<ExcitationGate> out;
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            if (p != q && p % 2 == q % 2) out.push_back(ExcitationGate::single(p, q));
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (int a = 0; a < n; ++a) {
                for (int b = a + 1; b < n; ++b) {
                    const auto g = ExcitationGate::dbl(i, j, a, b);
                    if (a == i || a == j || b == i || b == j) continue;
                    if ((i % 2 == 0) + (j % 2 == 0) != (a % 2 == 0) + (b % 2 == 0)) continue;
                    out.push_back(g);
                }
            }
        }
    }
    return out;
}

TEST(Simulator, HartreeFockOccupation) {
    const auto s = hartree_fock_state(4, 2);
    EXPECT_EQ(s[0b0011], cplx(1.0));
    EXPECT_EQ(norm2(s), 1.0);
    EXPECT_EQ(hartree_fock_state(4, 0)[0], cplx(1.0));
    EXPECT_EQ(hartree_fock_state(6, 6)[63], cplx(1.0));
    EXPECT_THROW(hartree_fock_state(2, 3), Error);
}

TEST(Simulator, DoubleAtZeroIsIdentity) {
    std::mt19937_64 rng(1);
    const CVec v = testing::random_state(16, rng);
    EXPECT_EQ(apply_gate(v, ExcitationGate::dbl(0, 1, 2, 3), 0.0), v);
}

TEST(Simulator, DoubleHalfTurnMovesPair) {
    const auto out = apply_gate(hartree_fock_state(4, 2), ExcitationGate::dbl(0, 1, 2, 3), std::numbers::pi);
    EXPECT_NEAR(std::abs(out[0b1100]), 1.0, 1e-15);
    EXPECT_NEAR(out[0b1100].real(), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(out[0b0011]), 0.0, 1e-15);
}

TEST(Simulator, SingleCarriesParitySign) {
    // 0 -> 2 on |1100>: qubit 1 sits between the wires and is occupied
    const auto out = apply_gate(hartree_fock_state(4, 2), ExcitationGate::single(0, 2), std::numbers::pi / 2);
    const double r = std::sqrt(0.5);
    EXPECT_NEAR(out[0b0011].real(), r, 1e-15);
    EXPECT_NEAR(out[0b0110].real(), -r, 1e-15);
}

TEST(Simulator, GatesMatchMatrixExponential) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ang(-3.0, 3.0);
    for (int n : {4, 6}) {
        for (const auto& g : all_gates(n)) {
            const double th = ang(rng);
            const CVec v = testing::random_state(std::size_t{1} << n, rng);
            const CVec want = testing::to_vec(gate_oracle(g, th, n) * testing::to_mat(v));
            ASSERT_LT(testing::max_abs_diff(apply_gate(v, g, th), want), 1e-12) << to_string(g);
        }
    }
}

TEST(Simulator, GeneratorPauliFormMatchesAction) {
    std::mt19937_64 rng(8);
    for (const auto& g : all_gates(6)) {
        const PauliSum G = generator_pauli(g, 6);
        EXPECT_NEAR(G.one_norm(), 0.5, 1e-15);
        const CVec v = testing::random_state(64, rng);
        EXPECT_LT(testing::max_abs_diff(apply_pauli_sum(G, v), apply_generator(v, g)), 1e-14);
    }
}

TEST(Simulator, InvalidWiresRejected) {
    auto s = hartree_fock_state(4, 2);
    EXPECT_THROW(apply_gate(s, ExcitationGate::single(0, 4), 0.1), Error);
    EXPECT_THROW(apply_gate(s, ExcitationGate::single(0, 1), 0.1), Error);
    EXPECT_THROW(apply_gate(s, ExcitationGate::dbl(0, 0, 2, 3), 0.1), Error);
    EXPECT_THROW(apply_gate(s, {ExcitationGate::Kind::Double, {0, 1, 2}}, 0.1), Error);
}

TEST(Simulator, UnitarityAndNumberConservation) {
    std::mt19937_64 rng(9);
    const auto gates = all_gates(6);
    std::uniform_int_distribution<std::size_t> pick(0, gates.size() - 1);
    std::uniform_real_distribution<double> ang(-6.3, 6.3);
    for (int t = 0; t < 1000; ++t) {
        const CVec v = testing::random_state(64, rng);
        const CVec w = apply_gate(v, gates[pick(rng)], ang(rng));
        ASSERT_NEAR(norm2(w), 1.0, 1e-12);
        RVec wv(7, 0.0), ww(7, 0.0);
        for (std::size_t b = 0; b < 64; ++b) {
            wv[std::popcount(b)] += std::norm(v[b]);
            ww[std::popcount(b)] += std::norm(w[b]);
        }
        for (int k = 0; k < 7; ++k) ASSERT_NEAR(wv[k], ww[k], 1e-13);
    }
}

TEST(Simulator, RunCircuitMatchesMatrixProduct) {
    std::mt19937_64 rng(10);
    const auto gates = all_gates(4);
    std::uniform_int_distribution<std::size_t> pick(0, gates.size() - 1);
    std::uniform_real_distribution<double> ang(-3, 3);
    for (int t = 0; t < 20; ++t) {
        Circuit c{4, {gates[pick(rng)], gates[pick(rng)]}};
        const RVec th{ang(rng), ang(rng)};
        const CVec v = testing::random_state(16, rng);
        const Mat U = gate_oracle(c.gates[1], th[1], 4) * gate_oracle(c.gates[0], th[0], 4);
        EXPECT_LT(testing::max_abs_diff(run_circuit(c, th, v), testing::to_vec(U * testing::to_mat(v))), 1e-12);
    }
}

TEST(Simulator, TrivialCircuits) {
    const auto init = hartree_fock_state(4, 2);
    EXPECT_EQ(run_circuit(Circuit{4, {}}, {}, init), init);
    Circuit c{4, {ExcitationGate::dbl(0, 1, 2, 3), ExcitationGate::single(0, 2)}};
    EXPECT_EQ(run_circuit(c, {0.0, 0.0}, init), init);
    EXPECT_THROW(run_circuit(c, {0.0}, init), Error);
}

TEST(Simulator, ReverseCircuitUndoes) {
    std::mt19937_64 rng(12);
    const auto gates = all_gates(6);
    std::uniform_int_distribution<std::size_t> pick(0, gates.size() - 1);
    std::uniform_real_distribution<double> ang(-3, 3);
    Circuit c{6, {}}, r{6, {}};
    RVec th, rth;
    for (int k = 0; k < 12; ++k) {
        c.gates.push_back(gates[pick(rng)]);
        th.push_back(ang(rng));
    }
    for (std::size_t k = c.gates.size(); k-- > 0;) {
        r.gates.push_back(c.gates[k]);
        rth.push_back(-th[k]);
    }
    const CVec v = testing::random_state(64, rng);
    EXPECT_LT(testing::max_abs_diff(run_circuit(r, rth, run_circuit(c, th, v)), v), 1e-12);
}

Circuit random_circuit(int n, std::size_t len, std::mt19937_64& rng) {
    const auto gates = all_gates(n);
    std::uniform_int_distribution<std::size_t> pick(0, gates.size() - 1);
    Circuit c{n, {}};
    for (std::size_t k = 0; k < len; ++k) c.gates.push_back(gates[pick(rng)]);
    return c;
}

TEST(Simulator, JacobianSingleGateAtZero) {
    const Circuit c{4, {ExcitationGate::dbl(0, 1, 2, 3)}};
    const auto init = hartree_fock_state(4, 2);
    const auto J = state_jacobian(c, {0.0}, init);
    CVec want = apply_generator(init, c.gates[0]);
    for (auto& x : want) x *= cplx(0, -1);
    EXPECT_LT(testing::max_abs_diff(J[0], want), 1e-15);
}

TEST(Simulator, JacobianMatchesFiniteDifferences) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ang(-2, 2);
    const double h = 1e-5;
    for (int t = 0; t < 10; ++t) {
        const Circuit c = random_circuit(6, 8, rng);
        RVec th(8);
        for (auto& x : th) x = ang(rng);
        const CVec init = testing::random_state(64, rng);
        const auto J = state_jacobian(c, th, init);
        const CVec psi = run_circuit(c, th, init);
        for (std::size_t a = 0; a < th.size(); ++a) {
            RVec tp = th, tm = th;
            tp[a] += h;
            tm[a] -= h;
            const CVec fp = run_circuit(c, tp, init), fm = run_circuit(c, tm, init);
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < fp.size(); ++i) {
                num += std::norm((fp[i] - fm[i]) / (2 * h) - J[a][i]);
                den += std::norm(J[a][i]);
            }
            ASSERT_LE(std::sqrt(num), 1e-6 * std::max(std::sqrt(den), 1.0));
            // norm preservation: <psi|d psi> is purely imaginary
            EXPECT_LT(std::abs(inner(psi, J[a]).real()), 1e-13);
        }
    }
}

TEST(Simulator, AdjointOverlapsMatchFullJacobian) {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> ang(-2, 2);
    for (int t = 0; t < 10; ++t) {
        const Circuit c = random_circuit(6, 10, rng);
        RVec th(10);
        for (auto& x : th) x = ang(rng);
        const CVec init = testing::random_state(64, rng), bra = testing::random_state(64, rng);
        const auto J = state_jacobian(c, th, init);
        const CVec g = overlap_jacobian(c, th, init, bra);
        for (std::size_t a = 0; a < th.size(); ++a) EXPECT_LT(std::abs(g[a] - inner(bra, J[a])), 1e-13);
    }
}

TEST(Simulator, DressedGeneratorGivesDerivative) {
    std::mt19937_64 rng(15);
    const Circuit c = random_circuit(4, 5, rng);
    const RVec th{0.3, -0.7, 1.1, 0.2, -1.4};
    const CVec init = testing::random_state(16, rng);
    const CVec psi = run_circuit(c, th, init);
    const auto J = state_jacobian(c, th, init);
    for (std::size_t a = 0; a < th.size(); ++a) {
        CVec d = apply_dressed_generator(c, th, a, psi);
        for (auto& x : d) x *= cplx(0, -1);
        EXPECT_LT(testing::max_abs_diff(d, J[a]), 1e-13);
    }
}

TEST(Simulator, FidelityGradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(16);
    const Circuit c = random_circuit(6, 6, rng);
    const RVec th{0.4, -0.2, 1.0, 0.6, -0.9, 0.1};
    const CVec init = hartree_fock_state(6, 2);
    const CVec target = testing::random_state(64, rng);
    CVec psi;
    const CVec g = overlap_jacobian(c, th, init, target, &psi);
    const cplx o = inner(psi, target);
    for (std::size_t a = 0; a < th.size(); ++a) {
        const double an = 2.0 * std::real(o * g[a]);
        RVec tp = th, tm = th;
        tp[a] += 1e-5;
        tm[a] -= 1e-5;
        const double fd = (fidelity(target, run_circuit(c, tp, init)) - fidelity(target, run_circuit(c, tm, init))) / 2e-5;
        EXPECT_LE(std::abs(an - fd), 1e-6 * std::max(std::abs(fd), 1e-3));
    }
}

TEST(Simulator, OverlapAgreesWithHighPrecisionSum) {
    using big = boost::multiprecision::cpp_bin_float_50;
    std::mt19937_64 rng(17);
    for (int t = 0; t < 10; ++t) {
        const CVec a = testing::random_state(1024, rng), b = testing::random_state(1024, rng);
        big re = 0, im = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const big ar = a[i].real(), ai = a[i].imag(), br = b[i].real(), bi = b[i].imag();
            re += ar * br + ai * bi;
            im += ar * bi - ai * br;
        }
        const cplx o = overlap(a, b);
        EXPECT_LE(std::abs(o.real() - re.convert_to<double>()), 1e-14);
        EXPECT_LE(std::abs(o.imag() - im.convert_to<double>()), 1e-14);
    }
    EXPECT_NEAR(fidelity(basis_state(2, 1), basis_state(2, 1)), 1.0, 0.0);
    EXPECT_EQ(fidelity(basis_state(2, 1), basis_state(2, 2)), 0.0);
    EXPECT_THROW(overlap(basis_state(2, 0), basis_state(3, 0)), Error);
}

TEST(Simulator, Expectations) {
    EXPECT_EQ(expectation(basis_state(1, 0), PauliSum::from_string(1, "Z0")), 1.0);
    const CVec plus{std::sqrt(0.5), std::sqrt(0.5)};
    EXPECT_NEAR(expectation(plus, PauliSum::from_string(1, "Z0")), 0.0, 1e-16);
    EXPECT_THROW(expectation(plus, PauliSum::from_string(1, "X0", cplx(0, 1))), Error);
    const auto d = load_dataset(testing::data_path("h2_sto3g_rhf.qcd"));
    const auto& r = nearest_record(d, {0.0});
    EXPECT_NEAR(expectation(hartree_fock_state(4, 2), build_hamiltonian(r)), r.scf_energy, 1e-8);
}

}  // namespace
}  // namespace gsw
