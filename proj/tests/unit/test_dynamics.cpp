#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>

#include "dlr/dynamics.hpp"
#include "dlr/errors.hpp"

using namespace dlr;

namespace {

Unitary4 expm_oracle(const Hamiltonian4& h, double t) {
  const Eigen::Matrix4cd gen = Complex(0.0, -kTwoPi * t) * h;
  return gen.exp();
}

Waveform constant(double j, double t_gate, double dt) {
  const auto n = static_cast<std::size_t>(std::llround(t_gate / dt)) + 1;
  return Waveform(std::vector<Complex>(n, j), t_gate / static_cast<double>(n - 1));
}

}  // namespace

TEST(Hamiltonian, ZeroCouplingIsDiagonalZeeman) {
  const auto h = hamiltonian(0.0, SystemParams{0.1, 0.0});
  Hamiltonian4 expected = Hamiltonian4::Zero();
  expected(1, 1) = -0.05;
  expected(2, 2) = 0.05;
  EXPECT_EQ(h, expected);
}

TEST(Hamiltonian, RealCouplingAndComplexHermitian) {
  const auto h = hamiltonian(0.02, SystemParams{0.1, 0.0});
  EXPECT_EQ(h(1, 2), Complex(0.01, 0.0));
  EXPECT_EQ(h(2, 1), Complex(0.01, 0.0));
  const auto hc = hamiltonian(Complex(0.02, -0.01), SystemParams{0.1, 0.3});
  EXPECT_LT((hc - hc.adjoint()).cwiseAbs().maxCoeff(), 1e-16);
  EXPECT_EQ(hc(0, 0), Complex(0.3, 0.0));
  EXPECT_EQ(hc(3, 3), Complex(-0.3, 0.0));
}

TEST(StepUnitary, ZeroHamiltonianIsIdentity) {
  EXPECT_EQ(step_unitary(Hamiltonian4::Zero(), 0.01), Unitary4::Identity());
}

TEST(StepUnitary, MatchesMatrixExponential) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const SystemParams p{0.5 * std::abs(u(rng)) + 0.01, u(rng)};
    const Complex j(u(rng), u(rng));
    const auto h = hamiltonian(j, p);
    const double dt = 0.5 * std::abs(u(rng)) + 1e-3;
    const auto step = step_unitary(h, dt);
    EXPECT_LT(max_norm_diff(step, expm_oracle(h, dt)), 1e-12);
    EXPECT_LT(unitarity_error(step), 1e-14);
  }
}

TEST(StepUnitary, RejectsOutOfBlockAndNonHermitian) {
  Hamiltonian4 h = hamiltonian(0.02, SystemParams{});
  h(0, 1) = 0.1;
  EXPECT_THROW(step_unitary(h, 0.01), InvalidParameter);
  Hamiltonian4 g = hamiltonian(0.02, SystemParams{});
  g(1, 2) = Complex(0.01, 0.01);
  EXPECT_THROW(step_unitary(g, 0.01), InvalidParameter);
  EXPECT_THROW(step_unitary(hamiltonian(0.0, SystemParams{}), 0.0), InvalidParameter);
}

TEST(ClosedForm, ConstantCouplingMatchesExponential) {
  for (double j : {0.0, 0.02, 0.1, 0.7}) {
    for (double t : {1.0, 17.3, 50.0}) {
      const SystemParams p{0.1, 0.0};
      EXPECT_LT(max_norm_diff(analytic_constant_j(j, 0.1, t), expm_oracle(hamiltonian(j, p), t)), 1e-11);
    }
  }
  const SystemParams lab{0.1, 1.7};
  EXPECT_LT(max_norm_diff(analytic_constant_j(0.03, 0.1, 9.0, 1.7), expm_oracle(hamiltonian(0.03, lab), 9.0)),
            1e-11);
}

TEST(ClosedForm, ZeroCouplingHasOnlyZeemanPhases) {
  const auto u = analytic_constant_j(0.0, 0.1, 10.0);
  EXPECT_NEAR(std::abs(u(1, 2)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u(1, 1) - std::polar(1.0, kPi * 0.1 * 10.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(u(2, 2) - std::polar(1.0, -kPi * 0.1 * 10.0)), 0.0, 1e-12);
}

TEST(ClosedForm, IntegerOscillationPeriodsAreDiagonal) {
  const double dez = 0.1;
  const double j = 0.05;
  const double f_osc = std::hypot(dez, j);
  for (int n : {1, 2, 5}) {
    const auto u = analytic_constant_j(j, dez, n / f_osc);
    EXPECT_LT(std::abs(u(1, 2)), 1e-12);
    EXPECT_LT(std::abs(u(2, 1)), 1e-12);
  }
}

TEST(ClosedForm, ResonantHalfPeriodSwapsPartially) {
  // J = dEz, t = 1/(2 f_osc): the exchange block is fully rotated.
  const double dez = 0.1;
  const double t = 0.5 / std::hypot(dez, dez);
  const auto u = analytic_constant_j(dez, dez, t);
  Eigen::Matrix2cd blk;
  blk << 0.5 * (-dez - dez), 0.5 * dez, 0.5 * dez, 0.5 * (dez - dez);
  const Eigen::Matrix2cd gen = Complex(0.0, -kTwoPi * t) * blk;
  const Eigen::Matrix2cd oracle = gen.exp();
  EXPECT_LT((u.block<2, 2>(1, 1) - oracle).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(std::abs(u(1, 2)), std::sqrt(0.5), 1e-12);
}

TEST(Propagate, ZeroWaveformIsZeemanOnly) {
  const Waveform zero(std::vector<Complex>(10001, 0.0), 1e-3);
  const auto u = propagate(zero, SystemParams{0.1, 0.0});
  EXPECT_LT(max_norm_diff(u, analytic_constant_j(0.0, 0.1, 10.0)), 1e-9);
}

TEST(Propagate, ConstantCouplingMatchesClosedFormRandomised) {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double j = 1e-3 + 0.999 * u01(rng);
    const double dez = 0.01 + 0.99 * u01(rng);
    const double t = 1.0 + 99.0 * u01(rng);
    const auto w = constant(j, t, 1e-3);
    const SystemParams p{dez, 0.0, w.dt()};
    const auto num = propagate(w, p);
    EXPECT_LT(max_norm_diff(num, analytic_constant_j(j, dez, w.duration())), 1e-7)
        << "J=" << j << " dEz=" << dez << " t=" << t;
  }
}

TEST(Propagate, BlockStructureExact) {
  const auto w = materialize(PulseSpec{Kaiser{}, 30.0, 0.03, DlrStatic{5.0}});
  const auto u = propagate(w, SystemParams{0.1, 0.4});
  constexpr int kOutside[][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 3}, {2, 3}};
  for (const auto& ij : kOutside) {
    EXPECT_EQ(u(ij[0], ij[1]), Complex(0.0, 0.0));
    EXPECT_EQ(u(ij[1], ij[0]), Complex(0.0, 0.0));
  }
}

TEST(Propagate, UnitaryOverMillionSteps) {
  const auto w = materialize(PulseSpec{RaisedCosine{}, 1000.0, 0.001, Plain{}});
  ASSERT_GE(w.size(), 1000001u);
  EXPECT_LT(unitarity_error(propagate(w, SystemParams{})), 1e-10);
}

TEST(Propagate, SecondOrderConvergence) {
  const auto spec = calibrate_amplitude(PulseSpec{RaisedCosine{}, 20.0, 1.0, Plain{}});
  const auto run = [&](double dt) {
    return propagate(materialize(spec, dt), SystemParams{0.1, 0.0, dt});
  };
  const auto u1 = run(0.04);
  const auto u2 = run(0.02);
  const auto u3 = run(0.01);
  const double ratio = max_norm_diff(u1, u2) / max_norm_diff(u2, u3);
  EXPECT_GT(ratio, 3.5);
  EXPECT_LT(ratio, 4.5);
}

TEST(Propagate, LeftEndpointRuleIsFirstOrder) {
  // The left-endpoint rule converges at O(dt), so its gap to the midpoint
  // rule halves with dt.
  const auto spec = calibrate_amplitude(PulseSpec{RaisedCosine{}, 20.0, 1.0, Plain{}});
  const auto gap = [&](double dt) {
    const auto w = materialize(spec, dt);
    const SystemParams p{0.1, 0.0, dt};
    return max_norm_diff(propagate(w, p, SampleRule::Midpoint), propagate(w, p, SampleRule::LeftEndpoint));
  };
  const double ratio = gap(0.02) / gap(0.01);
  EXPECT_GT(ratio, 1.8);
  EXPECT_LT(ratio, 2.2);
}

TEST(Propagate, LabFrameDiffersByCommonRotation) {
  const auto w = materialize(calibrate_amplitude(PulseSpec{Hamming{}, 25.0, 1.0, Plain{}}));
  const auto rot = propagate(w, SystemParams{0.1, 0.0});
  const auto lab = propagate(w, SystemParams{0.1, 2.3});
  const double t = w.duration();
  Unitary4 rf = Unitary4::Identity();
  rf(0, 0) = std::polar(1.0, -kTwoPi * 2.3 * t);
  rf(3, 3) = std::polar(1.0, kTwoPi * 2.3 * t);
  EXPECT_LT(max_norm_diff(lab, rf * rot), 1e-12);
}

TEST(Propagate, CoarserWaveformIsSubsampled) {
  const auto w = materialize(calibrate_amplitude(PulseSpec{RaisedCosine{}, 20.0, 1.0, Plain{}}), 0.002);
  const auto u = propagate(w, SystemParams{0.1, 0.0, 0.001});
  // Same result as an explicitly interpolated waveform at the finer step.
  std::vector<Complex> fine;
  for (std::size_t k = 0; k + 1 < w.size(); ++k) {
    fine.push_back(w[k]);
    fine.push_back(0.5 * (w[k] + w[k + 1]));
  }
  fine.push_back(w[w.size() - 1]);
  const auto v = propagate(Waveform(fine, 0.5 * w.dt()), SystemParams{0.1, 0.0, 0.5 * w.dt()});
  EXPECT_LT(max_norm_diff(u, v), 1e-12);
  EXPECT_THROW(propagate(w, SystemParams{0.1, 0.0, w.dt() / 1.5}), GridMismatch);
}

TEST(Propagate, RejectsBadSystem) {
  const Waveform w(std::vector<Complex>(11, 0.0), 0.1);
  EXPECT_THROW(propagate(w, SystemParams{0.0}), InvalidParameter);
  EXPECT_THROW(propagate(w, SystemParams{0.1, 0.0, 0.0}), InvalidParameter);
}
