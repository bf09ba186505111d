#include <gtest/gtest.h>

#include <cmath>

#include "dlr/errors.hpp"
#include "dlr/fidelity.hpp"
#include "dlr/shaping.hpp"
#include "dlr/spectral.hpp"

using namespace dlr;

namespace {

Waveform pi_pulse(const WindowKind& window, double t_gate, Shaping shaping = Plain{}) {
  return materialize(calibrate_amplitude(PulseSpec{window, t_gate, 1.0, shaping}));
}

Unitary4 diag4(Complex a, Complex b, Complex c, Complex d) {
  Unitary4 u = Unitary4::Zero();
  u(0, 0) = a;
  u(1, 1) = b;
  u(2, 2) = c;
  u(3, 3) = d;
  return u;
}

// Nested trapezoid in O(N^2) over the same integrand as magnus2_delta.
double magnus2_brute_force(const Waveform& w, double dez) {
  const std::size_t n = w.size();
  const double dt = w.dt();
  std::vector<double> alpha(n, 0.0);
  std::vector<double> f(n);
  for (std::size_t k = 0; k < n; ++k) f[k] = std::sqrt(dez * dez + std::norm(w[k]));
  for (std::size_t k = 1; k < n; ++k) alpha[k] = alpha[k - 1] + 0.5 * dt * (f[k - 1] + f[k]);
  std::vector<Complex> h(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 == n ? k : k + 1;
    const double jdot = (std::abs(w[hi]) - std::abs(w[lo])) / (static_cast<double>(hi - lo) * dt);
    h[k] = -dez * jdot / (2.0 * kPi * f[k] * f[k]) * std::polar(1.0, 2.0 * kPi * alpha[k]);
  }
  Complex outer = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    Complex inner = 0.0;
    for (std::size_t m = 1; m <= k; ++m) inner += 0.5 * dt * (h[m - 1] + h[m]);
    outer += ((k == 0 || k + 1 == n) ? 0.5 : 1.0) * std::conj(h[k]) * inner * dt;
  }
  return 4.0 * kPi * kPi * outer.imag();
}

}  // namespace

TEST(AverageFidelity, IdenticalAndGlobalPhase) {
  const auto cz = cz_gate();
  EXPECT_NEAR(avg_gate_fidelity(cz, cz), 1.0, 1e-15);
  EXPECT_NEAR(avg_gate_fidelity(cz, std::polar(1.0, 0.77) * cz), 1.0, 1e-12);
}

TEST(AverageFidelity, SignFlipGivesTwoFifths) {
  EXPECT_NEAR(avg_gate_fidelity(Unitary4::Identity(), cz_gate()), 0.4, 1e-15);
  const auto u = virtual_z(0.3, -1.1);
  EXPECT_NEAR(avg_gate_fidelity(cz_gate(), u), avg_gate_fidelity(u, cz_gate()), 1e-15);
}

TEST(AverageFidelity, RejectsNonUnitary) {
  Unitary4 bad = Unitary4::Identity();
  bad(0, 0) = 1.01;
  EXPECT_THROW(avg_gate_fidelity(cz_gate(), bad), NonUnitaryInput);
}

TEST(OperatorCalibration, IdentityGivesPi) {
  const auto a = calibrate_phases_operator(Unitary4::Identity());
  EXPECT_NEAR(a.theta1, kPi, 1e-15);
  EXPECT_NEAR(a.theta2, kPi, 1e-15);
}

TEST(OperatorCalibration, DiagonalPhases) {
  const double alpha = 0.4;
  const double beta = -0.9;
  const auto a = calibrate_phases_operator(diag4(1.0, std::polar(1.0, alpha), std::polar(1.0, beta), 1.0));
  EXPECT_NEAR(a.theta1, wrap_angle(kPi - alpha), 1e-14);
  EXPECT_NEAR(a.theta2, wrap_angle(kPi - beta), 1e-14);
}

TEST(OperatorCalibration, RecoversCzFromKnownPhases) {
  // Adiabatic CPHASE outputs keep U00 and U11 in phase, i.e. t1 + t2 = pi.
  for (double t1 : {kPi / 2, 0.3, -2.0}) {
    const double t2 = kPi - t1;
    const Unitary4 u = std::polar(1.0, 0.2) * virtual_z(t1, t2).adjoint() * cz_gate();
    const auto a = calibrate_phases_operator(u);
    EXPECT_NEAR(avg_gate_fidelity(cz_gate(), virtual_z(a.theta1, a.theta2) * u), 1.0, 1e-12);
  }
}

TEST(OperatorCalibration, FullSwapIsDegenerate) {
  Unitary4 swap = Unitary4::Zero();
  swap(0, 0) = 1.0;
  swap(1, 2) = 1.0;
  swap(2, 1) = 1.0;
  swap(3, 3) = 1.0;
  EXPECT_THROW(calibrate_phases_operator(swap), DegenerateDiagonal);
}

TEST(FirstOrderCalibration, ZeroCouplingMatchesOperator) {
  const Waveform zero(std::vector<Complex>(17001, 0.0), 1e-3);
  const auto fo = calibrate_phases_first_order(zero, 0.1);
  const auto op = calibrate_phases_operator(propagate(zero, SystemParams{}));
  EXPECT_NEAR(wrap_angle(fo.theta1 - op.theta1), 0.0, 1e-9);
  EXPECT_NEAR(wrap_angle(fo.theta2 - op.theta2), 0.0, 1e-9);
  EXPECT_NEAR(wrap_angle(fo.theta1 - (kPi - kPi * 0.1 * 17.0)), 0.0, 1e-9);
  EXPECT_NEAR(wrap_angle(fo.theta2 - (kPi + kPi * 0.1 * 17.0)), 0.0, 1e-9);
}

TEST(FirstOrderCalibration, ConstantCouplingClosedForm) {
  const double j = 0.013;
  const Waveform w(std::vector<Complex>(30001, j), 1e-3);
  const auto a = calibrate_phases_first_order(w, 0.1);
  const double swap = kPi * std::hypot(0.1, j) * 30.0;
  EXPECT_NEAR(a.theta1, wrap_angle(kPi - kPi * j * 30.0 - swap), 1e-10);
  EXPECT_NEAR(a.theta2, wrap_angle(kPi - kPi * j * 30.0 + swap), 1e-10);
}

TEST(CzFidelity, LongRaisedCosineIsAdiabatic) {
  const auto r = cz_fidelity(pi_pulse(RaisedCosine{}, 50.0), SystemParams{});
  EXPECT_GT(r.fidelity, 0.999);
  EXPECT_LE(r.fidelity, 1.0 + 1e-12);
}

TEST(CzFidelity, SynchronisedSquarePulse) {
  // J T = 1/2 and f_osc T = 3.
  const double dez = 0.1;
  const double t_gate = std::sqrt(9.0 - 0.25) / dez;
  const auto r = cz_fidelity(pi_pulse(Square{}, t_gate), SystemParams{dez});
  EXPECT_GE(r.fidelity, 0.99999);
  EXPECT_LT(r.epsilon_simulated, 1e-8);
}

TEST(CzFidelity, LabFrameMatchesRotatingFrame) {
  const auto w = pi_pulse(Hamming{}, 30.0);
  for (auto cal : {PhaseCalibration::Operator, PhaseCalibration::FirstOrder}) {
    const auto rot = cz_fidelity(w, SystemParams{0.1, 0.0}, cal);
    const auto lab = cz_fidelity(w, SystemParams{0.1, 1.3}, cal);
    EXPECT_NEAR(rot.fidelity, lab.fidelity, 1e-9);
    EXPECT_NEAR(lab.terms.delta_phi, rot.terms.delta_phi, 1e-9);
  }
}

TEST(CzFidelity, OperatorNeverWorseThanFirstOrder) {
  for (double t = 10.0; t <= 60.0; t += 2.5) {
    const auto w = pi_pulse(RaisedCosine{}, t);
    const double op = cz_fidelity(w, SystemParams{}, PhaseCalibration::Operator).fidelity;
    const double fo = cz_fidelity(w, SystemParams{}, PhaseCalibration::FirstOrder).fidelity;
    EXPECT_GE(op, fo - 1e-6) << t;
  }
}

TEST(CzFidelity, JsonCarriesAllFields) {
  const nlohmann::json j = cz_fidelity(pi_pulse(RaisedCosine{}, 30.0), SystemParams{});
  for (const char* key : {"fidelity", "infidelity", "infidelity_terms", "theta1", "theta2",
                          "epsilon_simulated", "epsilon_spectral", "analytic_infidelity"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_TRUE(j["infidelity_terms"].contains("magnus2_delta"));
}

TEST(PhaseIntegral, ZeroCouplingIsZero) {
  const Waveform zero(std::vector<Complex>(1001, 0.0), 1e-2);
  EXPECT_EQ(epsilon_phase_integral(zero, 0.1), 0.0);
  EXPECT_EQ(epsilon_spectral(zero, 0.1), 0.0);
}

TEST(PhaseIntegral, ConstantCouplingClosedForm) {
  const double j = 0.004;
  const double dez = 0.1;
  const double f = std::hypot(dez, j);
  for (double t_gate : {23.7, 41.0, 3.0 / f}) {
    const auto n = static_cast<std::size_t>(std::llround(t_gate / 1e-3));
    const Waveform w(std::vector<Complex>(n + 1, j), t_gate / static_cast<double>(n));
    const double expected = std::pow(kPi * j * std::sin(kPi * f * t_gate) / (kPi * f), 2);
    EXPECT_NEAR(epsilon_phase_integral(w, dez), expected, 1e-6 * std::pow(kPi * j / (kPi * f), 2)) << t_gate;
  }
}

TEST(PhaseIntegral, TracksSimulatedLeakage) {
  const auto w = pi_pulse(RaisedCosine{}, 50.0);
  const auto r = cz_fidelity(w, SystemParams{});
  EXPECT_NEAR(r.terms.epsilon / r.epsilon_simulated, 1.0, 0.25);
}

TEST(Spectral, NotchedPulseSuppressesLeakage) {
  const double rc = epsilon_spectral(pi_pulse(RaisedCosine{}, 45.0), 0.1);
  const double dlr = epsilon_spectral(pi_pulse(RaisedCosine{}, 45.0, DlrStatic{5.0}), 0.1);
  EXPECT_LE(dlr, 1e-6 * rc);
}

TEST(Spectral, AgreesWithPhaseIntegralOnSidelobes) {
  // 45 and 55 ns sit on sidelobe maxima; 50 ns is a spectral zero of the raised cosine.
  for (double t : {45.0, 55.0}) {
    const auto w = pi_pulse(RaisedCosine{}, t);
    EXPECT_NEAR(epsilon_spectral(w, 0.1) / epsilon_phase_integral(w, 0.1), 1.0, 0.2) << t;
  }
}

TEST(Spectral, WeakCouplingRegimeAcrossWindows) {
  // J_peak <= dEz / 20 needs long gates (the Kaiser window peaks highest).
  // Gate times sit on sidelobe maxima, away from spectral zeros.
  const std::pair<WindowKind, std::vector<double>> cases[] = {
      {RaisedCosine{}, {205.0, 215.0}}, {Hamming{}, {205.0, 215.0}}, {Kaiser{}, {360.0, 370.0}}};
  for (const auto& [win, gates] : cases) {
    for (double t : gates) {
      const auto w = materialize(calibrate_amplitude(PulseSpec{win, t, 1.0, Plain{}}), 0.01);
      double peak = 0.0;
      for (const auto& v : w.samples()) peak = std::max(peak, std::abs(v));
      ASSERT_LE(peak, 0.1 / 20.0) << window_name(win) << " " << t;
      const double ratio = epsilon_spectral(w, 0.1) / epsilon_phase_integral(w, 0.1);
      EXPECT_GE(ratio, 0.8) << window_name(win) << " " << t;
      EXPECT_LE(ratio, 1.25) << window_name(win) << " " << t;
    }
  }
}

TEST(Magnus, ConstantCouplingVanishes) {
  const Waveform w(std::vector<Complex>(5001, 0.01), 1e-2);
  EXPECT_EQ(magnus2_delta(w, 0.1), 0.0);
}

TEST(Magnus, MatchesBruteForceNestedQuadrature) {
  for (const auto& w : {materialize(calibrate_amplitude(PulseSpec{RaisedCosine{}, 20.0, 1.0, Plain{}}), 0.01),
                        materialize(calibrate_amplitude(PulseSpec{Kaiser{}, 12.0, 1.0, DlrStatic{3.0}}), 0.01)}) {
    const double fast = magnus2_delta(w, 0.1);
    const double slow = magnus2_brute_force(w, 0.1);
    EXPECT_NEAR(fast, slow, 1e-10 * std::abs(slow) + 1e-15);
  }
}

TEST(Magnus, TimeReversalInvariant) {
  const auto base = materialize(calibrate_amplitude(PulseSpec{RaisedCosine{}, 20.0, 1.0, Plain{}}), 0.005);
  std::vector<Complex> skew(base.size());
  for (std::size_t k = 0; k < base.size(); ++k) skew[k] = base[k] * (1.0 + 0.4 * k / double(base.size()));
  std::vector<Complex> rev(skew.rbegin(), skew.rend());
  const double a = magnus2_delta(Waveform(skew, base.dt()), 0.1);
  const double b = magnus2_delta(Waveform(rev, base.dt()), 0.1);
  EXPECT_NE(a, 0.0);
  EXPECT_NEAR(a, b, 1e-9 * std::abs(a));
}

TEST(Magnus, ConvergesWithStep) {
  const auto spec = calibrate_amplitude(PulseSpec{RaisedCosine{}, 20.0, 1.0, Plain{}});
  const double a = magnus2_delta(materialize(spec, 0.002), 0.1);
  const double b = magnus2_delta(materialize(spec, 0.001), 0.1);
  EXPECT_NEAR(a, b, 1e-4 * std::abs(b));
}

TEST(AnalyticModel, FormulaArithmetic) {
  InfidelityTerms t;
  t.epsilon = 3e-5;
  EXPECT_NEAR(analytic_infidelity(t), 0.4 * 3e-5, 1e-20);
  InfidelityTerms j;
  j.delta_phi_j = 0.01;
  EXPECT_NEAR(analytic_infidelity(j), 8e-5, 1e-18);
  InfidelityTerms m;
  m.delta_theta = 0.01;
  m.magnus2_delta = -0.04;
  EXPECT_NEAR(analytic_infidelity(m, true), 0.0, 1e-18);
  EXPECT_NEAR(analytic_infidelity(m, false), 0.4e-4, 1e-18);
}

TEST(AnalyticModel, FortyNanosecondPipelineWithinFactorTwo) {
  // delta_theta measures the applied angles against the first-order phase,
  // so the Magnus phase has to be included for either calibration.
  const auto w = pi_pulse(RaisedCosine{}, 40.0);
  for (auto cal : {PhaseCalibration::Operator, PhaseCalibration::FirstOrder}) {
    const auto r = cz_fidelity(w, SystemParams{}, cal);
    const double ratio = analytic_infidelity(r.terms, true) / r.infidelity();
    EXPECT_GT(ratio, 0.5);
    EXPECT_LT(ratio, 2.0);
  }
}

TEST(AnalyticModel, OperatorAnglesAbsorbMagnusPhase) {
  for (double t : {30.0, 40.0, 50.0}) {
    const auto r = cz_fidelity(pi_pulse(RaisedCosine{}, t), SystemParams{});
    EXPECT_NEAR(r.terms.delta_theta, -0.25 * r.terms.magnus2_delta, 0.02 * std::abs(r.terms.delta_theta)) << t;
  }
}

TEST(AnalyticModel, MagnusTermNarrowsShortGateGap) {
  const auto r = cz_fidelity(pi_pulse(RaisedCosine{}, 20.0), SystemParams{});
  const double sim = r.infidelity();
  EXPECT_LT(std::abs(analytic_infidelity(r.terms, true) - sim), std::abs(analytic_infidelity(r.terms) - sim));
}

TEST(WrapAngle, HalfOpenInterval) {
  EXPECT_NEAR(wrap_angle(kPi), kPi, 1e-15);
  EXPECT_NEAR(wrap_angle(-kPi), kPi, 1e-15);
  EXPECT_NEAR(wrap_angle(3.0 * kTwoPi + 0.25), 0.25, 1e-12);
}
