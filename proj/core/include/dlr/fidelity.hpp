#pragma once

// CZ gate fidelity with virtual-Z phase calibration, and the analytic error
// model that relates the infidelity to the control spectrum.
//
// Conventions
// -----------
// Virtual Z gates are Z(theta) = diag(e^{i theta/2}, e^{-i theta/2}) and are
// applied after the simulated evolution: U_corr = Z1(theta1) Z2(theta2) U.
// With this convention the operator-based angles
//   theta1 = pi + arg U[00,00] - arg U[01,01]
//   theta2 = pi + arg U[11,11] - arg U[10,10]
// map an ideal adiabatic CPHASE(pi) onto CZ = diag(1, 1, 1, -1) exactly.
//
// The phase residuals of the analytic model are normalised so that each
// enters the infidelity with the weight the simulation actually shows:
//   delta_theta = (wrap[(theta2 - theta1) - 2 pi int f_osc]) / 2
//   delta_phi   = (wrap[(theta1 + theta2 - pi) - 4 pi E_z t_gate]) / 2
// delta_phi_j = pi - 2 pi int |J| is used as is.

#include <nlohmann/json.hpp>

#include "dlr/dynamics.hpp"
#include "dlr/waveforms.hpp"

namespace dlr {

enum class PhaseCalibration { Operator, FirstOrder };

struct PhaseAngles {
  double theta1 = 0.0;
  double theta2 = 0.0;
};

struct InfidelityTerms {
  double epsilon = 0.0;        // non-adiabatic leakage, phase-integral form
  double delta_phi_j = 0.0;    // exchange miscalibration (rad)
  double delta_phi = 0.0;      // rotating-frame miscalibration (rad)
  double delta_theta = 0.0;    // single-qubit phase residual (rad)
  double magnus2_delta = 0.0;  // second-order Magnus phase (rad)
};

struct FidelityReport {
  double fidelity = 0.0;
  InfidelityTerms terms;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double epsilon_simulated = 0.0;  // |<10|U|01>|^2 from the propagator
  double epsilon_spectral = 0.0;
  double analytic_infidelity = 0.0;

  double infidelity() const { return 1.0 - fidelity; }
};

/// Representative of an angle in (-pi, pi].
double wrap_angle(double angle);

/// CZ = diag(1, 1, 1, -1).
Unitary4 cz_gate();

/// Z(theta1) (x) Z(theta2).
Unitary4 virtual_z(double theta1, double theta2);

/// (|Tr(U_ideal^dagger U_sim)|^2 + d) / (d (d + 1)), d = 4. Raises
/// NonUnitaryInput if either argument deviates from unitarity by > 1e-8.
double avg_gate_fidelity(const Unitary4& u_ideal, const Unitary4& u_sim);

/// Angles read from the propagator's diagonal phases (rotating frame).
PhaseAngles calibrate_phases_operator(const Unitary4& u_sim);

/// Angles predicted from the adiabatic phase accumulation of the pulse:
///   theta1,2 = pi - pi int|J| -/+ pi int f_osc
/// evaluated by trapezoidal quadrature.
PhaseAngles calibrate_phases_first_order(const Waveform& w, double delta_ez);

/// |pi int J(t) exp(i 2 pi int_0^t f_osc) dt|^2.
double epsilon_phase_integral(const Waveform& w, double delta_ez);

/// pi^2 |S(-delta_ez)|^2.
double epsilon_spectral(const Waveform& w, double delta_ez);

/// Second-order Magnus phase correction
///   4 pi^2 Im int_0^T dt int_0^t dt' g(t) g(t') exp(-i 2 pi (a(t) - a(t')))
/// with g = -delta_ez J'(t) / (2 pi f_osc^2) and a(t) = int_0^t f_osc.
/// The nested trapezoidal sum is evaluated with a running inner integral.
/// Complex waveforms use |J|.
double magnus2_delta(const Waveform& w, double delta_ez);

InfidelityTerms infidelity_terms(const Waveform& w, const SystemParams& p, PhaseAngles angles);

/// (2/5) (eps + 2 dPhiJ^2 + dPhi^2 + dTheta^2), optionally with
/// dTheta replaced by (dTheta + delta/4). With the halved dTheta above,
/// delta/4 is the share of the Magnus phase that lands on each qubit.
double analytic_infidelity(const InfidelityTerms& terms, bool include_magnus2 = false);
double analytic_infidelity(const Waveform& w, const SystemParams& p, PhaseAngles angles,
                           bool include_magnus2 = false);

/// Propagates w, applies the chosen virtual-Z calibration and compares to CZ.
FidelityReport cz_fidelity(const Waveform& w, const SystemParams& p,
                           PhaseCalibration calibration = PhaseCalibration::Operator);

/// Same as cz_fidelity for an already propagated unitary.
FidelityReport cz_fidelity_from_unitary(const Unitary4& u, const Waveform& w, const SystemParams& p,
                                        PhaseCalibration calibration);

void to_json(nlohmann::json& j, const InfidelityTerms& t);
void to_json(nlohmann::json& j, const FidelityReport& r);

}  // namespace dlr
