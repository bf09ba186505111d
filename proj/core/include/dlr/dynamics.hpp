#pragma once

// Two-qubit exchange Hamiltonian and its time evolution.
//
// Basis ordering is {|00>, |01>, |10>, |11>}. The Hamiltonian is block
// diagonal: |00> and |11> only pick up the common Zeeman phase E_z, while
// |01>, |10> form a 2x2 block driven by J. Evolution over dt is
// exp(-i 2 pi H dt) because H is expressed in cycle frequencies.

#include <Eigen/Dense>

#include "dlr/waveforms.hpp"

namespace dlr {

using Unitary4 = Eigen::Matrix4cd;
using Hamiltonian4 = Eigen::Matrix4cd;

struct SystemParams {
  double delta_ez = 0.1;  // f1 - f2 (GHz)
  double ez = 0.0;        // (f1 + f2)/2 (GHz); 0 is the rotating frame
  double dt_sim = kDefaultDt;
};

void validate(const SystemParams& p);

/// Which sample drives H over a step [t_k, t_k+1].
enum class SampleRule {
  Midpoint,       // (J_k + J_k+1)/2
  LeftEndpoint,   // J_k
  RightEndpoint,  // J_k+1, the stepping used in the original SPINE-style scheme
};

/// Exchange Hamiltonian. For complex J the diagonal uses |J| and the
/// coupling is conj(J)/2 above, J/2 below the diagonal.
Hamiltonian4 hamiltonian(Complex J, const SystemParams& p);

/// exp(-i 2 pi H dt) for a block-structured H, via the closed-form SU(2)
/// exponential of the middle block.
Unitary4 step_unitary(const Hamiltonian4& H, double dt);

/// Time-ordered product of step unitaries over the waveform grid. If the
/// waveform is coarser than p.dt_sim by an integer factor, each interval is
/// subdivided with linear interpolation.
Unitary4 propagate(const Waveform& w, const SystemParams& p,
                   SampleRule rule = SampleRule::Midpoint);

/// Exact evolution under constant real J for time t: the CPHASE diagonal
/// times the constant-J SWAP evolution written with two-qubit Paulis.
Unitary4 analytic_constant_j(double J, double delta_ez, double t, double ez = 0.0);

/// max |(U^dagger U - I)_ij|.
double unitarity_error(const Unitary4& u);

/// max |A_ij - B_ij|.
double max_norm_diff(const Unitary4& a, const Unitary4& b);

}  // namespace dlr
