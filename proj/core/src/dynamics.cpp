#include "dlr/dynamics.hpp"

#include <cmath>

#include "dlr/errors.hpp"

namespace dlr {

namespace {

// Row-major 2x2 complex matrix on span{|01>, |10>}.
struct Block {
  Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

  Block operator*(const Block& r) const {
    return Block{a * r.a + b * r.c, a * r.b + b * r.d, c * r.a + d * r.c, c * r.b + d * r.d};
  }
};

// exp(-i 2 pi dt [c0 I + n . sigma]).
Block block_exponential(double c0, double nx, double ny, double nz, double dt) {
  const double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
  const double theta = kTwoPi * dt * norm;
  const double cos_t = std::cos(theta);
  // sin(theta)/|n| stays finite as |n| -> 0.
  const double sinc_t = norm > 0.0 ? std::sin(theta) / norm : kTwoPi * dt;
  const Complex global = std::polar(1.0, -kTwoPi * dt * c0);
  const Complex mi(0.0, -sinc_t);
  Block s;
  s.a = global * (cos_t + mi * nz);
  s.b = global * (mi * Complex(nx, -ny));
  s.c = global * (mi * Complex(nx, ny));
  s.d = global * (cos_t - mi * nz);
  return s;
}

Block step_block(Complex J, double delta_ez, double dt) {
  return block_exponential(-0.5 * std::abs(J), 0.5 * J.real(), 0.5 * J.imag(), -0.5 * delta_ez, dt);
}

Unitary4 assemble(const Block& blk, Complex u00, Complex u11) {
  Unitary4 u = Unitary4::Zero();
  u(0, 0) = u00;
  u(1, 1) = blk.a;
  u(1, 2) = blk.b;
  u(2, 1) = blk.c;
  u(2, 2) = blk.d;
  u(3, 3) = u11;
  return u;
}

Eigen::Matrix2cd pauli(char which) {
  Eigen::Matrix2cd m;
  switch (which) {
    case 'X':
      m << 0.0, 1.0, 1.0, 0.0;
      break;
    case 'Y':
      m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
      break;
    case 'Z':
      m << 1.0, 0.0, 0.0, -1.0;
      break;
    default:
      m = Eigen::Matrix2cd::Identity();
  }
  return m;
}

// P (x) Q with qubit 1 as the most significant bit.
Unitary4 kron(const Eigen::Matrix2cd& p, const Eigen::Matrix2cd& q) {
  Unitary4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = p(i, j) * q;
  return out;
}

Unitary4 two_qubit(char p, char q) { return kron(pauli(p), pauli(q)); }

}  // namespace

void validate(const SystemParams& p) {
  if (!(p.delta_ez > 0.0)) throw InvalidParameter("delta_ez must be positive");
  if (!(p.dt_sim > 0.0)) throw InvalidParameter("dt_sim must be positive");
  if (!std::isfinite(p.ez)) throw InvalidParameter("ez must be finite");
}

Hamiltonian4 hamiltonian(Complex J, const SystemParams& p) {
  const double mag = std::abs(J);
  Hamiltonian4 h = Hamiltonian4::Zero();
  h(0, 0) = p.ez;
  h(1, 1) = 0.5 * (-p.delta_ez - mag);
  h(1, 2) = 0.5 * std::conj(J);
  h(2, 1) = 0.5 * J;
  h(2, 2) = 0.5 * (p.delta_ez - mag);
  h(3, 3) = -p.ez;
  return h;
}

Unitary4 step_unitary(const Hamiltonian4& H, double dt) {
  if (!(dt > 0.0)) throw InvalidParameter("dt must be positive");
  constexpr int kOutside[][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 3}, {2, 3}};
  for (const auto& ij : kOutside) {
    if (H(ij[0], ij[1]) != 0.0 || H(ij[1], ij[0]) != 0.0) {
      throw InvalidParameter("Hamiltonian must be block diagonal in {00},{01,10},{11}");
    }
  }
  if (std::abs(H(1, 2) - std::conj(H(2, 1))) > 1e-12 * (1.0 + std::abs(H(1, 2)))) {
    throw InvalidParameter("Hamiltonian must be Hermitian");
  }
  const double h11 = H(1, 1).real();
  const double h22 = H(2, 2).real();
  const Complex lower = H(2, 1);
  const Block blk = block_exponential(0.5 * (h11 + h22), lower.real(), lower.imag(),
                                      0.5 * (h11 - h22), dt);
  return assemble(blk, std::polar(1.0, -kTwoPi * dt * H(0, 0).real()),
                  std::polar(1.0, -kTwoPi * dt * H(3, 3).real()));
}

Unitary4 propagate(const Waveform& w, const SystemParams& p, SampleRule rule) {
  validate(p);
  std::size_t substeps = 1;
  if (w.dt() > p.dt_sim * (1.0 + 1e-9)) {
    const double ratio = w.dt() / p.dt_sim;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-6 * ratio) {
      throw GridMismatch("waveform step is not an integer multiple of the simulation step");
    }
    substeps = static_cast<std::size_t>(rounded);
  }
  const auto& s = w.samples();
  const double h = w.dt() / static_cast<double>(substeps);
  const double offset = rule == SampleRule::Midpoint ? 0.5 : (rule == SampleRule::LeftEndpoint ? 0.0 : 1.0);

  Block acc;
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    const Complex j0 = s[k];
    const Complex j1 = s[k + 1];
    for (std::size_t m = 0; m < substeps; ++m) {
      const double frac = (static_cast<double>(m) + offset) / static_cast<double>(substeps);
      const Complex J = j0 + frac * (j1 - j0);
      acc = step_block(J, p.delta_ez, h) * acc;
    }
  }
  const double total = w.duration();
  return assemble(acc, std::polar(1.0, -kTwoPi * p.ez * total), std::polar(1.0, kTwoPi * p.ez * total));
}

Unitary4 analytic_constant_j(double J, double delta_ez, double t, double ez) {
  const double f_osc = std::hypot(delta_ez, J);
  const Unitary4 id = Unitary4::Identity();
  const Unitary4 zz = two_qubit('Z', 'Z');
  const Unitary4 iz_minus_zi = two_qubit('I', 'Z') - two_qubit('Z', 'I');
  const Unitary4 xx_plus_yy = two_qubit('X', 'X') + two_qubit('Y', 'Y');
  const double arg = kPi * f_osc * t;
  const Complex mi(0.0, -1.0);
  Unitary4 swap = 0.5 * (id + zz) + std::cos(arg) * 0.5 * (id - zz) +
                  mi * std::sin(arg) *
                      (delta_ez / (2.0 * f_osc) * iz_minus_zi + J / (2.0 * f_osc) * xx_plus_yy);
  Unitary4 cphase = Unitary4::Identity();
  cphase(1, 1) = std::polar(1.0, kPi * J * t);
  cphase(2, 2) = std::polar(1.0, kPi * J * t);
  Unitary4 rf = Unitary4::Identity();
  rf(0, 0) = std::polar(1.0, -kTwoPi * ez * t);
  rf(3, 3) = std::polar(1.0, kTwoPi * ez * t);
  return rf * cphase * swap;
}

double unitarity_error(const Unitary4& u) {
  return (u.adjoint() * u - Unitary4::Identity()).cwiseAbs().maxCoeff();
}

double max_norm_diff(const Unitary4& a, const Unitary4& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace dlr
