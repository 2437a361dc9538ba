#include "fitkit/qsa.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace fitkit::qsa {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

void validate(const StateTrajectory& traj) {
  if (traj.states.size() < 3) throw std::invalid_argument("trajectory needs at least 3 states");
  if (!(traj.dt > 0.0)) throw std::invalid_argument("trajectory dt must be positive");
  const auto dim = traj.states.front().size();
  if (dim < 2) throw std::invalid_argument("state dimension must be >= 2");
  for (const auto& s : traj.states) {
    if (s.size() != dim) throw std::invalid_argument("trajectory states differ in dimension");
    if (std::abs(s.norm() - 1.0) > 1e-9) throw std::invalid_argument("trajectory state is not normalised");
  }
}

State schrodinger_step(const State& psi, const Generator& omega, double dt) {
  if (omega.rows() != omega.cols() || omega.rows() != psi.size()) {
    throw std::invalid_argument("schrodinger_step: generator/state dimension mismatch");
  }
  if (dt < 0.0) throw std::invalid_argument("schrodinger_step: dt must be non-negative");
  if (dt == 0.0) return psi;
  State next = psi - kI * dt * (omega * psi);
  return next / next.norm();
}

StateTrajectory evolve(const State& psi0, const Generator& omega, double dt, std::size_t steps) {
  StateTrajectory traj;
  traj.dt = dt;
  traj.states.reserve(steps + 1);
  traj.states.push_back(psi0 / psi0.norm());
  for (std::size_t n = 0; n < steps; ++n) traj.states.push_back(schrodinger_step(traj.states.back(), omega, dt));
  return traj;
}

StateTrajectory evolve_exact_diagonal(const State& psi0, const Eigen::VectorXd& omegas, double dt, std::size_t steps) {
  if (omegas.size() != psi0.size()) throw std::invalid_argument("evolve_exact_diagonal: dimension mismatch");
  StateTrajectory traj;
  traj.dt = dt;
  traj.states.reserve(steps + 1);
  const State start = psi0 / psi0.norm();
  for (std::size_t n = 0; n <= steps; ++n) {
    const double t = static_cast<double>(n) * dt;
    State s(start.size());
    for (Eigen::Index k = 0; k < start.size(); ++k) s[k] = std::exp(-kI * omegas[k] * t) * start[k];
    traj.states.push_back(std::move(s));
  }
  return traj;
}

std::vector<State> centered_derivative(const StateTrajectory& traj) {
  validate(traj);
  std::vector<State> d;
  d.reserve(traj.states.size() - 2);
  for (std::size_t n = 1; n + 1 < traj.states.size(); ++n) {
    d.push_back((traj.states[n + 1] - traj.states[n - 1]) / (2.0 * traj.dt));
  }
  return d;
}

MonotoneEstimate qsa_monotone(const StateTrajectory& traj) {
  const auto deriv = centered_derivative(traj);
  MonotoneEstimate est;
  est.omega.reserve(deriv.size());
  est.residual.reserve(deriv.size());
  for (std::size_t k = 0; k < deriv.size(); ++k) {
    const State& psi = traj.states[k + 1];
    const std::complex<double> w = kI * psi.dot(deriv[k]) / psi.squaredNorm();
    est.omega.push_back(w.real());
    est.residual.push_back(w.imag());
  }
  return est;
}

std::vector<Generator> qsa_multitone(const StateTrajectory& traj) {
  const auto deriv = centered_derivative(traj);
  std::vector<Generator> out;
  out.reserve(deriv.size());
  for (std::size_t k = 0; k < deriv.size(); ++k) {
    const State& psi = traj.states[k + 1];
    // [|psi><psi|]^+ = |psi><psi| / <psi|psi>^2, so the product collapses to
    // |psi'><psi| / <psi|psi>.
    const double nn = psi.squaredNorm();
    const Generator projector_pinv = (psi * psi.adjoint()) / (nn * nn);
    out.push_back(kI * (deriv[k] * psi.adjoint()) * projector_pinv);
  }
  return out;
}

}  // namespace fitkit::qsa
