#pragma once

#include <Eigen/Dense>
#include <vector>

namespace fitkit::qsa {

using State = Eigen::VectorXcd;
using Generator = Eigen::MatrixXcd;  // angular-frequency matrix, rad/s

// Sampled state trajectory |psi(t_n)>, t_n = n * dt.
struct StateTrajectory {
  std::vector<State> states;
  double dt = 0.0;
};

void validate(const StateTrajectory& traj);

// First-order step (I - i*Omega*dt) psi, renormalised to unit norm.
State schrodinger_step(const State& psi, const Generator& omega, double dt);

// Integrate `steps` first-order steps from psi0 with a constant generator.
StateTrajectory evolve(const State& psi0, const Generator& omega, double dt, std::size_t steps);

// Exact trajectory exp(-i*Omega*t) psi0 for a diagonal generator.
StateTrajectory evolve_exact_diagonal(const State& psi0, const Eigen::VectorXd& omegas, double dt, std::size_t steps);

// Centred finite difference (psi[n+1] - psi[n-1]) / (2 dt) at interior n.
// Element k corresponds to state k + 1.
std::vector<State> centered_derivative(const StateTrajectory& traj);

// Scalar estimate omega(t) = i <psi|psi'> / <psi|psi>, interior steps only.
struct MonotoneEstimate {
  std::vector<double> omega;     // real part, rad/s
  std::vector<double> residual;  // imaginary part, should vanish for unitary data
};
MonotoneEstimate qsa_monotone(const StateTrajectory& traj);

// Matrix estimate Omega(t) = i |psi'><psi| [|psi><psi|]^+ , interior steps only.
// The rank-1 pseudoinverse is evaluated in closed form.
std::vector<Generator> qsa_multitone(const StateTrajectory& traj);

}  // namespace fitkit::qsa
