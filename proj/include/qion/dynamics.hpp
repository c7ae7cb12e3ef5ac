// dynamics.hpp — unitary propagation of joint states under a fixed
// Hamiltonian: spectral decomposition as the primary route, classic RK4 as
// an independent cross-check oracle.

#pragma once

#include "qion/hamiltonian.hpp"
#include "qion/qstates.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace qion::dynamics {

/// Dense Hermitian eigendecomposition of a JointHamiltonian;
/// U(t) = V exp(-i E t) V^dag.
struct Propagator {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXcd eigenvectors;
    std::uint64_t source_fingerprint = 0;
    int dim = 0;
};

/// Snapshots of a joint state along a strictly increasing time grid
/// (times in 1/Omega).
struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXcd> states;
    int motional_dim = 0;
};

/// Stable hash of the Hamiltonian's defining parameters, recorded in the
/// propagator so downstream artifacts can name their source.
std::uint64_t fingerprint(const hamiltonian::JointHamiltonian& h);

/// Throws NumericalError if the eigensolver fails or the reconstruction
/// residual max-abs(V E V^dag - H) exceeds 1e-9 * max-abs(H).
Propagator spectral_propagator(const hamiltonian::JointHamiltonian& h);

/// U(t) psi for a single time.
Eigen::VectorXcd apply(const Propagator& prop, const Eigen::VectorXcd& psi, double t);

/// states[k] = U(times[k]) psi0.  times must be strictly increasing.
Trajectory evolve(const Propagator& prop, const qstates::JointState& psi0,
                  const std::vector<double>& times);

/// Classic fixed-step RK4 on i dpsi/dt = H psi, recording every
/// `record_every`-th step (0 = choose automatically so at most ~1000
/// snapshots are kept).  Warns on stderr when max-row-sum(H)*dt >= 0.1.
/// Cross-validation oracle only; the spectral route is the primary.
Trajectory rk4_reference(const hamiltonian::JointHamiltonian& h, const qstates::JointState& psi0,
                         double t_end, double dt, int record_every = 0);

} // namespace qion::dynamics
