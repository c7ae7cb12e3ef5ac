#include "qion/dynamics.hpp"
#include "qion/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstring>
#include <iostream>
#include <stdexcept>

namespace qion::dynamics {

namespace {

using qcore::Complex;

// FNV-1a over the raw bytes of the defining scalars.
std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t seed) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t hash_double(double v, std::uint64_t seed) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    return fnv1a(&bits, sizeof(bits), seed);
}

void check_dim(const Propagator& prop, const Eigen::VectorXcd& psi) {
    if (psi.size() != prop.dim) {
        throw std::invalid_argument("dimension mismatch: state " + std::to_string(psi.size()) +
                                    " vs propagator " + std::to_string(prop.dim));
    }
}

} // namespace

std::uint64_t fingerprint(const hamiltonian::JointHamiltonian& h) {
    std::uint64_t v = 1469598103934665603ull;
    v = hash_double(h.params.q, v);
    v = hash_double(h.params.epsilon, v);
    v = hash_double(h.params.omega_bar, v);
    v = hash_double(h.params.delta_bar, v);
    const auto d = static_cast<double>(h.motional_dim);
    v = hash_double(d, v);
    const auto route = static_cast<double>(static_cast<int>(h.route));
    v = hash_double(route, v);
    return v;
}

Propagator spectral_propagator(const hamiltonian::JointHamiltonian& h) {
    const double herm = hamiltonian::hermiticity_residual(h);
    if (herm > 1e-12) {
        throw NumericalError("spectral_propagator: Hamiltonian not Hermitian, residual " +
                             std::to_string(herm));
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.mat);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("spectral_propagator: eigensolver failed to converge");
    }

    Propagator prop;
    prop.eigenvalues = solver.eigenvalues();
    prop.eigenvectors = solver.eigenvectors();
    prop.dim = static_cast<int>(h.mat.rows());
    prop.source_fingerprint = fingerprint(h);

    const Eigen::MatrixXcd recon = prop.eigenvectors *
                                   prop.eigenvalues.cast<Complex>().asDiagonal() *
                                   prop.eigenvectors.adjoint();
    const double scale = h.mat.cwiseAbs().maxCoeff();
    const double residual = (recon - h.mat).cwiseAbs().maxCoeff();
    if (residual > 1e-9 * std::max(scale, 1.0)) {
        throw NumericalError("spectral_propagator: reconstruction residual " +
                             std::to_string(residual) + " exceeds 1e-9 * " +
                             std::to_string(scale));
    }
    return prop;
}

Eigen::VectorXcd apply(const Propagator& prop, const Eigen::VectorXcd& psi, double t) {
    check_dim(prop, psi);
    Eigen::VectorXcd w = prop.eigenvectors.adjoint() * psi;
    for (int k = 0; k < prop.dim; ++k) {
        w(k) *= std::exp(Complex(0.0, -prop.eigenvalues(k) * t));
    }
    return prop.eigenvectors * w;
}

Trajectory evolve(const Propagator& prop, const qstates::JointState& psi0,
                  const std::vector<double>& times) {
    check_dim(prop, psi0.amps);
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1])) {
            throw std::invalid_argument("evolve: times must be strictly increasing");
        }
    }

    Trajectory traj;
    traj.motional_dim = psi0.motional_dim;
    traj.times = times;
    traj.states.reserve(times.size());

    // One basis change up front; each snapshot is then an independent product.
    const Eigen::VectorXcd w0 = prop.eigenvectors.adjoint() * psi0.amps;
    Eigen::VectorXcd w(prop.dim);
    for (double t : times) {
        for (int k = 0; k < prop.dim; ++k) {
            w(k) = w0(k) * std::exp(Complex(0.0, -prop.eigenvalues(k) * t));
        }
        traj.states.emplace_back(prop.eigenvectors * w);
    }
    return traj;
}

Trajectory rk4_reference(const hamiltonian::JointHamiltonian& h, const qstates::JointState& psi0,
                         double t_end, double dt, int record_every) {
    if (!(dt > 0.0)) throw std::invalid_argument("rk4_reference: dt must be > 0");
    if (t_end < 0.0) throw std::invalid_argument("rk4_reference: t_end must be >= 0");
    if (psi0.amps.size() != h.mat.rows()) {
        throw std::invalid_argument("rk4_reference: dimension mismatch");
    }

    // Induced infinity norm as a cheap upper bound on the spectral radius.
    double row_sum_max = 0.0;
    for (Eigen::Index i = 0; i < h.mat.rows(); ++i) {
        row_sum_max = std::max(row_sum_max, h.mat.row(i).cwiseAbs().sum());
    }
    if (row_sum_max * dt >= 0.1) {
        std::cerr << "rk4_reference: step-size warning, |H|*dt = " << row_sum_max * dt
                  << " >= 0.1; accuracy degrades\n";
    }

    const auto steps = static_cast<long>(std::llround(t_end / dt));
    if (record_every <= 0) {
        record_every = steps <= 1000 ? 1 : static_cast<int>((steps + 999) / 1000);
    }

    const Eigen::MatrixXcd hm = h.mat; // dense copy, row-major access pattern is fine
    const Complex mi(0.0, -1.0);

    Trajectory traj;
    traj.motional_dim = psi0.motional_dim;
    Eigen::VectorXcd psi = psi0.amps;
    traj.times.push_back(0.0);
    traj.states.push_back(psi);

    Eigen::VectorXcd k1(psi.size()), k2(psi.size()), k3(psi.size()), k4(psi.size());
    for (long s = 1; s <= steps; ++s) {
        k1.noalias() = hm * psi;
        k1 *= mi;
        k2.noalias() = hm * (psi + 0.5 * dt * k1);
        k2 *= mi;
        k3.noalias() = hm * (psi + 0.5 * dt * k2);
        k3 *= mi;
        k4.noalias() = hm * (psi + dt * k3);
        k4 *= mi;
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (s % record_every == 0 || s == steps) {
            traj.times.push_back(static_cast<double>(s) * dt);
            traj.states.push_back(psi);
        }
    }
    return traj;
}

} // namespace qion::dynamics
