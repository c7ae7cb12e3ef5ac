#include "qion/observables.hpp"
#include "qion/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qion::observables {

namespace {

using qcore::Complex;

// Truncated overlap amplitudes <n|beta> for the chosen projector family.
// Ordinary: e^{-|b|^2/2} b^n / sqrt(n!).  q-deformed: b^n / sqrt([n]_q!)
// normalized by the q-exponential.
Eigen::VectorXcd overlap_vector(Complex beta, int dim, Projector projector, double q) {
    Eigen::VectorXcd v(dim);
    if (projector == Projector::coherent) {
        Complex c = std::exp(-0.5 * std::norm(beta));
        for (int n = 0; n < dim; ++n) {
            v(n) = c;
            c *= beta / std::sqrt(static_cast<double>(n + 1));
        }
    } else {
        const double norm = std::sqrt(qcore::q_exponential(std::norm(beta), q, 1e-16).value);
        Complex c = 1.0 / norm;
        for (int n = 0; n < dim; ++n) {
            v(n) = c;
            c *= beta / std::sqrt(qcore::q_number(static_cast<double>(n + 1), q));
        }
    }
    return v;
}

Eigen::VectorXd axis(double lo, double hi, int points) {
    if (points < 2) throw std::invalid_argument("husimi_q: grid needs at least 2 points per axis");
    if (!(hi > lo)) throw std::invalid_argument("husimi_q: grid extent must be positive");
    return Eigen::VectorXd::LinSpaced(points, lo, hi);
}

} // namespace

InversionSeries population_inversion(const dynamics::Trajectory& traj) {
    if (traj.states.empty()) throw std::invalid_argument("population_inversion: empty trajectory");
    const int d = traj.motional_dim;

    InversionSeries series;
    series.times = traj.times;
    series.w.reserve(traj.states.size());
    for (const auto& psi : traj.states) {
        const double pg = psi.head(d).squaredNorm();
        const double pe = psi.tail(d).squaredNorm();
        series.w.push_back(pe - pg);
    }
    return series;
}

Eigen::MatrixXcd reduced_motional_density(const qstates::JointState& state) {
    if (std::abs(state.amps.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("reduced_motional_density: state is not normalized");
    }
    const int d = state.motional_dim;
    const auto g = state.amps.head(d);
    const auto e = state.amps.tail(d);
    Eigen::MatrixXcd rho = g * g.adjoint();
    rho.noalias() += e * e.adjoint();
    return rho;
}

QGrid husimi_q(const Eigen::MatrixXcd& rho, const QGridSpec& spec, Projector projector, double q) {
    const int d = static_cast<int>(rho.rows());
    if (rho.rows() != rho.cols()) throw std::invalid_argument("husimi_q: rho must be square");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
        throw std::invalid_argument("husimi_q: rho must be Hermitian");
    }
    if (std::abs(rho.trace().real() - 1.0) > 1e-9) {
        throw std::invalid_argument("husimi_q: rho must have unit trace");
    }

    // rho from a pure joint state has rank <= 2; evaluating through its
    // eigenpairs makes each grid cell an O(D * rank) dot product and keeps
    // Q >= 0 exactly.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("husimi_q: eigensolver failed on rho");
    }
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -1e-10) {
        throw std::invalid_argument("husimi_q: rho has negative eigenvalue " +
                                    std::to_string(min_eig));
    }
    std::vector<int> keep;
    for (int k = 0; k < d; ++k) {
        if (solver.eigenvalues()(k) > 1e-14) keep.push_back(k);
    }

    QGrid grid;
    grid.re_axis = axis(spec.re_min, spec.re_max, spec.re_points);
    grid.im_axis = axis(spec.im_min, spec.im_max, spec.im_points);
    grid.values = Eigen::MatrixXd::Zero(spec.im_points, spec.re_points);

    for (int i = 0; i < spec.im_points; ++i) {
        for (int j = 0; j < spec.re_points; ++j) {
            const Complex beta(grid.re_axis(j), grid.im_axis(i));
            const Eigen::VectorXcd v = overlap_vector(beta, d, projector, q);
            double acc = 0.0;
            for (int k : keep) {
                const Complex ov = v.dot(solver.eigenvectors().col(k)); // conjugates v
                acc += solver.eigenvalues()(k) * std::norm(ov);
            }
            grid.values(i, j) = acc / std::numbers::pi;
        }
    }

    const double cell = (grid.re_axis(1) - grid.re_axis(0)) * (grid.im_axis(1) - grid.im_axis(0));
    grid.mass = grid.values.sum() * cell;
    grid.coarse_flag = std::abs(1.0 - grid.mass) > 0.02;
    return grid;
}

double mean_quanta(const qstates::JointState& state) {
    return mean_quanta(reduced_motional_density(state));
}

double mean_quanta(const Eigen::MatrixXcd& rho) {
    if (rho.rows() != rho.cols()) throw std::invalid_argument("mean_quanta: rho must be square");
    double acc = 0.0;
    for (int n = 0; n < rho.rows(); ++n) acc += n * rho(n, n).real();
    return acc;
}

} // namespace qion::observables
