#include "phonoq/fock.hpp"

#include <cmath>

namespace phonoq::fock {

int required_dim(double beta_eff, double n_m, int n) {
    const double b = std::abs(beta_eff);
    return static_cast<int>(std::ceil(b * b + 8.0 * b + 12.0 * (n_m + 1.0) + n + 10.0));
}

int recommended_dim(double beta_eff, double n_m, int n) {
    const double b = std::abs(beta_eff);
    const double spread = b + 5.0 * std::sqrt(n_m + 0.5);
    const int widened = static_cast<int>(std::ceil(spread * spread)) + n + 15;
    return std::max(required_dim(beta_eff, n_m, n), widened);
}

OperatorMatrix ladder_matrix(FockDim dim) {
    Matrix b = Matrix::Zero(dim.dim, dim.dim);
    for (int n = 1; n < dim.dim; ++n) b(n - 1, n) = std::sqrt(static_cast<double>(n));
    return {std::move(b), OperatorKind::ladder};
}

OperatorMatrix number_operator(FockDim dim) {
    Matrix n = Matrix::Zero(dim.dim, dim.dim);
    for (int k = 0; k < dim.dim; ++k) n(k, k) = static_cast<double>(k);
    return {std::move(n), OperatorKind::number};
}

OperatorMatrix parity_operator(FockDim dim) {
    Matrix p = Matrix::Zero(dim.dim, dim.dim);
    for (int k = 0; k < dim.dim; ++k) p(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
    return {std::move(p), OperatorKind::parity};
}

OperatorMatrix displacement_operator(cplx beta, FockDim dim, const NumericPolicy& policy) {
    if (!std::isfinite(beta.real()) || !std::isfinite(beta.imag()))
        throw DomainError("displacement amplitude must be finite");
    const int need = required_dim(std::abs(beta));
    if (dim.dim < need)
        throw TruncationError("displacement operator for |beta| = " + std::to_string(std::abs(beta)) +
                                  " does not fit in dim " + std::to_string(dim.dim),
                              need);

    const Matrix b = ladder_matrix(dim).elements;
    // Generator A = beta b^dag - conj(beta) b is anti-Hermitian; H = -iA is
    // Hermitian, so exp(A) = V exp(i diag(w)) V^dag.
    Matrix H = -cplx(0, 1) * (beta * b.adjoint() - std::conj(beta) * b);
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    const Eigen::VectorXd w = es.eigenvalues();
    Eigen::VectorXcd phases(dim.dim);
    for (int k = 0; k < dim.dim; ++k) phases(k) = std::exp(cplx(0, w(k)));
    Matrix U = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();

    const double defect = (U.adjoint() * U - Matrix::Identity(dim.dim, dim.dim)).cwiseAbs().maxCoeff();
    if (defect > policy.unitarity_tol)
        throw TruncationError("displacement operator unitarity defect " + std::to_string(defect), need);
    return {std::move(U), OperatorKind::displacement};
}

DensityMatrix DensityMatrix::validated(Matrix rho, double trace_deficit, const NumericPolicy& policy) {
    const int d = static_cast<int>(rho.rows());
    if (d != rho.cols()) throw ShapeError("density matrix must be square");

    const double herm = (rho - rho.adjoint().eval()).cwiseAbs().maxCoeff();
    if (herm > policy.hermiticity_tol)
        throw DomainError("density matrix not Hermitian (defect " + std::to_string(herm) + ")");
    rho = 0.5 * (rho + rho.adjoint().eval());

    if (trace_deficit < 0.0) trace_deficit = 0.0;
    if (trace_deficit > policy.trace_deficit_max)
        throw TruncationError("trace deficit " + std::to_string(trace_deficit) + " above policy bound",
                              d + 1);

    const double tr = rho.trace().real();
    if (!(tr > 0.0)) throw DomainError("density matrix has non-positive trace");
    rho /= tr;

    if (policy.validate_positivity) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
        const double lo = es.eigenvalues().minCoeff();
        if (lo < policy.eigenvalue_floor)
            throw DomainError("density matrix has eigenvalue " + std::to_string(lo) +
                              " below the positivity floor");
    }
    return DensityMatrix{std::move(rho), trace_deficit};
}

namespace {

// Truncated geometric distribution; returns (diagonal, deficit before renorm).
std::pair<Eigen::VectorXd, double> thermal_diagonal(double n_m, int dim) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(dim);
    if (n_m == 0.0) {
        p(0) = 1.0;
        return {p, 0.0};
    }
    const double ratio = n_m / (n_m + 1.0);
    double w = 1.0 / (n_m + 1.0);
    double total = 0.0;
    for (int k = 0; k < dim; ++k) {
        p(k) = w;
        total += w;
        w *= ratio;
    }
    const double deficit = 1.0 - total;
    p /= total;
    return {p, deficit};
}

} // namespace

DensityMatrix prepare_state(StateKind kind, cplx beta, double n_m, int n, FockDim dim,
                            const NumericPolicy& policy) {
    if (n_m < 0.0 || !std::isfinite(n_m)) throw DomainError("thermal occupation n_m must be non-negative");
    if (n < 0) throw DomainError("Fock index n must be non-negative");
    if (!std::isfinite(beta.real()) || !std::isfinite(beta.imag()))
        throw DomainError("coherent amplitude must be finite");

    const bool displaced = kind == StateKind::coherent || kind == StateKind::displaced_thermal ||
                           kind == StateKind::displaced_fock;
    const double b = displaced ? std::abs(beta) : 0.0;
    const double nm_used = (kind == StateKind::thermal || kind == StateKind::displaced_thermal) ? n_m : 0.0;
    const int n_used = (kind == StateKind::fock || kind == StateKind::displaced_fock) ? n : 0;
    const int need = required_dim(b, nm_used, n_used);
    if (dim.dim < need)
        throw TruncationError("state does not fit in dim " + std::to_string(dim.dim), need);

    Matrix rho;
    double deficit = 0.0;
    switch (kind) {
        case StateKind::fock: {
            if (n >= dim.dim) throw TruncationError("Fock level outside truncated space", n + 1);
            rho = Matrix::Zero(dim.dim, dim.dim);
            rho(n, n) = 1.0;
            break;
        }
        case StateKind::thermal: {
            auto [p, def] = thermal_diagonal(n_m, dim.dim);
            rho = p.cast<cplx>().asDiagonal();
            deficit = def;
            break;
        }
        case StateKind::coherent:
        case StateKind::displaced_fock: {
            const int level = (kind == StateKind::coherent) ? 0 : n;
            if (level >= dim.dim) throw TruncationError("Fock level outside truncated space", level + 1);
            const Matrix D = displacement_operator(beta, dim, policy).elements;
            Eigen::VectorXcd psi = D.col(level);
            const double norm2 = psi.squaredNorm();
            deficit = 1.0 - norm2;
            rho = (psi * psi.adjoint()) / norm2;
            break;
        }
        case StateKind::displaced_thermal: {
            auto [p, def] = thermal_diagonal(n_m, dim.dim);
            const Matrix D = displacement_operator(beta, dim, policy).elements;
            rho = D * p.cast<cplx>().asDiagonal() * D.adjoint();
            deficit = def;
            break;
        }
    }
    return DensityMatrix::validated(std::move(rho), deficit, policy);
}

cplx expectation(const DensityMatrix& rho, const OperatorMatrix& op) {
    if (rho.dim() != op.dim()) throw ShapeError("expectation: dimension mismatch");
    // Tr[rho op] = sum_{ik} rho_ik op_ki
    return (rho.elements.transpose().cwiseProduct(op.elements)).sum();
}

Moments number_moments(const DensityMatrix& rho) {
    const int d = rho.dim();
    double mean = 0.0, second = 0.0;
    for (int k = 0; k < d; ++k) {
        const double p = rho.elements(k, k).real();
        mean += k * p;
        second += static_cast<double>(k) * k * p;
    }
    return {mean, second - mean * mean};
}

double purity(const DensityMatrix& rho) {
    return (rho.elements * rho.elements).trace().real();
}

double state_overlap(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) throw ShapeError("state_overlap: dimension mismatch");
    return (rho.elements.transpose().cwiseProduct(sigma.elements)).sum().real();
}

} // namespace phonoq::fock
