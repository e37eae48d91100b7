#pragma once

// Test-only reference implementations, kept independent of the library code
// paths they are used to check.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

namespace oracles {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Matrix exponential by Taylor series with scaling and squaring; independent
// of the eigendecomposition route used by the library.
inline Matrix expm_taylor(const Matrix& a) {
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    double scale = 1.0;
    while (norm * scale > 0.25) {
        scale *= 0.5;
        ++squarings;
    }
    const int d = static_cast<int>(a.rows());
    Matrix term = Matrix::Identity(d, d);
    Matrix sum = term;
    const Matrix scaled = a * scale;
    for (int k = 1; k <= 30; ++k) {
        term = (term * scaled) / double(k);
        sum += term;
        if (term.cwiseAbs().maxCoeff() < 1e-18) break;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

inline Matrix ladder(int dim) {
    Matrix b = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) b(n - 1, n) = std::sqrt(double(n));
    return b;
}

inline Matrix displacement(cplx beta, int dim) {
    const Matrix b = ladder(dim);
    return expm_taylor(beta * b.adjoint() - std::conj(beta) * b);
}

inline Matrix thermal(double n_m, int dim) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(dim);
    if (n_m == 0.0) {
        p(0) = 1.0;
    } else {
        const double ratio = n_m / (n_m + 1.0);
        double w = 1.0 / (n_m + 1.0);
        for (int k = 0; k < dim; ++k, w *= ratio) p(k) = w;
        p /= p.sum();
    }
    return p.cast<cplx>().asDiagonal();
}

inline Matrix displaced_thermal(cplx beta, double n_m, int dim) {
    const Matrix d = displacement(beta, dim);
    return d * thermal(n_m, dim) * d.adjoint();
}

struct Moments {
    double mean;
    double variance;
};

inline Moments number_moments(const Matrix& rho) {
    double m = 0, s = 0;
    for (int k = 0; k < rho.rows(); ++k) {
        const double p = rho(k, k).real();
        m += k * p;
        s += double(k) * k * p;
    }
    return {m, s - m * m};
}

inline double mandel_q(const Matrix& rho) {
    const auto [m, v] = number_moments(rho);
    return v / m - 1.0;
}

// rho_c = P rho P^dag / tr with P = k_R b + k_B b^dag, by explicit matrices.
inline Matrix conditioned(const Matrix& rho, cplx k_R, cplx k_B) {
    const Matrix b = ladder(static_cast<int>(rho.rows()));
    const Matrix p = k_R * b + k_B * b.adjoint();
    Matrix num = p * rho * p.adjoint();
    return num / num.trace().real();
}

// Geometric-distribution moment sums (thermal state), no matrices involved.
inline double thermal_moment(double n_m, int power, int terms = 4000) {
    if (n_m == 0.0) return 0.0;
    const double ratio = n_m / (n_m + 1.0);
    double w = 1.0 / (n_m + 1.0), total = 0.0;
    for (int k = 0; k < terms; ++k, w *= ratio) total += std::pow(double(k), power) * w;
    return total;
}

// Bisection root finder for strictly monotone f on [lo, hi].
template <typename F>
double bisect(F f, double lo, double hi, double tol = 1e-14) {
    double flo = f(lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((flo <= 0.0) == (fm <= 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo < tol) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace oracles
