#pragma once

// Reference computations for the tests. None of these reuse the closed forms
// or the reduction code under test.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using cplx = std::complex<double>;

// E(tau) from the roots of the characteristic equation l^2 + l + nR^2 = 0.
inline cplx roots_survival(int n, double r, double tau)
{
    const cplx disc = std::sqrt(cplx(1.0 - 4.0 * n * r * r, 0.0));
    if (std::abs(disc) < 1e-7) {
        return (1.0 + tau / 2.0) * std::exp(-tau / 2.0);
    }
    const cplx lp = (-1.0 + disc) / 2.0;
    const cplx lm = (-1.0 - disc) / 2.0;
    return (lp * std::exp(lm * tau) - lm * std::exp(lp * tau)) / (lp - lm);
}

// Qubit amplitudes after exact propagation of n qubits plus one damped
// pseudomode b:  a_i' = -i R b,  b' = -b - i R sum_j a_j.
inline std::vector<cplx> pseudomode_amplitudes(double r, const std::vector<cplx>& a0, double tau)
{
    const int n = static_cast<int>(a0.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    const cplx i_r(0.0, -r);
    for (int k = 0; k < n; ++k) {
        m(k, n) = i_r;
        m(n, k) = i_r;
    }
    m(n, n) = -1.0;
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n + 1);
    for (int k = 0; k < n; ++k) {
        x(k) = a0[static_cast<std::size_t>(k)];
    }
    const Eigen::MatrixXcd prop = (m * tau).exp();
    const Eigen::VectorXcd y = prop * x;
    return std::vector<cplx>(y.data(), y.data() + n);
}

// Initial amplitudes of the (s, phi) superposition on qubits 1 and 2.
inline std::vector<cplx> pair_initial(int n, double s, double phi)
{
    std::vector<cplx> a(static_cast<std::size_t>(n), 0.0);
    a[0] = std::sqrt((1.0 - s) / 2.0);
    a[1] = std::sqrt((1.0 + s) / 2.0) * std::exp(cplx(0.0, phi));
    return a;
}

inline std::vector<cplx> w_initial(int n)
{
    return std::vector<cplx>(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
}

// Reduced state of qubits a, b (1-based) from the full 2^n density matrix of
// |psi><psi| + (1 - |psi|^2)|0..0><0..0|, psi = sum_i amp_i |1_i>.
// Qubit 1 is the most significant bit; the output basis is {|11>,|10>,|01>,|00>}.
inline Eigen::Matrix4cd brute_force_pair(const std::vector<cplx>& amp, int a, int b)
{
    const int n = static_cast<int>(amp.size());
    const std::size_t dim = std::size_t{1} << n;
    auto bit_of = [n](int label) { return std::size_t{1} << (n - label); };

    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    double norm = 0.0;
    for (int k = 1; k <= n; ++k) {
        psi(static_cast<Eigen::Index>(bit_of(k))) = amp[static_cast<std::size_t>(k - 1)];
        norm += std::norm(amp[static_cast<std::size_t>(k - 1)]);
    }
    Eigen::MatrixXcd full = psi * psi.adjoint();
    full(0, 0) += 1.0 - norm;

    const std::size_t ma = bit_of(a);
    const std::size_t mb = bit_of(b);
    auto pair_index = [&](std::size_t x) {
        const int xa = (x & ma) ? 1 : 0;
        const int xb = (x & mb) ? 1 : 0;
        return 3 - (2 * xa + xb);
    };

    Eigen::Matrix4cd red = Eigen::Matrix4cd::Zero();
    for (std::size_t x = 0; x < dim; ++x) {
        for (std::size_t y = 0; y < dim; ++y) {
            if ((x & ~(ma | mb)) != (y & ~(ma | mb))) {
                continue;
            }
            red(pair_index(x), pair_index(y)) += full(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
        }
    }
    return red;
}

// Textbook Wootters: square roots of the eigenvalues of rho rho~, sorted.
inline double eigen_wootters(const Eigen::Matrix4cd& rho)
{
    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    const Eigen::Matrix4cd tilde = yy * rho.conjugate() * yy;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(rho * tilde);
    std::vector<double> l;
    for (int k = 0; k < 4; ++k) {
        l.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(k).real())));
    }
    std::sort(l.begin(), l.end(), std::greater<>());
    return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

} // namespace oracle
