#pragma once

#include <complex>
#include <string_view>
#include <vector>

namespace nqent {

using cplx = std::complex<double>;

// Coupling regime relative to the boundary R^2 = 1/(4n).
enum class Regime { Weak, Critical, Strong };

std::string_view to_string(Regime regime);

// Half-width of the band around R^2 = 1/(4n) classified as Critical.
inline constexpr double kCriticalTolerance = 1e-12;

// A complex frequency or rate, in units of the cavity decay rate.
struct ComplexRate {
    double re = 0.0;
    double im = 0.0;

    cplx value() const { return {re, im}; }
};

// n identical qubits resonantly coupled (rate g) to a cavity leaking at rate
// kappa. Everything is expressed in scaled time tau = kappa t, so kappa = 1
// and the coupling enters only through R = g / kappa.
class ModelParams {
public:
    ModelParams(int n, double ratio);

    int n() const { return n_; }
    double ratio() const { return ratio_; }
    // Qubit-cavity detuning; the model is solved on resonance only.
    static constexpr double detuning() { return 0.0; }

    // n R^2: the strength of the collective memory kernel at zero delay.
    double collective_rate() const { return n_ * ratio_ * ratio_; }

    Regime regime() const;

    // Omega_n = sqrt(1 - 4 n R^2); purely imaginary in the strong regime.
    ComplexRate omega() const;
    // Omega'_n = sqrt(4 n R^2 - 1); real in the strong regime.
    ComplexRate omega_prime() const;

private:
    int n_;
    double ratio_;
};

// Lorentzian spectral density J(omega) at offset omega - omega_c.
double spectral_density(const ModelParams& params, double omega);

// Memory kernel f(dt) = n R^2 exp(-dt) on resonance.
cplx correlation_kernel(const ModelParams& params, double dt);

// sinh(z)/z, with a short Taylor series near the origin.
cplx sinhc(cplx z);

// Exact survival amplitude E(tau) of the collective W excitation.
cplx survival_amplitude(const ModelParams& params, double tau);

// |E(tau)|^2.
double survival_probability(const ModelParams& params, double tau);

// Scaled times t_1 < ... < t_m_max at which E vanishes. Strong regime only.
std::vector<double> zero_crossings(const ModelParams& params, int m_max);

} // namespace nqent
