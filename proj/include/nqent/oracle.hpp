#pragma once

#include <cstddef>
#include <vector>

#include "nqent/model.hpp"

namespace nqent {

// Uniformly sampled complex amplitude, tau[k] = k * tau_max / steps.
struct AmplitudeSeries {
    std::vector<double> tau;
    std::vector<cplx> value;
};

// State of the memory equation written as a first-order system:
// e_amp = E(tau), y_aux = integral_0^tau exp(-(tau - s)) E(s) ds.
struct OdeState {
    cplx e_amp{1.0, 0.0};
    cplx y_aux{0.0, 0.0};
};

// Smallest step count accepted by solve_memory_ode for this horizon. It
// resolves both the cavity time and the vacuum Rabi period 1/(2 sqrt(n) R).
std::size_t min_memory_ode_steps(const ModelParams& params, double tau_max);

// Integrates E' = -n R^2 y, y' = E - y with classical fixed-step RK4.
// Returns steps + 1 samples. Throws ValidationError below the minimum step count.
AmplitudeSeries solve_memory_ode(const ModelParams& params, double tau_max, std::size_t steps);

// A finite set of continuum modes standing in for the Lorentzian environment.
// weight[j] is |alpha(omega_j)| sqrt(d_omega); the collective coupling
// sqrt(n) g is applied by the solver.
struct BathDiscretization {
    std::vector<double> omega;
    std::vector<double> weight;
    double omega_min = 0.0;
    double omega_max = 0.0;

    std::size_t n_modes() const { return omega.size(); }
    // Sum of squared weights: the share of the unit Lorentzian mass represented.
    double captured_mass() const;
};

inline constexpr std::size_t kMinBathModes = 200;
inline constexpr double kMinCapturedMass = 0.98;
inline constexpr double kDefaultBathHalfWidth = 40.0;
inline constexpr std::size_t kDefaultBathModes = 2000;

// Uniform midpoint grid on [-half_width, half_width] around the cavity line.
BathDiscretization lorentzian_bath(std::size_t n_modes = kDefaultBathModes,
                                   double half_width = kDefaultBathHalfWidth);

struct BathEvolution {
    AmplitudeSeries survival;
    // Total single-excitation probability at each sample.
    std::vector<double> norm;
};

// Evolves the bright collective excitation coupled to the discretized bath.
// The propagator is a fourth-order composition of Strang splittings, each
// factor exactly unitary, so the norm is conserved to rounding.
BathEvolution solve_discretized_bath(const ModelParams& params, const BathDiscretization& bath,
                                     double tau_max, std::size_t steps);

} // namespace nqent
