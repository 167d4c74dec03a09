#include "nqent/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "nqent/errors.hpp"

namespace nqent {

namespace {

void require_horizon(double tau_max, std::size_t steps)
{
    if (!std::isfinite(tau_max) || tau_max <= 0.0) {
        throw ValidationError("tau_max must be finite and > 0");
    }
    if (steps < 1) {
        throw ValidationError("step count must be >= 1");
    }
}

// Largest product (step * frequency) accepted by the split-step propagator.
constexpr double kMaxSplitPhase = 0.5;

} // namespace

std::size_t min_memory_ode_steps(const ModelParams& params, double tau_max)
{
    const double rabi_time = 1.0 / (2.0 * std::sqrt(static_cast<double>(params.n())) * params.ratio());
    const double resolve = std::min(1.0, rabi_time);
    return static_cast<std::size_t>(std::ceil(10.0 * tau_max / resolve));
}

AmplitudeSeries solve_memory_ode(const ModelParams& params, double tau_max, std::size_t steps)
{
    require_horizon(tau_max, steps);
    const std::size_t needed = min_memory_ode_steps(params, tau_max);
    if (steps < needed) {
        std::ostringstream msg;
        msg << "memory ODE needs at least " << needed << " steps for tau_max = " << tau_max
            << " (got " << steps << ")";
        throw ValidationError(msg.str());
    }

    const double rate = params.collective_rate();
    const double h = tau_max / static_cast<double>(steps);

    auto deriv = [rate](const OdeState& s) {
        return OdeState{-rate * s.y_aux, s.e_amp - s.y_aux};
    };
    auto axpy = [](const OdeState& s, double a, const OdeState& d) {
        return OdeState{s.e_amp + a * d.e_amp, s.y_aux + a * d.y_aux};
    };

    AmplitudeSeries out;
    out.tau.reserve(steps + 1);
    out.value.reserve(steps + 1);

    OdeState state;
    out.tau.push_back(0.0);
    out.value.push_back(state.e_amp);
    for (std::size_t k = 1; k <= steps; ++k) {
        const OdeState k1 = deriv(state);
        const OdeState k2 = deriv(axpy(state, 0.5 * h, k1));
        const OdeState k3 = deriv(axpy(state, 0.5 * h, k2));
        const OdeState k4 = deriv(axpy(state, h, k3));
        state.e_amp += (h / 6.0) * (k1.e_amp + 2.0 * k2.e_amp + 2.0 * k3.e_amp + k4.e_amp);
        state.y_aux += (h / 6.0) * (k1.y_aux + 2.0 * k2.y_aux + 2.0 * k3.y_aux + k4.y_aux);
        out.tau.push_back(static_cast<double>(k) * h);
        out.value.push_back(state.e_amp);
    }
    return out;
}

double BathDiscretization::captured_mass() const
{
    return std::accumulate(weight.begin(), weight.end(), 0.0,
                           [](double acc, double w) { return acc + w * w; });
}

BathDiscretization lorentzian_bath(std::size_t n_modes, double half_width)
{
    if (n_modes < kMinBathModes) {
        std::ostringstream msg;
        msg << "bath discretization needs at least " << kMinBathModes << " modes, got " << n_modes;
        throw ValidationError(msg.str());
    }
    if (!std::isfinite(half_width) || half_width <= 0.0) {
        throw ValidationError("bath window half-width must be finite and > 0");
    }

    BathDiscretization bath;
    bath.omega_min = -half_width;
    bath.omega_max = half_width;
    bath.omega.resize(n_modes);
    bath.weight.resize(n_modes);
    const double dw = 2.0 * half_width / static_cast<double>(n_modes);
    for (std::size_t j = 0; j < n_modes; ++j) {
        const double w = -half_width + (static_cast<double>(j) + 0.5) * dw;
        // |alpha(w)|^2 = (1/pi) / (w^2 + 1) in units of kappa.
        bath.omega[j] = w;
        bath.weight[j] = std::sqrt(dw / (std::numbers::pi * (w * w + 1.0)));
    }

    const double mass = bath.captured_mass();
    if (mass < kMinCapturedMass) {
        std::ostringstream msg;
        msg << "bath window +/-" << half_width << " captures only " << mass
            << " of the Lorentzian mass (need >= " << kMinCapturedMass << ")";
        throw ValidationError(msg.str());
    }
    return bath;
}

BathEvolution solve_discretized_bath(const ModelParams& params, const BathDiscretization& bath,
                                     double tau_max, std::size_t steps)
{
    require_horizon(tau_max, steps);
    const std::size_t m = bath.n_modes();
    if (m == 0 || bath.weight.size() != m) {
        throw ValidationError("bath discretization must have one weight per mode");
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (!std::isfinite(bath.omega[j]) || !std::isfinite(bath.weight[j])) {
            throw ValidationError("bath frequencies and weights must be finite");
        }
    }

    const double scale = std::sqrt(static_cast<double>(params.n())) * params.ratio();
    const double coupling = scale * std::sqrt(bath.captured_mass());
    double max_freq = 0.0;
    for (double w : bath.omega) {
        max_freq = std::max(max_freq, std::abs(w));
    }

    const double h = tau_max / static_cast<double>(steps);
    if (h * std::max(max_freq, coupling) > kMaxSplitPhase) {
        std::ostringstream msg;
        msg << "bath propagation step " << h << " too coarse; need at least "
            << static_cast<std::size_t>(std::ceil(tau_max * std::max(max_freq, coupling) / kMaxSplitPhase))
            << " steps";
        throw ValidationError(msg.str());
    }

    // Unit vector of the coupling profile; the interaction acts on span{|E>, |v>}.
    std::vector<double> direction(m, 0.0);
    if (coupling > 0.0) {
        for (std::size_t j = 0; j < m; ++j) {
            direction[j] = scale * bath.weight[j] / coupling;
        }
    }

    // Yoshida fourth-order composition S(a h) S(b h) S(a h) of Strang steps.
    const double cbrt2 = std::cbrt(2.0);
    const std::array<double, 3> sub{1.0 / (2.0 - cbrt2), -cbrt2 / (2.0 - cbrt2), 1.0 / (2.0 - cbrt2)};

    // Half-drift phase factors exp(-i omega_j dt / 2) for the two distinct substeps.
    auto phases_for = [&](double dt) {
        std::vector<cplx> p(m);
        for (std::size_t j = 0; j < m; ++j) {
            p[j] = std::polar(1.0, -0.5 * bath.omega[j] * dt);
        }
        return p;
    };
    const std::vector<cplx> drift_outer = phases_for(sub[0] * h);
    const std::vector<cplx> drift_inner = phases_for(sub[1] * h);

    cplx e_amp{1.0, 0.0};
    std::vector<cplx> modes(m, cplx{0.0, 0.0});

    auto drift = [&](const std::vector<cplx>& phase) {
        for (std::size_t j = 0; j < m; ++j) {
            modes[j] *= phase[j];
        }
    };
    auto kick = [&](double dt) {
        if (coupling == 0.0) {
            return;
        }
        cplx proj{0.0, 0.0};
        for (std::size_t j = 0; j < m; ++j) {
            proj += direction[j] * modes[j];
        }
        const double c = std::cos(coupling * dt);
        const double s = std::sin(coupling * dt);
        const cplx i_unit{0.0, 1.0};
        const cplx new_e = c * e_amp - i_unit * s * proj;
        const cplx new_proj = c * proj - i_unit * s * e_amp;
        const cplx delta = new_proj - proj;
        for (std::size_t j = 0; j < m; ++j) {
            modes[j] += delta * direction[j];
        }
        e_amp = new_e;
    };
    auto strang = [&](const std::vector<cplx>& phase, double dt) {
        drift(phase);
        kick(dt);
        drift(phase);
    };
    auto total_norm = [&]() {
        double acc = std::norm(e_amp);
        for (const cplx& b : modes) {
            acc += std::norm(b);
        }
        return acc;
    };

    BathEvolution out;
    out.survival.tau.reserve(steps + 1);
    out.survival.value.reserve(steps + 1);
    out.norm.reserve(steps + 1);
    out.survival.tau.push_back(0.0);
    out.survival.value.push_back(e_amp);
    out.norm.push_back(total_norm());

    for (std::size_t k = 1; k <= steps; ++k) {
        strang(drift_outer, sub[0] * h);
        strang(drift_inner, sub[1] * h);
        strang(drift_outer, sub[2] * h);
        out.survival.tau.push_back(static_cast<double>(k) * h);
        out.survival.value.push_back(e_amp);
        out.norm.push_back(total_norm());
    }
    return out;
}

} // namespace nqent
