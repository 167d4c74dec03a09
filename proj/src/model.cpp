#include "nqent/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nqent/errors.hpp"

namespace nqent {

namespace {

constexpr double kImagTolerance = 1e-12;
constexpr double kSinhcTaylorRadius = 1e-4;
// Half-width of the bisection bracket used to polish each zero.
constexpr double kPolishHalfWidth = 5e-4;

void require_time(double tau, const char* what)
{
    if (!std::isfinite(tau) || tau < 0.0) {
        std::ostringstream msg;
        msg << what << " must be a finite scaled time >= 0, got " << tau;
        throw ValidationError(msg.str());
    }
}

} // namespace

std::string_view to_string(Regime regime)
{
    switch (regime) {
    case Regime::Weak: return "weak";
    case Regime::Critical: return "critical";
    case Regime::Strong: return "strong";
    }
    return "unknown";
}

ModelParams::ModelParams(int n, double ratio)
    : n_(n), ratio_(ratio)
{
    if (n < 2) {
        throw ValidationError("number of qubits must be >= 2, got " + std::to_string(n));
    }
    if (!std::isfinite(ratio) || ratio <= 0.0) {
        std::ostringstream msg;
        msg << "coupling ratio R = g/kappa must be finite and > 0, got " << ratio;
        throw ValidationError(msg.str());
    }
}

Regime ModelParams::regime() const
{
    const double boundary = 1.0 / (4.0 * n_);
    const double r2 = ratio_ * ratio_;
    if (std::abs(r2 - boundary) < kCriticalTolerance) {
        return Regime::Critical;
    }
    return r2 < boundary ? Regime::Weak : Regime::Strong;
}

ComplexRate ModelParams::omega() const
{
    const double x = 1.0 - 4.0 * collective_rate();
    if (x >= 0.0) {
        return {std::sqrt(x), 0.0};
    }
    return {0.0, std::sqrt(-x)};
}

ComplexRate ModelParams::omega_prime() const
{
    const double x = 4.0 * collective_rate() - 1.0;
    if (x >= 0.0) {
        return {std::sqrt(x), 0.0};
    }
    return {0.0, std::sqrt(-x)};
}

double spectral_density(const ModelParams& params, double omega)
{
    return params.collective_rate() / (std::numbers::pi * (omega * omega + 1.0));
}

cplx correlation_kernel(const ModelParams& params, double dt)
{
    require_time(dt, "kernel delay");
    return {params.collective_rate() * std::exp(-dt), 0.0};
}

cplx sinhc(cplx z)
{
    if (std::abs(z) < kSinhcTaylorRadius) {
        const cplx z2 = z * z;
        return 1.0 + z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sinh(z) / z;
}

cplx survival_amplitude(const ModelParams& params, double tau)
{
    require_time(tau, "tau");

    const cplx om = params.omega().value();
    const cplx z = om * (0.5 * tau);

    // E = e^{-tau/2} [cosh z + (tau/2) sinhc z]. For large |z| the exponentials
    // are combined with the damping first so that long times do not overflow.
    cplx value;
    if (std::abs(z) < 1.0) {
        const double damp = std::exp(-0.5 * tau);
        value = damp * (std::cosh(z) + (0.5 * tau) * sinhc(z));
    } else {
        const cplx grow = std::exp(z - 0.5 * tau);
        const cplx fall = std::exp(-z - 0.5 * tau);
        value = 0.5 * (grow + fall) + (grow - fall) / (2.0 * om);
    }

    if (!std::isfinite(value.real()) || std::abs(value.imag()) > kImagTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "survival amplitude lost reality at tau = " << tau << ": " << value;
        throw NumericalError(msg.str());
    }
    return value;
}

double survival_probability(const ModelParams& params, double tau)
{
    return std::norm(survival_amplitude(params, tau));
}

std::vector<double> zero_crossings(const ModelParams& params, int m_max)
{
    if (params.regime() != Regime::Strong) {
        throw ValidationError("survival amplitude has no real zeros in the "
                              + std::string(to_string(params.regime())) + " regime");
    }
    if (m_max < 1) {
        throw ValidationError("m_max must be >= 1");
    }

    const double wp = params.omega_prime().re;
    const double phase = std::atan(wp);
    const double period = 2.0 * std::numbers::pi / wp;
    const double half = std::min(kPolishHalfWidth, 0.25 * period);

    auto f = [&](double t) { return survival_amplitude(params, t).real(); };

    std::vector<double> zeros;
    zeros.reserve(static_cast<std::size_t>(m_max));
    for (int m = 1; m <= m_max; ++m) {
        const double guess = 2.0 * (m * std::numbers::pi - phase) / wp;
        double lo = std::max(0.0, guess - half);
        double hi = guess + half;
        double flo = f(lo);
        const double fhi = f(hi);
        if (flo == 0.0) {
            zeros.push_back(lo);
            continue;
        }
        if (std::signbit(flo) == std::signbit(fhi)) {
            std::ostringstream msg;
            msg << "no sign change of E around closed-form zero t_" << m << " = " << guess;
            throw NumericalError(msg.str());
        }
        for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fmid = f(mid);
            if (fmid == 0.0) {
                lo = hi = mid;
                break;
            }
            if (std::signbit(fmid) == std::signbit(flo)) {
                lo = mid;
                flo = fmid;
            } else {
                hi = mid;
            }
        }
        zeros.push_back(0.5 * (lo + hi));
    }
    return zeros;
}

} // namespace nqent
