#include "nqent/states.hpp"

#include <cmath>
#include <sstream>

#include "nqent/errors.hpp"

namespace nqent {

InitialSpec InitialSpec::w_state()
{
    InitialSpec spec;
    spec.kind = InitialKind::WState;
    return spec;
}

InitialSpec InitialSpec::superposition(double s, double phi)
{
    InitialSpec spec;
    spec.kind = InitialKind::TwoQubitSuperposition;
    spec.s = s;
    spec.phi = phi;
    return spec;
}

void InitialSpec::validate() const
{
    if (!std::isfinite(s) || s < -1.0 || s > 1.0) {
        std::ostringstream msg;
        msg << "separability parameter s must lie in [-1, 1], got " << s;
        throw ValidationError(msg.str());
    }
    if (!std::isfinite(phi)) {
        throw ValidationError("relative phase phi must be finite");
    }
    if (k_index < 1 || l_index < 1 || k_index == l_index) {
        throw ValidationError("qubit labels k and l must be distinct and >= 1");
    }
}

double AmplitudeState::emitted() const
{
    return 1.0 - std::norm(c1) - std::norm(c2) - std::norm(c3);
}

std::pair<cplx, cplx> initial_coefficients(const InitialSpec& spec)
{
    spec.validate();
    const double a = std::sqrt(0.5 * (1.0 - spec.s));
    const double b = std::sqrt(0.5 * (1.0 + spec.s));
    return {cplx{a, 0.0}, std::polar(b, spec.phi)};
}

AmplitudeState evolve_amplitudes(const ModelParams& params, const InitialSpec& spec, double tau)
{
    if (spec.kind != InitialKind::TwoQubitSuperposition) {
        throw ValidationError("evolve_amplitudes applies to the two-qubit superposition branch");
    }
    AmplitudeState st = amplitudes_for_survival(params.n(), spec, survival_amplitude(params, tau));
    st.tau = tau;
    return st;
}

AmplitudeState amplitudes_for_survival(int n_qubits, const InitialSpec& spec, cplx e_amp)
{
    if (spec.kind != InitialKind::TwoQubitSuperposition) {
        throw ValidationError("amplitudes c1, c2, c3 exist only for the two-qubit superposition branch");
    }
    if (n_qubits < 2) {
        throw ValidationError("number of qubits must be >= 2");
    }
    const auto [c01, c02] = initial_coefficients(spec);
    const double n = n_qubits;
    // Only the bright (symmetric) component decays; the rest is dark and frozen.
    const cplx bright = (c01 + c02) / n;

    AmplitudeState st;
    st.e_amp = e_amp;
    st.c1 = ((n - 1.0) * c01 - c02) / n + bright * e_amp;
    st.c2 = ((n - 1.0) * c02 - c01) / n + bright * e_amp;
    st.c3 = std::sqrt(n - 2.0) * bright * (e_amp - 1.0);
    return st;
}

cplx w_state_survival(const ModelParams& params, double tau)
{
    return survival_amplitude(params, tau);
}

} // namespace nqent
