#pragma once

#include <utility>

#include "nqent/model.hpp"

namespace nqent {

enum class InitialKind {
    // Equal superposition of single excitations over all n qubits.
    WState,
    // One excitation shared between qubits k and l, weighted by s and phi.
    TwoQubitSuperposition,
};

// Initial single-excitation state. Only the pair class of (k, l) matters for
// the dynamics, so amplitudes always refer to k = 1, l = 2.
struct InitialSpec {
    InitialKind kind = InitialKind::TwoQubitSuperposition;
    double s = 0.0;   // separability: -1 (only k excited) .. 0 (Bell pair) .. 1 (only l excited)
    double phi = 0.0; // relative phase of the l amplitude
    int k_index = 1;
    int l_index = 2;

    static InitialSpec w_state();
    static InitialSpec superposition(double s, double phi = 0.0);

    // Throws ValidationError on s outside [-1, 1], non-finite phi, or k == l.
    void validate() const;
};

// Single-excitation amplitudes at scaled time tau. For the two-qubit branch
// c1, c2 sit on qubits k and l and c3 on the normalized symmetric state of the
// remaining n - 2 qubits; e_amp is the survival amplitude E(tau) in both cases.
struct AmplitudeState {
    cplx c1{0.0, 0.0};
    cplx c2{0.0, 0.0};
    cplx c3{0.0, 0.0};
    cplx e_amp{1.0, 0.0};
    double tau = 0.0;

    // 1 - sum |c_i|^2: probability that the excitation has leaked into the field.
    double emitted() const;
};

// (c01, c02) = (sqrt((1 - s)/2), sqrt((1 + s)/2) e^{i phi}).
std::pair<cplx, cplx> initial_coefficients(const InitialSpec& spec);

AmplitudeState evolve_amplitudes(const ModelParams& params, const InitialSpec& spec, double tau);

// The same amplitudes for an externally supplied survival amplitude. With
// e_amp = 0 this is the stationary state reached for tau -> infinity.
AmplitudeState amplitudes_for_survival(int n, const InitialSpec& spec, cplx e_amp);

// E(tau) for the W branch; its density matrix depends on this scalar alone.
cplx w_state_survival(const ModelParams& params, double tau);

} // namespace nqent
