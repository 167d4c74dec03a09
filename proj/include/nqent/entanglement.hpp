#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "nqent/model.hpp"
#include "nqent/states.hpp"

namespace nqent {

// Which two qubits a reduced state describes. With k = 1 and l = 2 the
// initially superposed pair, j and m stand for any of the remaining qubits.
enum class PairClass {
    KL,    // k with l
    KJ,    // k with a ground-state qubit j (needs n > 2)
    LJ,    // l with a ground-state qubit j (needs n > 2)
    JM,    // two ground-state qubits (needs n > 3)
    PairW, // any pair, W-state branch
};

std::string_view to_string(PairClass pair);
PairClass parse_pair_class(std::string_view text);

// Representative qubit labels (1-based) for a pair class.
std::pair<int, int> representative_qubits(PairClass pair);

// Throws ValidationError if the class does not exist for this state and size.
void require_compatible(int n, const InitialSpec& spec, PairClass pair);

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-10;

struct DensityDiagnostics {
    double hermiticity_error = 0.0; // max |rho - rho^dagger|
    double trace_error = 0.0;       // |tr rho - 1|
    double min_eigenvalue = 0.0;

    bool valid() const
    {
        return hermiticity_error <= kHermitianTolerance && trace_error <= kTraceTolerance
               && min_eigenvalue >= -kPsdTolerance;
    }
};

DensityDiagnostics diagnose(const Eigen::MatrixXcd& rho);

// Two-qubit state in the ordered basis {|11>, |10>, |01>, |00>}.
class TwoQubitDensityMatrix {
public:
    enum Basis : int { k11 = 0, k10 = 1, k01 = 2, k00 = 3 };

    // Throws ValidationError when the matrix is not a valid density matrix.
    explicit TwoQubitDensityMatrix(const Eigen::Matrix4cd& m);

    const Eigen::Matrix4cd& matrix() const { return m_; }
    cplx operator()(int row, int col) const { return m_(row, col); }
    DensityDiagnostics diagnostics() const { return diagnose(m_); }

private:
    Eigen::Matrix4cd m_;
};

// Qubit state restricted to the single-excitation sector, basis
// {|G>, |1_1>, ..., |1_n>}. Entry (0, 0) carries the ground population
// 1 - sum_i |a_i|^2 left behind by the emitted photon.
class SectorDensityMatrix {
public:
    explicit SectorDensityMatrix(const Eigen::MatrixXcd& m);

    // rho = |a><a| + (1 - |a|^2) |G><G| for single-excitation amplitudes a.
    static SectorDensityMatrix from_amplitudes(const std::vector<cplx>& amplitudes);

    int n() const { return static_cast<int>(m_.rows()) - 1; }
    const Eigen::MatrixXcd& matrix() const { return m_; }
    double ground_population() const { return m_(0, 0).real(); }

private:
    Eigen::MatrixXcd m_;
};

// Per-qubit excitation amplitudes a_1..a_n (k = 1, l = 2) at time tau.
std::vector<cplx> qubit_amplitudes(const ModelParams& params, const InitialSpec& spec, double tau);

SectorDensityMatrix build_sector_rho(const ModelParams& params, const InitialSpec& spec, double tau);

// Reduced two-qubit state of the pair class, written directly from the
// amplitudes (X-shaped: only the |10>,|01> block and |00> are populated).
TwoQubitDensityMatrix build_pair_rho(const ModelParams& params, const InitialSpec& spec,
                                     PairClass pair, double tau);

// Partial trace of a sector state over every qubit except labels a and b
// (1-based, distinct). The kept pair is ordered (a, b).
TwoQubitDensityMatrix partial_trace_oracle(const SectorDensityMatrix& full, int a, int b);

// Wootters concurrence max{0, l1 - l2 - l3 - l4}.
double wootters_concurrence(const TwoQubitDensityMatrix& rho);

// Decreasing eigenvalues of rho (sy x sy) rho* (sy x sy).
std::vector<double> wootters_spectrum(const TwoQubitDensityMatrix& rho);

// Closed-form pair concurrence of the chosen class.
double closed_form_concurrence(const ModelParams& params, const InitialSpec& spec, PairClass pair,
                               double tau);

// tau -> infinity limit of closed_form_concurrence. Depends on n and the
// initial state only; zero for the W branch.
double stationary_concurrence(int n, const InitialSpec& spec, PairClass pair);

inline constexpr double kEsdThreshold = 1e-9;
inline constexpr double kEsdMaxStep = 0.05;

struct ConcurrenceSeries {
    std::vector<double> tau;
    std::vector<double> value;
};

struct EsdEvent {
    double death = 0.0;
    std::optional<double> revival;
};

// Entanglement sudden death from samples alone: runs of samples below
// kEsdThreshold preceded by a nonzero value. Refuses series whose
// consecutive samples differ by kEsdMaxStep or more.
std::vector<EsdEvent> detect_esd(const ConcurrenceSeries& series);

// As above, and also refines every sampled local minimum with a golden-section
// search on `evaluate`, catching zeros the concurrence only touches between
// samples. Touch events revive at the same instant.
std::vector<EsdEvent> detect_esd(const ConcurrenceSeries& series,
                                 const std::function<double(double)>& evaluate);

struct GraphEdge {
    int a = 0;
    int b = 0;
    PairClass pair = PairClass::KL;
    double weight = 0.0;
};

// Complete graph over qubits 1..n weighted by stationary pair concurrence.
struct SteadyGraph {
    int n = 0;
    std::vector<GraphEdge> edges;
};

SteadyGraph steady_graph(int n, const InitialSpec& spec);

} // namespace nqent
