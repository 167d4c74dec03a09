#include "nqent/entanglement.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include "nqent/errors.hpp"

namespace nqent {

namespace {

using Basis = TwoQubitDensityMatrix::Basis;

// Imaginary parts of the Wootters spectrum above this are a numerical fault.
constexpr double kSpectrumImagTolerance = 1e-8;

// sigma_y (x) sigma_y in the {|11>, |10>, |01>, |00>} basis.
Eigen::Matrix4cd spin_flip()
{
    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
    yy(Basis::k11, Basis::k00) = -1.0;
    yy(Basis::k00, Basis::k11) = -1.0;
    yy(Basis::k10, Basis::k01) = 1.0;
    yy(Basis::k01, Basis::k10) = 1.0;
    return yy;
}

// X-shaped pair state for single-excitation amplitudes (x, y) on the two
// kept qubits.
Eigen::Matrix4cd pair_matrix(cplx x, cplx y)
{
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(Basis::k10, Basis::k10) = std::norm(x);
    m(Basis::k01, Basis::k01) = std::norm(y);
    m(Basis::k10, Basis::k01) = x * std::conj(y);
    m(Basis::k01, Basis::k10) = std::conj(x) * y;
    m(Basis::k00, Basis::k00) = 1.0 - std::norm(x) - std::norm(y);
    return m;
}

void require_label(int label, int n)
{
    if (label < 1 || label > n) {
        std::ostringstream msg;
        msg << "qubit label " << label << " outside 1.." << n;
        throw ValidationError(msg.str());
    }
}

std::string describe(const DensityDiagnostics& d)
{
    std::ostringstream msg;
    msg.precision(3);
    msg << "hermiticity error " << d.hermiticity_error << ", trace error " << d.trace_error
        << ", min eigenvalue " << d.min_eigenvalue;
    return msg.str();
}

PairClass class_of_labels(int a, int b)
{
    const int lo = std::min(a, b);
    const int hi = std::max(a, b);
    if (lo == 1 && hi == 2) return PairClass::KL;
    if (lo == 1) return PairClass::KJ;
    if (lo == 2) return PairClass::LJ;
    return PairClass::JM;
}

double pair_concurrence(int n, const AmplitudeState& st, PairClass pair)
{
    switch (pair) {
    case PairClass::KL:
        return 2.0 * std::abs(st.c1) * std::abs(st.c2);
    case PairClass::KJ:
        return 2.0 / std::sqrt(n - 2.0) * std::abs(st.c1) * std::abs(st.c3);
    case PairClass::LJ:
        return 2.0 / std::sqrt(n - 2.0) * std::abs(st.c2) * std::abs(st.c3);
    case PairClass::JM:
        return 2.0 / (n - 2.0) * std::norm(st.c3);
    case PairClass::PairW:
        break;
    }
    throw ValidationError("pair class PAIR_W has no two-qubit-branch concurrence");
}

} // namespace

std::string_view to_string(PairClass pair)
{
    switch (pair) {
    case PairClass::KL: return "KL";
    case PairClass::KJ: return "KJ";
    case PairClass::LJ: return "LJ";
    case PairClass::JM: return "JM";
    case PairClass::PairW: return "PAIR_W";
    }
    return "?";
}

PairClass parse_pair_class(std::string_view text)
{
    for (PairClass p : {PairClass::KL, PairClass::KJ, PairClass::LJ, PairClass::JM, PairClass::PairW}) {
        if (text == to_string(p)) {
            return p;
        }
    }
    throw ValidationError("unknown pair class '" + std::string(text)
                          + "' (expected KL, KJ, LJ, JM or PAIR_W)");
}

std::pair<int, int> representative_qubits(PairClass pair)
{
    switch (pair) {
    case PairClass::KL: return {1, 2};
    case PairClass::KJ: return {1, 3};
    case PairClass::LJ: return {2, 3};
    case PairClass::JM: return {3, 4};
    case PairClass::PairW: return {1, 2};
    }
    return {1, 2};
}

void require_compatible(int n, const InitialSpec& spec, PairClass pair)
{
    const bool w_branch = spec.kind == InitialKind::WState;
    if (w_branch != (pair == PairClass::PairW)) {
        throw ValidationError("pair class " + std::string(to_string(pair))
                              + (w_branch ? " does not apply to the W-state branch"
                                          : " applies only to the W-state branch"));
    }
    const int needed = pair == PairClass::JM ? 4 : (pair == PairClass::KJ || pair == PairClass::LJ) ? 3 : 2;
    if (n < needed) {
        throw ValidationError("pair class " + std::string(to_string(pair)) + " needs n >= "
                              + std::to_string(needed) + ", got n = " + std::to_string(n));
    }
}

DensityDiagnostics diagnose(const Eigen::MatrixXcd& rho)
{
    DensityDiagnostics d;
    d.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    d.trace_error = std::abs(rho.trace() - cplx{1.0, 0.0});
    const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = es.eigenvalues().minCoeff();
    return d;
}

TwoQubitDensityMatrix::TwoQubitDensityMatrix(const Eigen::Matrix4cd& m)
    : m_(m)
{
    const DensityDiagnostics d = diagnose(m_);
    if (!d.valid()) {
        throw ValidationError("not a valid two-qubit density matrix: " + describe(d));
    }
}

SectorDensityMatrix::SectorDensityMatrix(const Eigen::MatrixXcd& m)
    : m_(m)
{
    if (m_.rows() != m_.cols() || m_.rows() < 3) {
        throw ValidationError("sector density matrix must be square with n + 1 >= 3 rows");
    }
    const DensityDiagnostics d = diagnose(m_);
    if (!d.valid()) {
        throw ValidationError("not a valid sector density matrix: " + describe(d));
    }
}

SectorDensityMatrix SectorDensityMatrix::from_amplitudes(const std::vector<cplx>& amplitudes)
{
    const auto n = static_cast<Eigen::Index>(amplitudes.size());
    Eigen::VectorXcd a(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        a(i) = amplitudes[static_cast<std::size_t>(i)];
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    m.bottomRightCorner(n, n) = a * a.adjoint();
    m(0, 0) = 1.0 - a.squaredNorm();
    return SectorDensityMatrix(m);
}

std::vector<cplx> qubit_amplitudes(const ModelParams& params, const InitialSpec& spec, double tau)
{
    const auto n = static_cast<std::size_t>(params.n());
    if (spec.kind == InitialKind::WState) {
        const cplx e = w_state_survival(params, tau);
        return std::vector<cplx>(n, e / std::sqrt(static_cast<double>(n)));
    }
    const AmplitudeState st = evolve_amplitudes(params, spec, tau);
    std::vector<cplx> a(n);
    a[0] = st.c1;
    a[1] = st.c2;
    if (n > 2) {
        const cplx rest = st.c3 / std::sqrt(static_cast<double>(n - 2));
        std::fill(a.begin() + 2, a.end(), rest);
    }
    return a;
}

SectorDensityMatrix build_sector_rho(const ModelParams& params, const InitialSpec& spec, double tau)
{
    return SectorDensityMatrix::from_amplitudes(qubit_amplitudes(params, spec, tau));
}

TwoQubitDensityMatrix build_pair_rho(const ModelParams& params, const InitialSpec& spec,
                                     PairClass pair, double tau)
{
    const int n = params.n();
    require_compatible(n, spec, pair);

    if (pair == PairClass::PairW) {
        const double p = std::norm(w_state_survival(params, tau)) / n;
        Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
        m(Basis::k10, Basis::k10) = p;
        m(Basis::k10, Basis::k01) = p;
        m(Basis::k01, Basis::k10) = p;
        m(Basis::k01, Basis::k01) = p;
        m(Basis::k00, Basis::k00) = 1.0 - 2.0 * p;
        return TwoQubitDensityMatrix(m);
    }

    const AmplitudeState st = evolve_amplitudes(params, spec, tau);
    switch (pair) {
    case PairClass::KL:
        return TwoQubitDensityMatrix(pair_matrix(st.c1, st.c2));
    case PairClass::KJ:
        return TwoQubitDensityMatrix(pair_matrix(st.c1, st.c3 / std::sqrt(n - 2.0)));
    case PairClass::LJ:
        return TwoQubitDensityMatrix(pair_matrix(st.c2, st.c3 / std::sqrt(n - 2.0)));
    case PairClass::JM: {
        const cplx rest = st.c3 / std::sqrt(n - 2.0);
        return TwoQubitDensityMatrix(pair_matrix(rest, rest));
    }
    case PairClass::PairW:
        break;
    }
    throw ValidationError("unreachable pair class");
}

TwoQubitDensityMatrix partial_trace_oracle(const SectorDensityMatrix& full, int a, int b)
{
    const int n = full.n();
    require_label(a, n);
    require_label(b, n);
    if (a == b) {
        throw ValidationError("partial trace needs two distinct qubits");
    }
    const Eigen::MatrixXcd& m = full.matrix();

    // Sector basis states factor as (kept pair) x (traced rest):
    //   |G>   -> |00> |0..0>
    //   |1_a> -> |10> |0..0>,  |1_b> -> |01> |0..0>
    //   |1_i> -> |00> |1_i>    for every other qubit i.
    // Tracing the rest keeps coherences among the first three and adds the
    // populations of every |1_i> to |00><00|.
    const std::array<int, 3> sector_index{0, a, b};
    const std::array<int, 3> pair_index{Basis::k00, Basis::k10, Basis::k01};

    Eigen::Matrix4cd r = Eigen::Matrix4cd::Zero();
    for (std::size_t p = 0; p < 3; ++p) {
        for (std::size_t q = 0; q < 3; ++q) {
            r(pair_index[p], pair_index[q]) = m(sector_index[p], sector_index[q]);
        }
    }
    for (int i = 1; i <= n; ++i) {
        if (i != a && i != b) {
            r(Basis::k00, Basis::k00) += m(i, i);
        }
    }
    return TwoQubitDensityMatrix(r);
}

std::vector<double> wootters_spectrum(const TwoQubitDensityMatrix& rho)
{
    const Eigen::Matrix4cd& m = rho.matrix();
    const Eigen::Matrix4cd yy = spin_flip();
    const Eigen::Matrix4cd tilde = yy * m.conjugate() * yy;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(m * tilde, false);
    if (es.info() != Eigen::Success) {
        throw NumericalError("eigen-solver failed on the Wootters product matrix");
    }

    std::vector<double> ell(4);
    for (int i = 0; i < 4; ++i) {
        const cplx v = es.eigenvalues()(i);
        if (std::abs(v.imag()) > kSpectrumImagTolerance) {
            std::ostringstream msg;
            msg << "Wootters spectrum has imaginary part " << v.imag();
            throw NumericalError(msg.str());
        }
        if (v.real() < -kPsdTolerance) {
            std::ostringstream msg;
            msg << "Wootters spectrum has negative eigenvalue " << v.real();
            throw NumericalError(msg.str());
        }
        ell[static_cast<std::size_t>(i)] = std::max(0.0, v.real());
    }
    std::sort(ell.begin(), ell.end(), std::greater<>());
    return ell;
}

double wootters_concurrence(const TwoQubitDensityMatrix& rho)
{
    // The spectrum is checked for reality and sign, but its square roots are
    // taken from the singular values of tau = W^T (sy x sy) W with rho = W W^dagger.
    // The two agree (tau^dagger tau shares the spectrum of rho rho~), and the
    // singular values stay accurate where sqrt of a rounded zero would not.
    wootters_spectrum(rho);

    const Eigen::Matrix4cd& m = rho.matrix();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m);
    if (es.info() != Eigen::Success) {
        throw NumericalError("eigen-solver failed on the density matrix");
    }
    const Eigen::Vector4d p = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::Matrix4cd w = es.eigenvectors() * p.asDiagonal();
    const Eigen::Matrix4cd tau = w.transpose() * spin_flip() * w;

    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(tau);
    const Eigen::Vector4d lam = svd.singularValues(); // decreasing
    return std::max(0.0, lam(0) - lam(1) - lam(2) - lam(3));
}

double closed_form_concurrence(const ModelParams& params, const InitialSpec& spec, PairClass pair,
                               double tau)
{
    const int n = params.n();
    require_compatible(n, spec, pair);
    if (pair == PairClass::PairW) {
        return 2.0 * survival_probability(params, tau) / n;
    }
    return pair_concurrence(n, evolve_amplitudes(params, spec, tau), pair);
}

double stationary_concurrence(int n, const InitialSpec& spec, PairClass pair)
{
    if (n < 2) {
        throw ValidationError("number of qubits must be >= 2");
    }
    require_compatible(n, spec, pair);
    if (pair == PairClass::PairW) {
        return 0.0;
    }
    return pair_concurrence(n, amplitudes_for_survival(n, spec, cplx{0.0, 0.0}), pair);
}

namespace {

void require_series(const ConcurrenceSeries& series)
{
    if (series.tau.size() != series.value.size()) {
        throw ValidationError("concurrence series has mismatched tau/value lengths");
    }
    if (series.tau.size() < 2) {
        throw ValidationError("concurrence series needs at least two samples");
    }
    for (std::size_t i = 0; i < series.tau.size(); ++i) {
        if (!std::isfinite(series.tau[i]) || !std::isfinite(series.value[i])) {
            throw ValidationError("concurrence series contains non-finite values");
        }
        if (i > 0) {
            if (series.tau[i] <= series.tau[i - 1]) {
                throw ValidationError("concurrence series times must be strictly increasing");
            }
            const double jump = std::abs(series.value[i] - series.value[i - 1]);
            if (jump >= kEsdMaxStep) {
                std::ostringstream msg;
                msg << "concurrence series undersampled: change of " << jump << " between tau = "
                    << series.tau[i - 1] << " and " << series.tau[i];
                throw ValidationError(msg.str());
            }
        }
    }
}

// Time at which the segment from (t0, v0) to (t1, v1) crosses kEsdThreshold.
double threshold_crossing(double t0, double v0, double t1, double v1)
{
    if (v0 == v1) {
        return t1;
    }
    const double frac = std::clamp((v0 - kEsdThreshold) / (v0 - v1), 0.0, 1.0);
    return t0 + frac * (t1 - t0);
}

std::pair<double, double> golden_minimum(const std::function<double(double)>& f, double lo, double hi)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

std::vector<EsdEvent> sampled_deaths(const ConcurrenceSeries& series)
{
    const auto& t = series.tau;
    const auto& v = series.value;
    const std::size_t len = t.size();

    std::vector<EsdEvent> events;
    std::size_t i = 1;
    while (i < len) {
        if (v[i] <= kEsdThreshold && v[i - 1] > kEsdThreshold) {
            EsdEvent ev;
            ev.death = threshold_crossing(t[i - 1], v[i - 1], t[i], v[i]);
            std::size_t j = i;
            while (j + 1 < len && v[j + 1] <= kEsdThreshold) {
                ++j;
            }
            if (j + 1 < len) {
                ev.revival = threshold_crossing(t[j + 1], v[j + 1], t[j], v[j]);
            }
            events.push_back(ev);
            i = j + 1;
        } else {
            ++i;
        }
    }
    return events;
}

} // namespace

std::vector<EsdEvent> detect_esd(const ConcurrenceSeries& series)
{
    require_series(series);
    return sampled_deaths(series);
}

std::vector<EsdEvent> detect_esd(const ConcurrenceSeries& series,
                                 const std::function<double(double)>& evaluate)
{
    require_series(series);
    std::vector<EsdEvent> events = sampled_deaths(series);

    const auto& t = series.tau;
    const auto& v = series.value;
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        const bool local_min = v[i] <= v[i - 1] && v[i] <= v[i + 1] && (v[i] < v[i - 1] || v[i] < v[i + 1]);
        if (!local_min || v[i] <= kEsdThreshold) {
            continue;
        }
        const auto [where, value] = golden_minimum(evaluate, t[i - 1], t[i + 1]);
        if (value <= kEsdThreshold) {
            events.push_back(EsdEvent{where, where});
        }
    }
    std::sort(events.begin(), events.end(),
              [](const EsdEvent& x, const EsdEvent& y) { return x.death < y.death; });
    return events;
}

SteadyGraph steady_graph(int n, const InitialSpec& spec)
{
    if (spec.kind != InitialKind::TwoQubitSuperposition) {
        throw ValidationError("steady-state graph is defined for the two-qubit superposition branch");
    }
    if (n < 2) {
        throw ValidationError("number of qubits must be >= 2");
    }
    SteadyGraph graph;
    graph.n = n;
    const AmplitudeState st = amplitudes_for_survival(n, spec, cplx{0.0, 0.0});
    for (int a = 1; a <= n; ++a) {
        for (int b = a + 1; b <= n; ++b) {
            const PairClass cls = class_of_labels(a, b);
            graph.edges.push_back(GraphEdge{a, b, cls, pair_concurrence(n, st, cls)});
        }
    }
    return graph;
}

} // namespace nqent
