#pragma once

#include "nqent/model.hpp"

namespace nqent {

// N nonselective projections onto the initial W state, one every interval_T.
struct ZenoSchedule {
    double interval_T = 1.0;
    int count_N = 1;

    double total_time() const { return interval_T * count_N; }
    void validate() const;

    // N = floor(t / T) measurements fitting into total time t.
    static ZenoSchedule covering(double total_time, double interval_T);
};

// |E(T)| at or below this counts as a measurement at a node of E: the state
// is destroyed with certainty and the effective rate saturates.
inline constexpr double kZenoNodeTolerance = 1e-10;

struct ZenoRate {
    double gamma = 0.0; // +infinity when saturated
    bool saturated = false;
};

// Gamma_z(T) = -ln|E(T)|^2 / T.
ZenoRate effective_decay_rate(const ModelParams& params, double interval_T);

// P0^(N) = |E(T)|^(2N) = exp(-Gamma_z(T) N T); 0 when saturated.
double zeno_survival(const ModelParams& params, const ZenoSchedule& schedule);

// Pair concurrence of the measured W branch, (2/n) P0^(N).
double zeno_concurrence(const ModelParams& params, const ZenoSchedule& schedule);

// W-branch pair concurrence at time tau under projections every interval_T:
// floor(tau/T) completed measurements followed by free evolution of the rest.
double zeno_concurrence_at(const ModelParams& params, double interval_T, double tau);

} // namespace nqent
