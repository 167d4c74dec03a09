#include "nqent/zeno.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "nqent/errors.hpp"

namespace nqent {

void ZenoSchedule::validate() const
{
    if (!std::isfinite(interval_T) || interval_T <= 0.0) {
        std::ostringstream msg;
        msg << "measurement interval T must be finite and > 0, got " << interval_T;
        throw ValidationError(msg.str());
    }
    if (count_N < 1) {
        throw ValidationError("measurement count N must be >= 1, got " + std::to_string(count_N));
    }
}

ZenoSchedule ZenoSchedule::covering(double total_time, double interval_T)
{
    if (!std::isfinite(total_time) || total_time <= 0.0) {
        throw ValidationError("total time must be finite and > 0");
    }
    ZenoSchedule sched;
    sched.interval_T = interval_T;
    sched.count_N = 1;
    sched.validate();
    // Ratios like 25 / 0.1 land a hair below the integer; absorb that rounding.
    const double ratio = total_time / interval_T;
    const double count = std::floor(ratio * (1.0 + 4.0 * std::numeric_limits<double>::epsilon()));
    if (count < 1.0) {
        throw ValidationError("interval T exceeds the total time; no measurement fits");
    }
    if (count > std::numeric_limits<int>::max()) {
        throw ValidationError("too many measurements for the requested total time");
    }
    sched.count_N = static_cast<int>(count);
    return sched;
}

ZenoRate effective_decay_rate(const ModelParams& params, double interval_T)
{
    ZenoSchedule{interval_T, 1}.validate();
    const double amp = std::abs(survival_amplitude(params, interval_T));
    if (amp <= kZenoNodeTolerance) {
        return {std::numeric_limits<double>::infinity(), true};
    }
    // log1p keeps precision when |E|^2 is within rounding of one (short T).
    const double p = amp * amp;
    const double gamma = -std::log1p(p - 1.0) / interval_T;
    return {std::max(0.0, gamma), false};
}

double zeno_survival(const ModelParams& params, const ZenoSchedule& schedule)
{
    schedule.validate();
    const ZenoRate rate = effective_decay_rate(params, schedule.interval_T);
    if (rate.saturated) {
        return 0.0;
    }
    return std::exp(-rate.gamma * schedule.total_time());
}

double zeno_concurrence(const ModelParams& params, const ZenoSchedule& schedule)
{
    return 2.0 / params.n() * zeno_survival(params, schedule);
}

double zeno_concurrence_at(const ModelParams& params, double interval_T, double tau)
{
    ZenoSchedule{interval_T, 1}.validate();
    if (!std::isfinite(tau) || tau < 0.0) {
        throw ValidationError("tau must be finite and >= 0");
    }
    const double done = std::floor(tau / interval_T);
    const double rest = tau - done * interval_T;
    double measured = 1.0;
    if (done >= 1.0) {
        const ZenoRate rate = effective_decay_rate(params, interval_T);
        measured = rate.saturated ? 0.0 : std::exp(-rate.gamma * done * interval_T);
    }
    return 2.0 / params.n() * measured * survival_probability(params, rest);
}

} // namespace nqent
