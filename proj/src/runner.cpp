#include "nqent/runner.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "nqent/errors.hpp"
#include "nqent/model.hpp"
#include "nqent/zeno.hpp"

namespace nqent {

using nlohmann::json;

namespace {

const std::string kNotApplicable = "n/a";

// Runs fn(0..count-1) on up to `threads` workers. Each index writes only its
// own slot, so assembly order is fixed by the caller.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn)
{
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        const auto workers = std::min<std::size_t>(threads, count);
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                        next = count;
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

std::vector<double> uniform_grid(double tau_max, int samples)
{
    std::vector<double> taus(static_cast<std::size_t>(samples));
    const double step = tau_max / (samples - 1);
    for (int k = 0; k < samples; ++k) {
        taus[static_cast<std::size_t>(k)] = k * step;
    }
    taus.back() = tau_max;
    return taus;
}

std::string concurrence_column(PairClass pair)
{
    return "C_" + std::string(to_string(pair));
}

json cell_json(const Cell& cell)
{
    if (const auto* d = std::get_if<double>(&cell)) {
        if (std::isfinite(*d)) {
            return *d;
        }
        return format_double(*d);
    }
    if (const auto* i = std::get_if<long long>(&cell)) {
        return *i;
    }
    return std::get<std::string>(cell);
}

json table_json(const Table& table)
{
    json rows = json::array();
    for (const auto& row : table.rows) {
        json r = json::array();
        for (const auto& cell : row) {
            r.push_back(cell_json(cell));
        }
        rows.push_back(std::move(r));
    }
    return {{"columns", table.columns}, {"rows", rows}};
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

} // namespace

std::string format_double(double value)
{
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string format_cell(const Cell& cell)
{
    if (const auto* d = std::get_if<double>(&cell)) {
        return format_double(*d);
    }
    if (const auto* i = std::get_if<long long>(&cell)) {
        return std::to_string(*i);
    }
    return std::get<std::string>(cell);
}

std::string render_csv(const Table& table)
{
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out += ',';
        out += table.columns[c];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_cell(row[c]);
        }
        out += '\n';
    }
    return out;
}

std::string render_json(const RunOutput& output)
{
    json doc = table_json(output.table);
    if (output.events) {
        doc["events"] = table_json(*output.events);
    }
    doc["passed"] = output.passed;
    return doc.dump(2) + "\n";
}

RunOutput run_simulate(const RunConfig& config)
{
    config.validate();
    const ModelParams params = config.params();
    const InitialSpec spec = config.spec();
    const std::vector<double> taus = uniform_grid(config.tau_max, config.samples);

    RunOutput out;
    out.table.columns.push_back("tau");
    for (PairClass p : config.pair_classes) {
        out.table.columns.push_back(concurrence_column(p));
    }
    if (config.survival) {
        out.table.columns.push_back("P0");
    }

    out.table.rows.resize(taus.size());
    parallel_for(taus.size(), resolve_threads(config.threads), [&](std::size_t i) {
        std::vector<Cell> row;
        row.reserve(out.table.columns.size());
        row.emplace_back(taus[i]);
        for (PairClass p : config.pair_classes) {
            row.emplace_back(closed_form_concurrence(params, spec, p, taus[i]));
        }
        if (config.survival) {
            row.emplace_back(survival_probability(params, taus[i]));
        }
        out.table.rows[i] = std::move(row);
    });

    if (config.esd) {
        Table events;
        events.columns = {"pair", "death_tau", "revival_tau"};
        for (std::size_t c = 0; c < config.pair_classes.size(); ++c) {
            const PairClass p = config.pair_classes[c];
            ConcurrenceSeries series;
            series.tau = taus;
            series.value.reserve(taus.size());
            for (const auto& row : out.table.rows) {
                series.value.push_back(std::get<double>(row[c + 1]));
            }
            const auto found = detect_esd(series, [&](double t) {
                return closed_form_concurrence(params, spec, p, t);
            });
            for (const EsdEvent& ev : found) {
                events.rows.push_back({std::string(to_string(p)), ev.death,
                                       ev.revival ? Cell{*ev.revival} : Cell{std::string("none")}});
            }
        }
        out.events = std::move(events);
    }
    return out;
}

RunOutput run_zeno(const RunConfig& config)
{
    config.validate();
    const ModelParams params = config.params();
    const double n = params.n();
    RunOutput out;

    if (config.zeno_series) {
        const std::vector<double> taus = uniform_grid(config.tau_max, config.samples);
        out.table.columns = {"tau", "C_free"};
        for (double t : config.zeno_intervals) {
            out.table.columns.push_back("C_zeno_T=" + format_double(t));
        }
        out.table.rows.resize(taus.size());
        parallel_for(taus.size(), resolve_threads(config.threads), [&](std::size_t i) {
            std::vector<Cell> row{taus[i], 2.0 / n * survival_probability(params, taus[i])};
            for (double t : config.zeno_intervals) {
                row.emplace_back(zeno_concurrence_at(params, t, taus[i]));
            }
            out.table.rows[i] = std::move(row);
        });
        return out;
    }

    out.table.columns = {"T", "N", "t", "gamma_z", "P0_N", "C_N", "P0_free", "C_free"};
    for (double t : config.zeno_intervals) {
        const ZenoSchedule sched = ZenoSchedule::covering(config.tau_max, t);
        const ZenoRate rate = effective_decay_rate(params, t);
        const double p_free = survival_probability(params, sched.total_time());
        const double p_n = zeno_survival(params, sched);
        out.table.rows.push_back({t, static_cast<long long>(sched.count_N), sched.total_time(),
                                  rate.gamma, p_n, zeno_concurrence(params, sched), p_free,
                                  2.0 / n * p_free});
    }
    return out;
}

RunOutput run_stationary(const RunConfig& config)
{
    config.validate();
    const SteadyGraph graph = steady_graph(config.n, config.spec());
    RunOutput out;
    out.table.columns = {"a", "b", "pair", "weight"};
    for (const GraphEdge& e : graph.edges) {
        out.table.rows.push_back({static_cast<long long>(e.a), static_cast<long long>(e.b),
                                  std::string(to_string(e.pair)), e.weight});
    }
    return out;
}

RunOutput run_sweep(const RunConfig& config)
{
    config.validate();
    const SweepGrid& g = config.sweep;
    const bool with_zeno = !g.interval_T.empty();
    const std::size_t n_t = with_zeno ? g.interval_T.size() : 1;

    RunOutput out;
    out.table.columns = {"n", "R", "s", "phi"};
    if (with_zeno) out.table.columns.push_back("T");
    out.table.columns.push_back("tau");
    for (PairClass p : config.pair_classes) {
        out.table.columns.push_back(concurrence_column(p));
    }
    if (config.survival) out.table.columns.push_back("P0");
    if (with_zeno) {
        for (const char* c : {"N", "gamma_z", "P0_N", "C_N"}) {
            out.table.columns.push_back(c);
        }
    }

    // Lexicographic order over (n, R, s, phi, T, tau), tau fastest.
    const std::size_t cells = g.cell_count();
    out.table.rows.resize(cells);
    parallel_for(cells, resolve_threads(config.threads), [&](std::size_t idx) {
        std::size_t rem = idx;
        const double tau = g.tau[rem % g.tau.size()];
        rem /= g.tau.size();
        const std::size_t it = rem % n_t;
        rem /= n_t;
        const double phi = g.phi[rem % g.phi.size()];
        rem /= g.phi.size();
        const double s = g.s[rem % g.s.size()];
        rem /= g.s.size();
        const double ratio = g.ratio[rem % g.ratio.size()];
        rem /= g.ratio.size();
        const int n = g.n[rem];

        const ModelParams params(n, ratio);
        const InitialSpec spec = config.kind == InitialKind::WState ? InitialSpec::w_state()
                                                                   : InitialSpec::superposition(s, phi);
        const bool stationary = std::isinf(tau);

        std::vector<Cell> row{static_cast<long long>(n), ratio, s, phi};
        if (with_zeno) row.emplace_back(g.interval_T[it]);
        row.emplace_back(tau);
        for (PairClass p : config.pair_classes) {
            try {
                require_compatible(n, spec, p);
            } catch (const ValidationError&) {
                row.emplace_back(kNotApplicable);
                continue;
            }
            row.emplace_back(stationary ? stationary_concurrence(n, spec, p)
                                        : closed_form_concurrence(params, spec, p, tau));
        }
        if (config.survival) {
            row.emplace_back(stationary ? 0.0 : survival_probability(params, tau));
        }
        if (with_zeno) {
            const double t_int = g.interval_T[it];
            if (stationary || tau < t_int) {
                for (int k = 0; k < 4; ++k) row.emplace_back(kNotApplicable);
            } else {
                const ZenoSchedule sched = ZenoSchedule::covering(tau, t_int);
                row.emplace_back(static_cast<long long>(sched.count_N));
                row.emplace_back(effective_decay_rate(params, t_int).gamma);
                row.emplace_back(zeno_survival(params, sched));
                row.emplace_back(zeno_concurrence(params, sched));
            }
        }
        out.table.rows[idx] = std::move(row);
    });
    return out;
}

RunOutput run(const RunConfig& config)
{
    switch (config.mode) {
    case Mode::Simulate: return run_simulate(config);
    case Mode::Zeno: return run_zeno(config);
    case Mode::Stationary: return run_stationary(config);
    case Mode::Sweep: return run_sweep(config);
    case Mode::Verify: return run_verify(config);
    }
    throw ValidationError("unknown mode");
}

void write_output(const RunConfig& config, const RunOutput& output)
{
    if (config.format == OutputFormat::Json) {
        const std::string text = render_json(output);
        if (config.output_path.empty()) {
            std::cout << text;
        } else {
            write_file(config.output_path, text);
        }
        return;
    }

    const std::string main = render_csv(output.table);
    if (config.output_path.empty()) {
        std::cout << main;
        if (output.events) {
            std::cout << '\n' << render_csv(*output.events);
        }
        return;
    }
    write_file(config.output_path, main);
    if (output.events) {
        write_file(config.output_path + ".esd.csv", render_csv(*output.events));
    }
}

} // namespace nqent
