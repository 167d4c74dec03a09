// nqent: command-line front end for the n-qubit entanglement library.
//
// Precedence: built-in defaults < --config JSON < command-line flags.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nqent/errors.hpp"
#include "nqent/runner.hpp"

namespace {

struct Overrides {
    std::optional<int> n;
    std::optional<double> ratio;
    std::optional<std::string> state;
    std::optional<double> s;
    std::optional<double> phi;
    std::optional<double> tau_max;
    std::optional<int> samples;
    std::vector<std::string> pairs;
    bool survival = false;
    bool esd = false;
    std::vector<double> intervals;
    bool zeno_series = false;
    std::vector<std::string> tolerances;
};

void add_model_flags(CLI::App* cmd, Overrides& o)
{
    cmd->add_option("--n", o.n, "number of qubits");
    cmd->add_option("--R", o.ratio, "coupling ratio g/kappa");
    cmd->add_option("--state", o.state, "initial state: w or pair")->check(CLI::IsMember({"w", "pair"}));
    cmd->add_option("--s", o.s, "population imbalance s in [-1,1]");
    cmd->add_option("--phi", o.phi, "relative phase");
    cmd->add_option("--tau-max", o.tau_max, "final scaled time kappa*t");
    cmd->add_option("--samples", o.samples, "number of time samples");
}

nqent::RunConfig apply(nqent::RunConfig c, const Overrides& o)
{
    if (o.n) c.n = *o.n;
    if (o.ratio) c.ratio = *o.ratio;
    if (o.state) c.kind = *o.state == "w" ? nqent::InitialKind::WState : nqent::InitialKind::TwoQubitSuperposition;
    if (o.s) c.s = *o.s;
    if (o.phi) c.phi = *o.phi;
    if (o.tau_max) c.tau_max = *o.tau_max;
    if (o.samples) c.samples = *o.samples;
    if (!o.pairs.empty()) {
        c.pair_classes.clear();
        for (const auto& p : o.pairs) {
            c.pair_classes.push_back(nqent::parse_pair_class(p));
        }
    }
    if (o.survival) c.survival = true;
    if (o.esd) c.esd = true;
    if (!o.intervals.empty()) c.zeno_intervals = o.intervals;
    if (o.zeno_series) c.zeno_series = true;
    for (const auto& t : o.tolerances) {
        const auto eq = t.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw nqent::ValidationError("--tolerance expects name=value, got '" + t + "'");
        }
        try {
            c.verify_tolerances[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
        } catch (const std::exception&) {
            throw nqent::ValidationError("--tolerance value is not a number: '" + t + "'");
        }
    }
    return c;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact entanglement dynamics of n qubits in a common Lorentzian cavity"};
    app.require_subcommand(1);
    // global flags are accepted after the subcommand too
    app.fallthrough();

    std::string config_path;
    std::optional<std::string> out_path;
    std::optional<std::string> format;
    std::optional<unsigned> threads;
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--out", out_path, "output file (default: standard output)");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

    Overrides o;
    auto* simulate = app.add_subcommand("simulate", "concurrence time series");
    add_model_flags(simulate, o);
    simulate->add_option("--pair", o.pairs, "pair class: KL, KJ, LJ, JM or PAIR_W (repeatable)");
    simulate->add_flag("--survival", o.survival, "also emit P0 = |E|^2");
    simulate->add_flag("--esd", o.esd, "also emit sudden-death events");

    auto* zeno = app.add_subcommand("zeno", "repeated-measurement survival and concurrence");
    add_model_flags(zeno, o);
    zeno->add_option("--interval", o.intervals, "measurement interval kappa*T (repeatable)");
    zeno->add_flag("--series", o.zeno_series, "emit C(tau) for each interval instead of a summary");

    auto* stationary = app.add_subcommand("stationary", "long-time pair concurrence graph");
    add_model_flags(stationary, o);

    app.add_subcommand("sweep", "Cartesian parameter sweep (grid from --config)");

    auto* verify = app.add_subcommand("verify", "run the oracle-equivalence checks");
    verify->add_option("--tolerance", o.tolerances, "override a check limit, name=value (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        nqent::RunConfig config;
        if (!config_path.empty()) {
            config = nqent::load_config_file(config_path, config);
        }
        config.mode = nqent::parse_mode(app.get_subcommands().front()->get_name());
        config = apply(std::move(config), o);
        if (out_path) config.output_path = *out_path;
        if (format) config.format = nqent::parse_format(*format);
        if (threads) config.threads = *threads;

        const nqent::RunOutput output = nqent::run(config);
        nqent::write_output(config, output);
        return output.passed ? 0 : 2;
    } catch (const nqent::ValidationError& e) {
        std::cerr << "nqent: " << e.what() << '\n';
        return 1;
    } catch (const nqent::IoError& e) {
        std::cerr << "nqent: " << e.what() << '\n';
        return 3;
    } catch (const nqent::NumericalError& e) {
        std::cerr << "nqent: numerical failure: " << e.what() << '\n';
        return 1;
    }
}
