#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "nqent/errors.hpp"
#include "nqent/runner.hpp"

namespace nqent {

using nlohmann::json;

std::string_view to_string(Mode mode)
{
    switch (mode) {
    case Mode::Simulate: return "simulate";
    case Mode::Zeno: return "zeno";
    case Mode::Stationary: return "stationary";
    case Mode::Sweep: return "sweep";
    case Mode::Verify: return "verify";
    }
    return "?";
}

Mode parse_mode(std::string_view text)
{
    for (Mode m : {Mode::Simulate, Mode::Zeno, Mode::Stationary, Mode::Sweep, Mode::Verify}) {
        if (text == to_string(m)) {
            return m;
        }
    }
    throw ValidationError("unknown mode '" + std::string(text) + "'");
}

OutputFormat parse_format(std::string_view text)
{
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    throw ValidationError("unknown output format '" + std::string(text) + "' (expected csv or json)");
}

std::size_t SweepGrid::cell_count() const
{
    // Saturates instead of overflowing so oversized grids are still refused.
    const std::size_t sizes[] = {n.size(), ratio.size(), s.size(), phi.size(), tau.size(),
                                 interval_T.empty() ? std::size_t{1} : interval_T.size()};
    std::size_t count = 1;
    for (std::size_t k : sizes) {
        if (k != 0 && count > std::numeric_limits<std::size_t>::max() / k) {
            return std::numeric_limits<std::size_t>::max();
        }
        count *= k;
    }
    return count;
}

InitialSpec RunConfig::spec() const
{
    if (kind == InitialKind::WState) {
        return InitialSpec::w_state();
    }
    return InitialSpec::superposition(s, phi);
}

void RunConfig::validate() const
{
    if (samples < 2) {
        throw ValidationError("samples must be >= 2");
    }
    if (!std::isfinite(tau_max) || tau_max <= 0.0) {
        throw ValidationError("tau_max must be finite and > 0");
    }
    const InitialSpec init = spec();
    init.validate();

    switch (mode) {
    case Mode::Simulate: {
        params();
        if (pair_classes.empty() && !survival) {
            throw ValidationError("nothing to compute: request at least one pair class or survival");
        }
        for (PairClass p : pair_classes) {
            require_compatible(n, init, p);
        }
        break;
    }
    case Mode::Zeno:
        params();
        if (zeno_intervals.empty()) {
            throw ValidationError("zeno mode needs at least one measurement interval");
        }
        for (double t : zeno_intervals) {
            if (!std::isfinite(t) || t <= 0.0) {
                throw ValidationError("measurement intervals must be finite and > 0");
            }
            if (!zeno_series && t > tau_max) {
                throw ValidationError("measurement interval exceeds the total time tau_max");
            }
        }
        break;
    case Mode::Stationary:
        if (n < 2) {
            throw ValidationError("number of qubits must be >= 2");
        }
        if (kind != InitialKind::TwoQubitSuperposition) {
            throw ValidationError("stationary entanglement exists only for the two-qubit superposition state");
        }
        break;
    case Mode::Sweep: {
        if (sweep.n.empty() || sweep.ratio.empty() || sweep.s.empty() || sweep.phi.empty()
            || sweep.tau.empty()) {
            throw ValidationError("sweep grids n, R, s, phi and tau must all be non-empty");
        }
        if (pair_classes.empty() && !survival) {
            throw ValidationError("nothing to compute: request at least one pair class or survival");
        }
        const std::size_t cells = sweep.cell_count();
        if (cells > kMaxSweepRows) {
            std::ostringstream msg;
            msg << "sweep grid has " << cells << " rows, above the limit of " << kMaxSweepRows;
            throw ValidationError(msg.str());
        }
        for (int nv : sweep.n) {
            for (double r : sweep.ratio) {
                ModelParams(nv, r);
            }
        }
        for (double sv : sweep.s) {
            InitialSpec::superposition(sv, 0.0).validate();
        }
        for (double p : sweep.phi) {
            if (!std::isfinite(p)) {
                throw ValidationError("phi values must be finite");
            }
        }
        for (double t : sweep.tau) {
            if (std::isnan(t) || t < 0.0) {
                throw ValidationError("sweep tau values must be >= 0 (or \"inf\")");
            }
        }
        for (double t : sweep.interval_T) {
            if (!std::isfinite(t) || t <= 0.0) {
                throw ValidationError("sweep measurement intervals must be finite and > 0");
            }
        }
        // Classes that need more qubits than a grid point has are emitted as "n/a".
        for (PairClass p : pair_classes) {
            if ((kind == InitialKind::WState) != (p == PairClass::PairW)) {
                throw ValidationError("pair class " + std::string(to_string(p))
                                      + " does not match the initial state");
            }
        }
        break;
    }
    case Mode::Verify:
        break;
    }
}

namespace {

double number_or_inf(const json& v, const char* what)
{
    if (v.is_number()) {
        return v.get<double>();
    }
    if (v.is_string()) {
        const auto text = v.get<std::string>();
        if (text == "inf" || text == "infinity") {
            return std::numeric_limits<double>::infinity();
        }
    }
    throw ValidationError(std::string(what) + " entries must be numbers or \"inf\"");
}

template <class T>
std::vector<T> list_of(const json& v, const char* what)
{
    if (!v.is_array()) {
        throw ValidationError(std::string(what) + " must be a list");
    }
    try {
        return v.get<std::vector<T>>();
    } catch (const json::exception&) {
        throw ValidationError(std::string(what) + " has entries of the wrong type");
    }
}

template <class T>
T scalar_of(const json& v, const char* what)
{
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw ValidationError(std::string("config field '") + what + "' has the wrong type");
    }
}

InitialKind parse_state(const std::string& text)
{
    if (text == "w" || text == "W") return InitialKind::WState;
    if (text == "pair") return InitialKind::TwoQubitSuperposition;
    throw ValidationError("unknown state '" + text + "' (expected w or pair)");
}

} // namespace

RunConfig merge_config_json(RunConfig c, const json& doc)
{
    if (!doc.is_object()) {
        throw ValidationError("config document must be a JSON object");
    }
    static const std::set<std::string> known{
        "mode", "n", "R", "state", "s", "phi", "tau_max", "samples", "pair_classes", "survival", "esd",
        "zeno_intervals", "zeno_series", "sweep", "output_path", "output_format", "threads",
        "verify_tolerances"};
    for (const auto& [key, value] : doc.items()) {
        if (!known.count(key)) {
            throw ValidationError("unknown config field '" + key + "'");
        }
    }

    if (doc.contains("mode")) c.mode = parse_mode(scalar_of<std::string>(doc["mode"], "mode"));
    if (doc.contains("n")) c.n = scalar_of<int>(doc["n"], "n");
    if (doc.contains("R")) c.ratio = scalar_of<double>(doc["R"], "R");
    if (doc.contains("state")) c.kind = parse_state(scalar_of<std::string>(doc["state"], "state"));
    if (doc.contains("s")) c.s = scalar_of<double>(doc["s"], "s");
    if (doc.contains("phi")) c.phi = scalar_of<double>(doc["phi"], "phi");
    if (doc.contains("tau_max")) c.tau_max = scalar_of<double>(doc["tau_max"], "tau_max");
    if (doc.contains("samples")) c.samples = scalar_of<int>(doc["samples"], "samples");
    if (doc.contains("pair_classes")) {
        c.pair_classes.clear();
        for (const auto& name : list_of<std::string>(doc["pair_classes"], "pair_classes")) {
            c.pair_classes.push_back(parse_pair_class(name));
        }
    }
    if (doc.contains("survival")) c.survival = scalar_of<bool>(doc["survival"], "survival");
    if (doc.contains("esd")) c.esd = scalar_of<bool>(doc["esd"], "esd");
    if (doc.contains("zeno_intervals")) {
        c.zeno_intervals = list_of<double>(doc["zeno_intervals"], "zeno_intervals");
    }
    if (doc.contains("zeno_series")) c.zeno_series = scalar_of<bool>(doc["zeno_series"], "zeno_series");
    if (doc.contains("sweep")) {
        const json& g = doc["sweep"];
        if (!g.is_object()) {
            throw ValidationError("sweep must be an object of lists");
        }
        for (const auto& [key, value] : g.items()) {
            if (key == "n") c.sweep.n = list_of<int>(value, "sweep.n");
            else if (key == "R") c.sweep.ratio = list_of<double>(value, "sweep.R");
            else if (key == "s") c.sweep.s = list_of<double>(value, "sweep.s");
            else if (key == "phi") c.sweep.phi = list_of<double>(value, "sweep.phi");
            else if (key == "T") c.sweep.interval_T = list_of<double>(value, "sweep.T");
            else if (key == "tau") {
                if (!value.is_array()) {
                    throw ValidationError("sweep.tau must be a list");
                }
                c.sweep.tau.clear();
                for (const auto& t : value) {
                    c.sweep.tau.push_back(number_or_inf(t, "sweep.tau"));
                }
            } else {
                throw ValidationError("unknown sweep grid '" + key + "'");
            }
        }
    }
    if (doc.contains("output_path")) c.output_path = scalar_of<std::string>(doc["output_path"], "output_path");
    if (doc.contains("output_format")) {
        c.format = parse_format(scalar_of<std::string>(doc["output_format"], "output_format"));
    }
    if (doc.contains("threads")) c.threads = scalar_of<unsigned>(doc["threads"], "threads");
    if (doc.contains("verify_tolerances")) {
        c.verify_tolerances = scalar_of<std::map<std::string, double>>(doc["verify_tolerances"],
                                                                        "verify_tolerances");
    }
    return c;
}

RunConfig load_config_file(const std::string& path, RunConfig base)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file '" + path + "'");
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ValidationError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return merge_config_json(std::move(base), doc);
}

json config_to_json(const RunConfig& c)
{
    json doc;
    doc["mode"] = std::string(to_string(c.mode));
    doc["n"] = c.n;
    doc["R"] = c.ratio;
    doc["state"] = c.kind == InitialKind::WState ? "w" : "pair";
    doc["s"] = c.s;
    doc["phi"] = c.phi;
    doc["tau_max"] = c.tau_max;
    doc["samples"] = c.samples;
    json pairs = json::array();
    for (PairClass p : c.pair_classes) {
        pairs.push_back(std::string(to_string(p)));
    }
    doc["pair_classes"] = pairs;
    doc["survival"] = c.survival;
    doc["esd"] = c.esd;
    doc["zeno_intervals"] = c.zeno_intervals;
    doc["zeno_series"] = c.zeno_series;
    json taus = json::array();
    for (double t : c.sweep.tau) {
        if (std::isinf(t)) {
            taus.push_back("inf");
        } else {
            taus.push_back(t);
        }
    }
    doc["sweep"] = {{"n", c.sweep.n}, {"R", c.sweep.ratio}, {"s", c.sweep.s},
                    {"phi", c.sweep.phi}, {"tau", taus}, {"T", c.sweep.interval_T}};
    doc["output_path"] = c.output_path;
    doc["output_format"] = c.format == OutputFormat::Json ? "json" : "csv";
    doc["threads"] = c.threads;
    doc["verify_tolerances"] = c.verify_tolerances;
    return doc;
}

unsigned resolve_threads(unsigned requested)
{
    if (requested > 0) {
        return requested;
    }
    if (const char* env = std::getenv("NQENT_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace nqent
