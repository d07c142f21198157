#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "chiralsim/cli.hpp"

namespace chiralsim::cli {

using nlohmann::json;

namespace {

std::string join(const std::string& parent, const std::string& key)
{
    return parent.empty() ? key : parent + "." + key;
}

void require_object(const json& j, const std::string& path)
{
    if (!j.is_object()) {
        throw ConfigError("'" + (path.empty() ? std::string("<root>") : path) +
                          "' must be an object");
    }
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed)
{
    require_object(j, path);
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!ok.count(it.key())) {
            throw ConfigError("unknown key '" + join(path, it.key()) + "'");
        }
    }
}

double get_double(const json& j, const std::string& path)
{
    if (!j.is_number()) {
        throw ConfigError("'" + path + "' must be a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw ConfigError("'" + path + "' must be finite");
    }
    return v;
}

std::string get_string(const json& j, const std::string& path)
{
    if (!j.is_string()) {
        throw ConfigError("'" + path + "' must be a string");
    }
    return j.get<std::string>();
}

int get_level(const json& j, const std::string& path)
{
    if (!j.is_number_integer() || j.get<int>() < 1 || j.get<int>() > 3) {
        throw ConfigError("'" + path + "' must be a level 1..3");
    }
    return j.get<int>();
}

template <std::size_t N>
std::array<double, N> get_array(const json& j, const std::string& path)
{
    if (!j.is_array() || j.size() != N) {
        throw ConfigError("'" + path + "' must be an array of " + std::to_string(N) + " numbers");
    }
    std::array<double, N> out{};
    for (std::size_t k = 0; k < N; ++k) {
        out[k] = get_double(j[k], path + "[" + std::to_string(k) + "]");
    }
    return out;
}

std::vector<double> get_axis(const json& j, const std::string& path)
{
    if (!j.is_array() || j.empty()) {
        throw ConfigError("'" + path + "' must be a non-empty array of numbers");
    }
    std::vector<double> out;
    for (std::size_t k = 0; k < j.size(); ++k) {
        out.push_back(get_double(j[k], path + "[" + std::to_string(k) + "]"));
    }
    return out;
}

std::vector<std::pair<int, int>> get_paths(const json& j, const std::string& path)
{
    if (!j.is_array()) {
        throw ConfigError("'" + path + "' must be an array of [source, target] pairs");
    }
    std::vector<std::pair<int, int>> out;
    for (std::size_t k = 0; k < j.size(); ++k) {
        const std::string p = path + "[" + std::to_string(k) + "]";
        if (!j[k].is_array() || j[k].size() != 2) {
            throw ConfigError("'" + p + "' must be a [source, target] pair");
        }
        const int src = get_level(j[k][0], p + "[0]");
        const int dst = get_level(j[k][1], p + "[1]");
        if (src == dst) {
            throw ConfigError("'" + p + "' source and target must differ");
        }
        out.emplace_back(src, dst);
    }
    return out;
}

DetuningSet get_detuning(const json& j, const std::string& path)
{
    check_keys(j, path, {"12", "23", "13"});
    DetuningSet d;
    if (j.contains("12")) d.delta12 = get_double(j["12"], join(path, "12"));
    if (j.contains("23")) d.delta23 = get_double(j["23"], join(path, "23"));
    if (j.contains("13")) d.delta13 = get_double(j["13"], join(path, "13"));
    return d;
}

Chirality get_chirality(const json& j, const std::string& path)
{
    const std::string s = get_string(j, path);
    if (s == "left") return Chirality::Left;
    if (s == "right") return Chirality::Right;
    throw ConfigError("'" + path + "' must be \"left\" or \"right\"");
}

template <class Fn>
auto wrap(const std::string& path, Fn&& fn)
{
    try {
        return fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError("'" + path + "': " + e.what());
    }
}

void parse_protocol(const json& j, ProtocolSpec& spec)
{
    const std::string p = "protocol";
    check_keys(j, p, {"shape", "durations", "gaps", "areas", "phases", "engine",
                      "steps_per_segment"});
    if (j.contains("shape")) {
        spec.shape = wrap(p + ".shape", [&] { return shape_from_string(get_string(j["shape"], p + ".shape")); });
    }
    if (j.contains("durations")) spec.durations = get_array<3>(j["durations"], p + ".durations");
    if (j.contains("gaps")) spec.gaps = get_array<2>(j["gaps"], p + ".gaps");
    if (j.contains("areas")) spec.areas = get_array<3>(j["areas"], p + ".areas");
    if (j.contains("phases")) {
        const json& ph = j["phases"];
        check_keys(ph, p + ".phases", {"12", "23", "13"});
        if (ph.contains("12")) spec.phase12 = get_double(ph["12"], p + ".phases.12");
        if (ph.contains("23")) spec.phase23 = get_double(ph["23"], p + ".phases.23");
        if (ph.contains("13")) spec.phase13 = get_double(ph["13"], p + ".phases.13");
    }
    if (j.contains("engine")) {
        spec.engine = wrap(p + ".engine", [&] { return engine_from_string(get_string(j["engine"], p + ".engine")); });
    }
    if (j.contains("steps_per_segment")) {
        const json& s = j["steps_per_segment"];
        if (!s.is_number_integer() || s.get<long long>() < 10) {
            throw ConfigError("'protocol.steps_per_segment' must be an integer >= 10");
        }
        spec.steps_per_segment = s.get<std::size_t>();
    }
}

ErrorModel parse_errors(const json& j)
{
    const std::string p = "errors";
    check_keys(j, p, {"area_error", "step_area_errors", "phase_error", "detuning", "gamma",
                      "decay_paths"});
    ErrorModel m;
    if (j.contains("area_error")) m.area_error = get_double(j["area_error"], p + ".area_error");
    if (j.contains("step_area_errors")) {
        m.step_area_errors = get_array<3>(j["step_area_errors"], p + ".step_area_errors");
    }
    if (j.contains("phase_error")) m.phase_error = get_double(j["phase_error"], p + ".phase_error");
    if (j.contains("detuning")) m.detuning = get_detuning(j["detuning"], p + ".detuning");
    double gamma = 0.0;
    if (j.contains("gamma")) {
        gamma = get_double(j["gamma"], p + ".gamma");
        if (gamma < 0.0) {
            throw ConfigError("'errors.gamma' must be non-negative");
        }
    }
    std::vector<std::pair<int, int>> paths{{3, 1}, {3, 2}, {2, 1}};
    if (j.contains("decay_paths")) paths = get_paths(j["decay_paths"], p + ".decay_paths");
    if (gamma > 0.0) {
        for (auto [src, dst] : paths) {
            m.decay.push_back({src, dst, gamma});
        }
    }
    return m;
}

SweepGrid parse_grid(const json& j)
{
    const std::string p = "grid";
    check_keys(j, p, {"area_error", "step1_area_error", "step2_area_error", "step3_area_error",
                      "phase_error", "delta12", "delta23", "delta13", "gamma", "decay_paths"});
    SweepGrid g;
    const std::pair<const char*, std::vector<double>*> axes[] = {
        {"area_error", &g.area_error},
        {"step1_area_error", &g.step1_area_error},
        {"step2_area_error", &g.step2_area_error},
        {"step3_area_error", &g.step3_area_error},
        {"phase_error", &g.phase_error},
        {"delta12", &g.delta12},
        {"delta23", &g.delta23},
        {"delta13", &g.delta13},
        {"gamma", &g.gamma},
    };
    for (auto [key, axis] : axes) {
        if (j.contains(key)) {
            *axis = get_axis(j[key], p + "." + key);
        }
    }
    for (double v : g.gamma) {
        if (v < 0.0) {
            throw ConfigError("'grid.gamma' values must be non-negative");
        }
    }
    if (j.contains("decay_paths")) g.decay_paths = get_paths(j["decay_paths"], p + ".decay_paths");
    return g;
}

} // namespace

json read_document(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config '" + path.string() + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str(), nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed config '" + path.string() + "': " + e.what());
    }
}

RunConfig parse_run_config(const json& doc)
{
    check_keys(doc, "", {"protocol", "errors", "grid", "output", "threads"});
    RunConfig cfg;
    if (doc.contains("protocol")) parse_protocol(doc["protocol"], cfg.spec);
    if (doc.contains("errors")) cfg.errors = parse_errors(doc["errors"]);
    if (doc.contains("grid")) cfg.grid = parse_grid(doc["grid"]);
    if (doc.contains("output")) {
        const json& o = doc["output"];
        check_keys(o, "output", {"csv", "json"});
        if (o.contains("csv")) cfg.csv_path = get_string(o["csv"], "output.csv");
        if (o.contains("json")) cfg.json_path = get_string(o["json"], "output.json");
    }
    if (doc.contains("threads")) {
        const json& t = doc["threads"];
        if (!t.is_number_integer() || t.get<long long>() < 0) {
            throw ConfigError("'threads' must be a non-negative integer");
        }
        cfg.threads = t.get<unsigned>();
    }
    wrap("protocol", [&] { cfg.spec.validate(); return 0; });
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path)
{
    return parse_run_config(read_document(path));
}

namespace {

Envelope parse_envelope(const json& j, const std::string& path, const PulseSegment& seg)
{
    check_keys(j, path, {"shape", "amplitude", "area", "phase"});
    Envelope env;
    env.t_start = seg.t_start;
    env.duration = seg.duration;
    if (j.contains("shape")) {
        env.shape = wrap(path + ".shape", [&] { return shape_from_string(get_string(j["shape"], path + ".shape")); });
    }
    if (j.contains("amplitude") == j.contains("area")) {
        throw ConfigError("'" + path + "' needs exactly one of 'amplitude' or 'area'");
    }
    if (j.contains("amplitude")) {
        env.amplitude = get_double(j["amplitude"], path + ".amplitude");
    } else {
        const double a = get_double(j["area"], path + ".area");
        env.amplitude = wrap(path + ".area", [&] { return calibrate_amplitude(env.shape, env.duration, a); });
    }
    if (j.contains("phase")) env.phase = get_double(j["phase"], path + ".phase");
    wrap(path, [&] { env.validate(); return 0; });
    return env;
}

} // namespace

EvolveConfig parse_evolve_config(const json& doc)
{
    check_keys(doc, "", {"initial_state", "chirality", "detuning", "engine", "step", "decay",
                         "segments"});
    EvolveConfig cfg;
    cfg.initial_state = Vector3c(1.0, 0.0, 0.0);
    if (doc.contains("initial_state")) {
        const json& s = doc["initial_state"];
        if (!s.is_array() || s.size() != 3) {
            throw ConfigError("'initial_state' must be three [re, im] pairs");
        }
        for (std::size_t k = 0; k < 3; ++k) {
            const std::string p = "initial_state[" + std::to_string(k) + "]";
            const auto c = get_array<2>(s[k], p);
            cfg.initial_state(static_cast<Eigen::Index>(k)) = cplx(c[0], c[1]);
        }
        if (cfg.initial_state.norm() == 0.0) {
            throw ConfigError("'initial_state': degenerate state");
        }
    }
    if (doc.contains("chirality")) cfg.generator.chirality = get_chirality(doc["chirality"], "chirality");
    if (doc.contains("detuning")) cfg.generator.detuning = get_detuning(doc["detuning"], "detuning");
    if (doc.contains("engine")) {
        cfg.engine = wrap("engine", [&] { return engine_from_string(get_string(doc["engine"], "engine")); });
        if (cfg.engine == Engine::Auto) {
            throw ConfigError("'engine' must be piecewise, rk4 or lindblad");
        }
    }
    if (doc.contains("step")) {
        cfg.step = get_double(doc["step"], "step");
    }
    if (doc.contains("decay")) {
        const json& d = doc["decay"];
        if (!d.is_array()) {
            throw ConfigError("'decay' must be an array");
        }
        for (std::size_t k = 0; k < d.size(); ++k) {
            const std::string p = "decay[" + std::to_string(k) + "]";
            check_keys(d[k], p, {"source", "target", "rate"});
            if (!d[k].contains("source") || !d[k].contains("target") || !d[k].contains("rate")) {
                throw ConfigError("'" + p + "' needs source, target and rate");
            }
            CollapseChannel c{get_level(d[k]["source"], p + ".source"),
                              get_level(d[k]["target"], p + ".target"),
                              get_double(d[k]["rate"], p + ".rate")};
            wrap(p, [&] { c.validate(); return 0; });
            cfg.decay.push_back(c);
        }
    }

    std::vector<PulseSegment> segs;
    if (doc.contains("segments")) {
        const json& arr = doc["segments"];
        if (!arr.is_array()) {
            throw ConfigError("'segments' must be an array");
        }
        for (std::size_t k = 0; k < arr.size(); ++k) {
            const std::string p = "segments[" + std::to_string(k) + "]";
            const json& js = arr[k];
            check_keys(js, p, {"t_start", "duration", "channels"});
            PulseSegment seg;
            seg.t_start = js.contains("t_start") ? get_double(js["t_start"], p + ".t_start")
                                                 : (segs.empty() ? 0.0 : segs.back().t_end());
            if (!js.contains("duration")) {
                throw ConfigError("'" + p + ".duration' is required");
            }
            seg.duration = get_double(js["duration"], p + ".duration");
            if (js.contains("channels")) {
                const json& ch = js["channels"];
                check_keys(ch, p + ".channels", {"12", "23", "13"});
                const std::pair<const char*, Channel> names[] = {
                    {"12", Channel::C12}, {"23", Channel::C23}, {"13", Channel::C13}};
                for (auto [name, c] : names) {
                    if (ch.contains(name)) {
                        seg.channel(c) = parse_envelope(ch[name], p + ".channels." + name, seg);
                    }
                }
            }
            segs.push_back(seg);
        }
    }
    cfg.generator.schedule = wrap("segments", [&] { return Schedule(std::move(segs)); });
    if ((cfg.engine == Engine::Rk4 || cfg.engine == Engine::Lindblad) && !doc.contains("step")) {
        throw ConfigError("'step' is required for the " + std::string(to_string(cfg.engine)) +
                          " engine");
    }
    return cfg;
}

EvolveConfig load_evolve_config(const std::filesystem::path& path)
{
    return parse_evolve_config(read_document(path));
}

} // namespace chiralsim::cli
