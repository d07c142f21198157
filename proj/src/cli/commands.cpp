#include <cmath>
#include <numbers>
#include <ostream>

#include <CLI11.hpp>

#include "chiralsim/cli.hpp"

namespace chiralsim::cli {

namespace {

std::string format_complex(cplx z)
{
    return "(" + format_double(z.real()) + ", " + format_double(z.imag()) + ")";
}

void print_populations(std::ostream& out, const char* label, const std::array<double, 3>& p)
{
    out << label;
    for (double v : p) {
        out << "  " << format_double(v);
    }
    out << "\n";
}

int cmd_protocol(const std::string& config_path, const std::string& json_out, std::ostream& out)
{
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    const ProtocolSpec spec = apply_error(cfg.spec, cfg.errors);
    const DiscriminationReport rep = discriminate(spec);

    out << "engine    " << to_string(rep.left.engine) << "\n";
    out << "          P(1)                P(2)                P(3)\n";
    print_populations(out, "left    ", rep.left.populations);
    print_populations(out, "right   ", rep.right.populations);
    out << "contrast  " << format_double(rep.contrast) << "\n";
    out << "drift     " << format_double(std::max(rep.left.drift, rep.right.drift)) << "\n";

    std::string json_path = json_out;
    if (json_path.empty() && cfg.json_path) {
        json_path = *cfg.json_path;
    }
    if (!json_path.empty()) {
        write_file(resolve_output(json_path), protocol_json(rep).dump(2) + "\n");
    }
    return Ok;
}

int cmd_sweep(const std::string& config_path, const std::string& csv_out,
              const std::string& json_out, std::ostream& out, std::ostream& err)
{
    const RunConfig cfg = load_run_config(config_path);
    if (!cfg.grid) {
        throw ConfigError("sweep config needs a 'grid' section");
    }
    const ProtocolSpec spec = apply_error(cfg.spec, cfg.errors);
    const auto records = run_sweep(spec, cfg.grid->expand(), cfg.threads);

    const std::string csv_path = !csv_out.empty() ? csv_out : cfg.csv_path.value_or("sweep.csv");
    const auto csv_file = resolve_output(csv_path);
    write_file(csv_file, sweep_csv(records));

    std::string json_path = json_out;
    if (json_path.empty() && cfg.json_path) {
        json_path = *cfg.json_path;
    }
    if (!json_path.empty()) {
        write_file(resolve_output(json_path), sweep_json(records).dump(2) + "\n");
    }

    std::size_t failed = 0;
    for (std::size_t k = 0; k < records.size(); ++k) {
        if (!records[k].error.empty()) {
            ++failed;
            err << "grid point " << k << ": " << records[k].error << "\n";
        }
    }
    out << "wrote " << records.size() << " rows to " << csv_file.string() << "\n";
    return failed == 0 ? Ok : NumericalFailure;
}

int cmd_eigen(double omega0, double phase12, double phase23, std::ostream& out)
{
    const double mag = std::abs(omega0);
    const double flip = omega0 < 0.0 ? std::numbers::pi : 0.0;
    RabiSet rabi;
    rabi.omega12 = std::polar(mag, phase12 + flip);
    rabi.omega23 = std::polar(mag, phase23 + flip);

    const auto pairs = dressed_eigensystem(rabi);
    // roundoff-level eigenvalues are shown as exact zeros
    const double floor = 1e-12 * std::max(1.0, std::sqrt(2.0) * mag);
    for (const auto& p : pairs) {
        const double value = std::abs(p.value) <= floor ? 0.0 : p.value;
        out << "eigenvalue " << format_double(value) << "  eigenvector";
        for (int l = 1; l <= 3; ++l) {
            out << " " << format_complex(p.state[l]);
        }
        out << "\n";
    }
    return Ok;
}

int cmd_evolve(const std::string& config_path, std::ostream& out)
{
    const EvolveConfig cfg = load_evolve_config(config_path);
    const StateVec3 psi0 = normalize(cfg.initial_state);

    std::array<double, 3> pops{};
    double drift = 0.0;
    out << "engine    " << to_string(cfg.engine) << "\n";
    switch (cfg.engine) {
    case Engine::Auto:
    case Engine::Piecewise: {
        const StateVec3 psi = evolve_piecewise(cfg.generator, psi0);
        for (int l = 1; l <= 3; ++l) {
            out << "c" << l << "        " << format_complex(psi[l]) << "\n";
            pops[l - 1] = population(psi, l);
        }
        break;
    }
    case Engine::Rk4: {
        const Rk4Result r = evolve_rk4(cfg.generator, psi0, cfg.step);
        for (int l = 0; l < 3; ++l) {
            out << "c" << l + 1 << "        " << format_complex(r.amplitudes(l)) << "\n";
            pops[l] = std::norm(r.amplitudes(l));
        }
        drift = r.norm_drift;
        if (drift > 1e-8) {
            throw NumericalError("RK4 norm drift " + format_double(drift) + " exceeds tolerance");
        }
        break;
    }
    case Engine::Lindblad: {
        const LindbladResult r =
            evolve_lindblad(cfg.generator, cfg.decay, DensityMatrix3::pure(psi0), cfg.step);
        for (int l = 1; l <= 3; ++l) {
            pops[l - 1] = r.rho.population(l);
        }
        drift = r.max_trace_drift;
        break;
    }
    }
    print_populations(out, "P         ", pops);
    out << "drift     " << format_double(drift) << "\n";
    return Ok;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Cyclic three-level chirality discrimination simulator", "chiralsim"};
    app.require_subcommand(1);

    std::string config;
    std::string csv_out;
    std::string json_out;

    auto* protocol = app.add_subcommand("protocol", "run the three-step protocol for both chiralities");
    protocol->add_option("-c,--config", config, "run config (JSON)");
    protocol->add_option("--json", json_out, "write a JSON report");

    auto* sweep = app.add_subcommand("sweep", "evaluate the protocol over an error grid");
    sweep->add_option("-c,--config", config, "run config with a grid section")->required();
    sweep->add_option("-o,--out", csv_out, "CSV output path");
    sweep->add_option("--json", json_out, "JSON output path");

    double omega0 = 1.0;
    double phase12 = std::numbers::pi / 2.0;
    double phase23 = 0.0;
    auto* eigen = app.add_subcommand("eigen", "dressed eigensystem of the two-coupling Hamiltonian");
    eigen->add_option("--omega0", omega0, "coupling magnitude; negative means phase pi")->required();
    eigen->add_option("--phase12", phase12, "channel 1-2 phase (rad)");
    eigen->add_option("--phase23", phase23, "channel 2-3 phase (rad)");

    auto* evolve = app.add_subcommand("evolve", "propagate a raw schedule from an initial state");
    evolve->add_option("-c,--config", config, "evolve config (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return Ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return ConfigFailure;
    }

    try {
        if (*protocol) {
            return cmd_protocol(config, json_out, out);
        }
        if (*sweep) {
            return cmd_sweep(config, csv_out, json_out, out, err);
        }
        if (*eigen) {
            return cmd_eigen(omega0, phase12, phase23, out);
        }
        return cmd_evolve(config, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return ConfigFailure;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return IoFailure;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return NumericalFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return ConfigFailure;
    }
}

} // namespace chiralsim::cli
