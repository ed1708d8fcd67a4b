// qcb: capacity bounds, teleportation-simulation diagnostics and QKD security
// thresholds for Gaussian and qubit channels.
//
// Exit codes: 0 success, 2 usage / unknown channel or parameter, 3 domain
// error (message names the violated precondition), 4 unwritable output path.

#include <clocale>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcb/bounds.hpp"
#include "qcb/channels.hpp"
#include "qcb/emit.hpp"
#include "qcb/qkd.hpp"
#include "qcb/telesim.hpp"
#include "../src/selftest.hpp"

namespace {

using namespace qcb;

struct GridSpec {
    double start = 0.0, stop = 1.0;
    int steps = 2;
    std::string scale = "linear";

    std::vector<double> points() const {
        if (steps < 2) throw std::invalid_argument("grid: steps must be >= 2 for sweeps");
        std::vector<double> xs(static_cast<std::size_t>(steps));
        if (scale == "log") {
            if (!(start > 0.0 && stop > 0.0))
                throw std::invalid_argument("grid: log scale needs positive endpoints");
            const double la = std::log(start), lb = std::log(stop);
            for (int i = 0; i < steps; ++i)
                xs[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * i / (steps - 1));
        } else {
            for (int i = 0; i < steps; ++i)
                xs[static_cast<std::size_t>(i)] = start + (stop - start) * i / (steps - 1);
        }
        return xs;
    }
};

GridSpec parse_grid(const std::string& s, const std::string& scale) {
    GridSpec g;
    g.scale = scale;
    const auto c1 = s.find(':');
    const auto c2 = s.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw CLI::ValidationError("grid", "expected start:stop:steps");
    try {
        g.start = std::stod(s.substr(0, c1));
        g.stop = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
        g.steps = std::stoi(s.substr(c2 + 1));
    } catch (const std::exception&) {
        throw CLI::ValidationError("grid", "expected numeric start:stop:steps");
    }
    if (g.steps < 2) throw CLI::ValidationError("grid", "steps must be >= 2 for sweeps");
    return g;
}

struct ChannelArgs {
    std::string channel;
    double eta = 0.5, nbar = 0.0, g = 2.0, xi = 0.1, p = 0.1;
    std::vector<double> pauli = {1.0, 0.0, 0.0, 0.0};

    bool is_cv() const {
        return channel == "pure-loss" || channel == "thermal-loss" || channel == "amplifier" ||
               channel == "qlim-amplifier" || channel == "additive-noise" || channel == "b1" ||
               channel == "identity";
    }
    bool is_dv() const {
        return channel == "pauli" || channel == "depolarizing" || channel == "dephasing" ||
               channel == "erasure" || channel == "amplitude-damping";
    }
    CanonicalForm cv_form() const {
        if (channel == "pure-loss") return CanonicalForm::pure_loss(eta);
        if (channel == "thermal-loss") return CanonicalForm::thermal_loss(eta, nbar);
        if (channel == "amplifier") return CanonicalForm::amplifier(g, nbar);
        if (channel == "qlim-amplifier") return CanonicalForm::qlim_amplifier(g);
        if (channel == "additive-noise") return CanonicalForm::additive_noise(xi);
        if (channel == "b1") return CanonicalForm::b1();
        return CanonicalForm::identity();
    }
    DVChannelSpec dv_spec() const {
        if (channel == "pauli") {
            if (pauli.size() != 4) throw std::invalid_argument("pauli: need --pauli p0 p1 p2 p3");
            return DVChannelSpec::pauli_channel(pauli[0], pauli[1], pauli[2], pauli[3]);
        }
        if (channel == "depolarizing") return DVChannelSpec::depolarizing(p);
        if (channel == "dephasing") return DVChannelSpec::dephasing(p);
        if (channel == "erasure") return DVChannelSpec::erasure(p);
        return DVChannelSpec::amplitude_damping(p);
    }
};

void add_channel_options(CLI::App* cmd, ChannelArgs& args) {
    cmd->add_option("--channel", args.channel,
                    "pure-loss | thermal-loss | amplifier | qlim-amplifier | additive-noise | b1 | identity"
                    " | pauli | depolarizing | dephasing | erasure | amplitude-damping")
        ->required();
    cmd->add_option("--eta", args.eta, "transmissivity (loss channels)");
    cmd->add_option("--nbar", args.nbar, "environmental mean thermal number");
    cmd->add_option("--g", args.g, "amplifier gain (> 1)");
    cmd->add_option("--xi", args.xi, "additive noise");
    cmd->add_option("--p", args.p, "probability parameter (qubit channels)");
    cmd->add_option("--pauli", args.pauli, "Pauli probabilities p0 p1 p2 p3")->expected(4);
}

int write_output(const std::string& path, const std::string& bytes) {
    if (path.empty() || path == "-") {
        std::cout << bytes;
        return 0;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot open output path: " << path << "\n";
        return 4;
    }
    f << bytes;
    if (!f.good()) {
        std::cerr << "error: short write to output path: " << path << "\n";
        return 4;
    }
    return 0;
}

std::string render(const Table& t, const std::string& format, const std::string& command,
                   const std::map<std::string, std::string>& params) {
    if (format == "json") return to_json(command, params, t).dump(2) + "\n";
    return to_csv(t);
}

Table bound_table(const BoundResult& r) {
    Table t;
    t.columns = {"value", "kind", "formula", "channel", "hierarchy"};
    std::vector<Cell> row;
    row.push_back(r.infinite ? Cell::inf() : Cell(r.value));
    row.emplace_back(to_string(r.kind));
    row.emplace_back(r.formula_id);
    row.emplace_back(r.channel);
    row.emplace_back(r.hierarchy);
    t.rows.push_back(std::move(row));
    return t;
}

BoundResult compute_bound(const ChannelArgs& args) {
    if (args.is_cv()) return bound_cv(args.cv_form());
    if (args.is_dv()) return flux_dv(args.dv_spec());
    throw CLI::ValidationError("--channel", "unknown channel: " + args.channel);
}

int cmd_bound(const ChannelArgs& args, const std::string& format, const std::string& out,
              bool capacity_only) {
    const BoundResult r = compute_bound(args);
    if (capacity_only && r.kind != BoundKind::Capacity)
        throw std::domain_error("capacity: channel is not distillable (flux bound is not a capacity); "
                                "use `bound` for the upper bound");
    return write_output(out, render(bound_table(r), format, capacity_only ? "capacity" : "bound",
                                    {{"channel", args.channel}}));
}

int cmd_sweep(ChannelArgs args, const std::string& sweep_param, const GridSpec& grid,
              const std::string& format, const std::string& out) {
    const std::vector<double> xs = grid.points();
    Table t;
    std::string value_col;
    for (const double x : xs) {
        if (sweep_param == "eta") args.eta = x;
        else if (sweep_param == "nbar") args.nbar = x;
        else if (sweep_param == "g") args.g = x;
        else if (sweep_param == "xi") args.xi = x;
        else if (sweep_param == "p") args.p = x;
        else throw CLI::ValidationError("--sweep-param", "unknown parameter: " + sweep_param);
        const BoundResult r = compute_bound(args);
        if (value_col.empty()) {
            value_col = r.formula_id;
            t.columns = {sweep_param, value_col, "kind"};
        }
        std::vector<Cell> row;
        row.emplace_back(x);
        row.push_back(r.infinite ? Cell::inf() : Cell(r.value));
        row.emplace_back(to_string(r.kind));
        t.rows.push_back(std::move(row));
    }
    return write_output(out, render(t, format, "sweep",
                                    {{"channel", args.channel}, {"param", sweep_param}}));
}

int cmd_qkd(const GridSpec& grid, const std::string& format, const std::string& out) {
    const std::vector<double> dbs = grid.points();
    const auto curves = sweep_thresholds(dbs);
    Table t;
    t.columns = {"loss_db"};
    for (const auto& c : curves) t.columns.push_back(c.protocol);
    for (std::size_t i = 0; i < dbs.size(); ++i) {
        std::vector<Cell> row;
        row.emplace_back(dbs[i]);
        for (const auto& c : curves) row.emplace_back(c.points[i].second);
        t.rows.push_back(std::move(row));
    }
    return write_output(out, render(t, format, "qkd-thresholds",
                                    {{"db", format_sig12(grid.start) + ":" + format_sig12(grid.stop) + ":" +
                                               std::to_string(grid.steps)}}));
}

int cmd_strong_converse(const ChannelArgs& args, int n, double eps, const std::string& variant,
                        bool corrected, double mu, double energy, const std::string& format,
                        const std::string& out) {
    if (!args.is_cv())
        throw std::domain_error("strong-converse: only Gaussian canonical forms carry variance formulas");
    const CanonicalForm form = args.cv_form();

    Table t;
    if (corrected) {
        const CorrectedBound c = corrected_pipeline(form, n, eps, mu, energy);
        t.columns = {"value", "kind", "formula", "channel", "n", "eps",
                     "mu", "N", "delta", "eps_tp", "eps_composed"};
        std::vector<Cell> row;
        row.push_back(c.bound.infinite ? Cell::inf() : Cell(c.bound.value));
        row.emplace_back(to_string(c.bound.kind));
        row.emplace_back(c.bound.formula_id);
        row.emplace_back(c.bound.channel);
        row.emplace_back(static_cast<double>(n));
        row.emplace_back(eps);
        row.emplace_back(mu);
        row.emplace_back(energy);
        row.emplace_back(c.budget.delta);
        row.emplace_back(c.budget.eps_tp);
        row.emplace_back(c.budget.eps_composed);
        t.rows.push_back(std::move(row));
    } else {
        StrongConverseParams p;
        p.n_uses = n;
        p.security_eps = eps;
        if (variant == "distillable") p.variant = StrongConverseParams::Variant::Distillable;
        else if (variant == "chebyshev") p.variant = StrongConverseParams::Variant::Chebyshev;
        else if (variant == "gaussian-quantile") p.variant = StrongConverseParams::Variant::GaussianQuantile;
        else throw CLI::ValidationError("--variant", "unknown variant: " + variant);
        const BoundResult r = sc_bound(form, p);
        t.columns = {"value", "kind", "formula", "channel", "n", "eps", "residual"};
        std::vector<Cell> row;
        row.push_back(r.infinite ? Cell::inf() : Cell(r.value));
        row.emplace_back(to_string(r.kind));
        row.emplace_back(r.formula_id);
        row.emplace_back(r.channel);
        row.emplace_back(static_cast<double>(n));
        row.emplace_back(eps);
        row.emplace_back(r.residual.empty() ? "none" : r.residual);
        t.rows.push_back(std::move(row));
    }
    return write_output(out, render(t, format, "strong-converse", {{"channel", args.channel}}));
}

int cmd_sim_error(const ChannelArgs& args, double mu, double energy, int n, double eps,
                  const std::string& mu_grid, const std::string& input_grid, const std::string& format,
                  const std::string& out) {
    if (!args.is_cv()) throw std::domain_error("sim-error: channel must be a Gaussian canonical form");
    const CanonicalForm form = args.cv_form();

    if (!mu_grid.empty() || !input_grid.empty()) {
        if (mu_grid.empty() || input_grid.empty())
            throw CLI::ValidationError("--mu-grid", "need both --mu-grid and --input-grid");
        const std::vector<double> mus = parse_grid(mu_grid, "log").points();
        const std::vector<double> mts = parse_grid(input_grid, "log").points();
        const ConvergenceGrid g = convergence_diagnostic(mus, mts);
        Table t;
        t.columns = {"mu"};
        for (const double mt : mts) t.columns.push_back("infid_mu_in_" + format_sig12(mt));
        for (std::size_t i = 0; i < mus.size(); ++i) {
            std::vector<Cell> row;
            row.emplace_back(mus[i]);
            for (std::size_t j = 0; j < mts.size(); ++j)
                row.emplace_back(g.infidelity(static_cast<int>(i), static_cast<int>(j)));
            t.rows.push_back(std::move(row));
        }
        return write_output(out, render(t, format, "sim-error", {{"channel", args.channel}}));
    }

    const double delta = sim_error_budget(form, mu, energy);
    const ErrorBudget budget = peel(n, delta, eps);
    Table t;
    t.columns = {"mu", "N", "delta", "n", "eps", "eps_tp", "eps_composed"};
    t.rows.push_back({Cell(mu), Cell(energy), Cell(delta), Cell(static_cast<double>(n)), Cell(eps),
                      Cell(budget.eps_tp), Cell(budget.eps_composed)});
    return write_output(out, render(t, format, "sim-error", {{"channel", args.channel}}));
}

int cmd_selftest() {
    const auto results = qcb::selftest::run_all();
    int failures = 0;
    for (const auto& r : results) {
        const char* tag = r.informational ? "INFO" : (r.passed ? "PASS" : "FAIL");
        if (!r.passed && !r.informational) ++failures;
        std::cout << "[" << tag << "] " << r.name;
        if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
        std::cout << "\n";
    }
    std::cout << results.size() << " checks, " << failures << " failures\n";
    return failures > 0 ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");

    CLI::App app{"two-way capacity bounds, channel-simulation diagnostics and QKD thresholds"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "optional key=value file (keys as <subcommand>.<option>); flags take precedence");

    ChannelArgs ch;
    std::string format = "csv", out, variant = "chebyshev";
    std::string sweep_param = "eta", grid_str = "0:1:11", scale = "linear", db_str = "0:30:61";
    std::string mu_grid, input_grid;
    int n_uses = 100;
    double eps = 0.01, mu = 100.0, energy = 10.0;
    bool corrected = false;

    const auto add_io = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "csv | json");
        cmd->add_option("--out", out, "output path (default stdout)");
    };

    CLI::App* bound = app.add_subcommand("bound", "single two-way capacity upper bound");
    add_channel_options(bound, ch);
    add_io(bound);

    CLI::App* capacity = app.add_subcommand("capacity", "exact two-way capacity (distillable channels)");
    add_channel_options(capacity, ch);
    add_io(capacity);

    CLI::App* sweep = app.add_subcommand("sweep", "bound curve over one channel parameter");
    add_channel_options(sweep, ch);
    sweep->add_option("--sweep-param", sweep_param, "eta | nbar | g | xi | p")->required();
    sweep->add_option("--grid", grid_str, "start:stop:steps")->required();
    sweep->add_option("--scale", scale, "linear | log");
    add_io(sweep);

    CLI::App* qkd = app.add_subcommand("qkd-thresholds", "excess-noise security thresholds vs loss");
    qkd->add_option("--db", db_str, "loss grid in dB, start:stop:steps (0 dB uses eta = 1 - 1e-12)");
    add_io(qkd);

    CLI::App* sc = app.add_subcommand("strong-converse", "finite-n strong-converse bound");
    add_channel_options(sc, ch);
    sc->add_option("--n", n_uses, "channel uses")->required();
    sc->add_option("--eps", eps, "security parameter in (0,1)")->required();
    sc->add_option("--variant", variant, "chebyshev | gaussian-quantile | distillable");
    sc->add_flag("--corrected", corrected, "teleportation-simulation corrected pipeline");
    sc->add_option("--mu", mu, "simulation energy (corrected pipeline)");
    sc->add_option("--energy", energy, "input-alphabet photon constraint N (corrected pipeline)");
    add_io(sc);

    CLI::App* sim = app.add_subcommand("sim-error", "simulation error surrogate and budget");
    add_channel_options(sim, ch);
    sim->add_option("--mu", mu, "simulation energy mu > 1/2");
    sim->add_option("--energy", energy, "input-alphabet photon constraint N");
    sim->add_option("--n", n_uses, "channel uses for the peeled budget");
    sim->add_option("--eps", eps, "security parameter for the composed budget");
    sim->add_option("--mu-grid", mu_grid, "log grid start:stop:steps for the convergence matrix");
    sim->add_option("--input-grid", input_grid, "log grid start:stop:steps of input energies");
    add_io(sim);

    app.add_subcommand("selftest", "run every invariant and acceptance suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (bound->parsed()) return cmd_bound(ch, format, out, false);
        if (capacity->parsed()) return cmd_bound(ch, format, out, true);
        if (sweep->parsed()) return cmd_sweep(ch, sweep_param, parse_grid(grid_str, scale), format, out);
        if (qkd->parsed()) return cmd_qkd(parse_grid(db_str, "linear"), format, out);
        if (sc->parsed())
            return cmd_strong_converse(ch, n_uses, eps, variant, corrected, mu, energy, format, out);
        if (sim->parsed()) return cmd_sim_error(ch, mu, energy, n_uses, eps, mu_grid, input_grid, format, out);
        return cmd_selftest();
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
