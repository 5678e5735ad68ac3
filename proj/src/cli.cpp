#include "hsde/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hsde/config.hpp"
#include "hsde/ed.hpp"
#include "hsde/observables.hpp"
#include "hsde/parallel.hpp"
#include "hsde/pfqmc.hpp"
#include "hsde/validate.hpp"
#include "hsde/zerotemp.hpp"

#ifndef HSDE_VERSION
#define HSDE_VERSION "unknown"
#endif

namespace hsde {

namespace {

using json = nlohmann::ordered_json;

// Output table: schema id "<name>/<version>", fixed column order. Cells are
// JSON numbers, strings or null.
struct Table {
    std::string schema;
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
};

std::string cell_text(const json& v) {
    if (v.is_null()) return "";
    if (v.is_number_integer() || v.is_number_unsigned()) return std::to_string(v.get<long long>());
    if (v.is_number_float()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
        return buf;
    }
    return v.get<std::string>();
}

std::string render_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
        out += "\n";
    }
    return out;
}

std::string render_json(const Table& t) {
    json j;
    j["schema"] = t.schema;
    j["columns"] = t.columns;
    json rows = json::array();
    for (const auto& r : t.rows) rows.push_back(r);
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

std::vector<double> beta_list(const RunConfig& c) {
    return c.checkpoints.empty() ? std::vector<double>{c.beta} : c.checkpoints;
}

void guard_memory(const RunConfig& c, bool correlations) {
    const double nck = static_cast<double>(std::max<std::size_t>(1, c.checkpoints.size()));
    const double n = c.lattice().n_sites();
    const double per = 40.0 + (correlations ? 16.0 * n : 0.0);
    const double bytes = static_cast<double>(c.paths) * nck * per * (c.extrapolate ? 2.0 : 1.0);
    if (bytes > 4.0e9)
        throw ResourceError("ensemble storage of " + std::to_string(bytes / 1e9) + " GB exceeds the 4 GB guard");
}

Table cmd_energy(const RunConfig& c) {
    guard_memory(c, false);
    const PathEnsemble ens = run_paths(c.sim());
    Table t{"energy/1", {"beta_checkpoint", "observable", "value", "stderr", "n_paths", "n_failed"}, {}};
    for (std::size_t k = 0; k < ens.checkpoints.size(); ++k) {
        const double b = ens.checkpoints[k].beta;
        const Estimate e = girsanov_energy(ens, k);
        const Estimate d = mean_density(ens, k);
        const LogMean z = partition_ratio(ens, k);
        auto row = [&](const char* name, json v, json se) {
            t.rows.push_back({b, name, v, se, ens.n_paths(), ens.n_failed});
        };
        row("energy_per_site", e.value, e.stderr_);
        row("density_per_site", d.value, d.stderr_);
        row("log_weight_mean", z.log_mean, z.rel_stderr);
        row("n_effective", e.n_effective, nullptr);
    }
    return t;
}

Table cmd_correlations(const RunConfig& c) {
    guard_memory(c, true);
    SimConfig sim = c.sim();
    sim.correlations = true;
    const PathEnsemble ens = run_paths(sim);
    Table t{"correlations/1",
            {"beta_checkpoint", "observable", "site_ref", "site", "value", "stderr", "n_paths", "n_failed"},
            {}};
    const int n = sim.params.n_sites();
    for (std::size_t k = 0; k < ens.checkpoints.size(); ++k) {
        const double b = ens.checkpoints[k].beta;
        for (int j = 0; j < n; ++j) {
            const Estimate sp = spin_correlation(ens, k, j);
            const Estimate pr = pair_correlation(ens, k, j);
            t.rows.push_back({b, "spin", sim.corr_ref, j, sp.value, sp.stderr_, ens.n_paths(), ens.n_failed});
            t.rows.push_back({b, "pair", sim.corr_ref, j, pr.value, pr.stderr_, ens.n_paths(), ens.n_failed});
        }
    }
    return t;
}

Table cmd_pfqmc(const RunConfig& c) {
    const PfConfig pf = c.pf();
    const PfEnsemble ens = run_pfqmc(pf);
    const long ok = pf.paths - ens.n_failed;
    const double n = pf.params.n_sites();
    const Estimate e = untransformed_energy(ens);
    const LogMean z = untransformed_log_partition(ens, pf);
    Table t{"pfqmc/1", {"beta_checkpoint", "observable", "value", "stderr", "n_paths", "n_failed"}, {}};
    t.rows.push_back({ens.beta, "energy_per_site", e.value / n, e.stderr_ / n, ok, ens.n_failed});
    t.rows.push_back({ens.beta, "log_partition", z.log_mean, z.rel_stderr, ok, ens.n_failed});
    t.rows.push_back({ens.beta, "negative_fraction", ens.negative_fraction, nullptr, ok, ens.n_failed});
    return t;
}

Table cmd_ed(const RunConfig& c) {
    const ModelParams p = c.model();
    const FockSpace fs(p.n_sites());
    const EdSolver ed(build_fock_hamiltonian(fs, p));
    const bool corr = c.corr_site >= 0;
    Table t{"ed/1", {"beta", "energy_per_site"}, {}};
    if (corr) {
        t.columns.push_back("cspin_ij");
        t.columns.push_back("cpair_ij");
    }
    for (double b : beta_list(c)) {
        std::vector<json> row{b, ed.energy(b) / p.n_sites()};
        if (corr) {
            const Correlations x = ed_correlations(fs, ed, b, c.corr_ref, c.corr_site);
            row.push_back(x.spin);
            row.push_back(x.pair);
        }
        t.rows.push_back(row);
    }
    return t;
}

Table cmd_toy(const RunConfig& c) {
    Table t{"toy/1", {"beta_checkpoint", "observable", "value", "stderr", "n_paths", "n_failed"}, {}};
    for (double b : beta_list(c)) {
        const ToySpec spec = c.toy(b);
        const Estimate e = toy_expectation(spec);
        t.rows.push_back({b, "estimate_" + c.toy_mode, e.value, e.stderr_, spec.paths, 0});
        t.rows.push_back({b, "exact", toy_exact(spec), nullptr, nullptr, nullptr});
    }
    return t;
}

Table cmd_zerotemp(const RunConfig& c) {
    const ZeroTempConfig z = c.zerotemp();
    const V0Result r = minimize_scalar_ansatz(z, amplitude_grid(c.amp_min, c.amp_max, c.amp_step));
    Table t{"zerotemp/1", {"row", "amplitude", "v0_per_site", "energy_per_site"}, {}};
    double vmin = r.v0_values.front();
    for (std::size_t i = 0; i < r.amplitude_grid.size(); ++i) {
        t.rows.push_back({"scan", r.amplitude_grid[i], r.v0_values[i], nullptr});
        if (r.amplitude_grid[i] == r.argmin) vmin = r.v0_values[i];
    }
    t.rows.push_back({"argmin", r.argmin, vmin, r.energy});
    return t;
}

Table cmd_validate(const RunConfig& c, bool& all_pass) {
    const InvariantSuite s = run_invariant_suite(c.sim());
    Table t{"validate/1", {"mode", "identity", "max_violation", "status"}, {}};
    for (const auto& r : s.rows) t.rows.push_back({r.mode, r.identity, r.max_violation, r.pass ? "PASS" : "FAIL"});
    all_pass = s.all_pass();
    return t;
}

json config_object(const std::string& text) {
    json o = json::object();
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        const auto eq = line.find(" = ");
        if (eq != std::string::npos) o[line.substr(0, eq)] = line.substr(eq + 3);
    }
    return o;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    f << text;
}

int report(const char* kind, const std::string& msg, int code) {
    json j;
    j["error"] = kind;
    j["message"] = msg;
    std::cerr << j.dump() << std::endl;
    return code;
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
    CLI::App app{"Fermi-Hubbard thermodynamics from Girsanov-transformed matrix SDEs", "hsde"};
    app.require_subcommand(1, 1);
    std::string config_path, manifest_in, manifest_out, out_path, format, toy_mode;
    std::vector<std::string> sets;
    auto common = [&](CLI::App* s) {
        s->add_option("-c,--config", config_path, "key = value configuration file");
        s->add_option("--set", sets, "override: key=value (repeatable)");
        s->add_option("-o,--out", out_path, "output file (default: stdout)");
        s->add_option("--format", format, "csv or json");
        s->add_option("--manifest", manifest_out, "manifest file (default: <out>.manifest.json)");
        s->add_option("--from-manifest", manifest_in, "rerun the configuration stored in a manifest");
    };
    const char* names[] = {"energy", "correlations", "pfqmc", "ed", "toy", "zerotemp", "validate"};
    const char* help[] = {"Girsanov energy and density per checkpoint",
                          "spin and pair correlations C(ref, j) per checkpoint",
                          "pfaffian-weighted estimator without Girsanov transform",
                          "exact diagonalization oracle",
                          "scalar toy model, raw or transformed sampling",
                          "zero-temperature flow and V0 grid minimization",
                          "pathwise invariant suite for the representation"};
    std::vector<CLI::App*> subs;
    for (int i = 0; i < 7; ++i) {
        CLI::App* s = app.add_subcommand(names[i], help[i]);
        common(s);
        if (std::string(names[i]) == "toy") s->add_option("--mode", toy_mode, "raw or girsanov");
        subs.push_back(s);
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        return report("config", e.what(), exit_config);
    }
    std::string sub;
    for (auto* s : subs)
        if (s->parsed()) sub = s->get_name();

    const auto t0 = std::chrono::steady_clock::now();
    try {
        std::string text;
        if (!manifest_in.empty()) {
            std::ifstream f(manifest_in);
            if (!f) throw ConfigError("cannot read manifest '" + manifest_in + "'");
            const json m = json::parse(f, nullptr, false);
            if (m.is_discarded() || !m.contains("config_text")) throw ConfigError("malformed manifest");
            if (m.value("subcommand", sub) != sub) throw ConfigError("manifest belongs to subcommand " + m.value("subcommand", ""));
            text = m["config_text"].get<std::string>();
        } else if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw ConfigError("cannot read config file '" + config_path + "'");
            std::stringstream ss;
            ss << f.rdbuf();
            text = ss.str();
        }
        for (const auto& kv : sets) {
            if (kv.find('=') == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
            text += "\n" + kv;
        }
        if (!toy_mode.empty()) text += "\ntoy_mode = " + toy_mode;
        if (!out_path.empty()) text += "\npath = " + out_path;
        if (!format.empty()) text += "\nformat = " + format;
        const RunConfig cfg = parse_config(text);

        bool pass = true;
        Table t;
        if (sub == "energy") t = cmd_energy(cfg);
        else if (sub == "correlations") t = cmd_correlations(cfg);
        else if (sub == "pfqmc") t = cmd_pfqmc(cfg);
        else if (sub == "ed") t = cmd_ed(cfg);
        else if (sub == "toy") t = cmd_toy(cfg);
        else if (sub == "zerotemp") t = cmd_zerotemp(cfg);
        else t = cmd_validate(cfg, pass);

        const std::string body = cfg.format == "json" ? render_json(t) : render_csv(t);
        if (cfg.output_path.empty())
            std::cout << body;
        else
            write_file(cfg.output_path, body);

        const std::string mpath = !manifest_out.empty() ? manifest_out
                                  : cfg.output_path.empty() ? std::string()
                                                            : cfg.output_path + ".manifest.json";
        if (!mpath.empty()) {
            const std::string ctext = serialize_config(cfg);
            json m;
            m["tool"] = "hsde";
            m["version"] = HSDE_VERSION;
            m["subcommand"] = sub;
            m["schema"] = t.schema;
            m["columns"] = t.columns;
            m["seed"] = cfg.seed;
            m["workers"] = worker_count();
            m["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                         std::to_string(EIGEN_MINOR_VERSION);
            m["compiler"] = __VERSION__;
            m["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            m["config"] = config_object(ctext);
            m["config_text"] = ctext;
            write_file(mpath, m.dump(2) + "\n");
        }
        return pass ? exit_ok : exit_numerical;
    } catch (const ConfigError& e) {
        return report("config", e.what(), exit_config);
    } catch (const ResourceError& e) {
        return report("resource", e.what(), exit_resource);
    } catch (const NumericalError& e) {
        return report("numerical", e.what(), exit_numerical);
    } catch (const std::exception& e) {
        return report("numerical", e.what(), exit_numerical);
    }
}

}  // namespace hsde
