#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hsde/cli.hpp"
#include "hsde/config.hpp"
#include "hsde/ed.hpp"
#include "hsde/pfqmc.hpp"

namespace py = pybind11;
using namespace hsde;

namespace {

py::dict estimate_dict(const Estimate& e) {
    py::dict d;
    d["value"] = e.value;
    d["stderr"] = e.stderr_;
    d["n_effective"] = e.n_effective;
    return d;
}

RunConfig config_from(const std::string& text, const py::dict& overrides) {
    std::string t = text;
    for (auto kv : overrides) t += "\n" + py::str(kv.first).cast<std::string>() + " = " + py::str(kv.second).cast<std::string>();
    return parse_config(t);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fermi-Hubbard thermodynamics from Girsanov-transformed matrix SDEs";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);

    m.def("run", [](const std::vector<std::string>& args) { return run_command(args); }, py::arg("args"),
          "Runs the hsde command line and returns its exit code.");

    m.def(
        "energy",
        [](const std::string& text, const py::dict& overrides) {
            const RunConfig c = config_from(text, overrides);
            PathEnsemble ens;
            {
                py::gil_scoped_release nogil;
                ens = run_paths(c.sim());
            }
            py::list rows;
            for (std::size_t k = 0; k < ens.checkpoints.size(); ++k) {
                py::dict r = estimate_dict(girsanov_energy(ens, k));
                r["beta"] = ens.checkpoints[k].beta;
                r["n_paths"] = ens.n_paths();
                r["n_failed"] = ens.n_failed;
                rows.append(r);
            }
            return rows;
        },
        py::arg("config") = "", py::arg("overrides") = py::dict(),
        "Energy per site at each checkpoint for a key = value configuration.");

    m.def(
        "ed_energy",
        [](const std::string& text, const py::dict& overrides) {
            const RunConfig c = config_from(text, overrides);
            const FockSpace fs(c.lattice().n_sites());
            const EdSolver ed(build_fock_hamiltonian(fs, c.model()));
            return ed.energy(c.beta) / fs.n_sites();
        },
        py::arg("config") = "", py::arg("overrides") = py::dict(), "Exact energy per site at beta.");

    m.def(
        "toy",
        [](double mu, double beta, long paths, long steps, const std::string& mode, std::uint64_t seed) {
            ToySpec s;
            s.mu = mu;
            s.beta = beta;
            s.dt = beta > 0 ? beta / steps : 1.0;
            s.paths = paths;
            s.mode = parse_toy_mode(mode);
            s.seed = seed;
            py::dict d = estimate_dict(toy_expectation(s));
            d["exact"] = toy_exact(s);
            return d;
        },
        py::arg("mu") = 2.0, py::arg("beta") = 1.0, py::arg("paths") = 10000, py::arg("steps") = 2000,
        py::arg("mode") = "girsanov", py::arg("seed") = 1);

    m.def("pfaffian", py::overload_cast<const MatC&>(&pfaffian), py::arg("a"), "Pfaffian of a skew matrix.");
}
