#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "eoprop/chem/fingerprint.hpp"
#include "eoprop/chem/smiles.hpp"
#include "eoprop/cli/commands.hpp"
#include "eoprop/dataset/samples.hpp"
#include "eoprop/eval/metrics.hpp"
#include "eoprop/models/layers.hpp"

namespace py = pybind11;
using namespace eoprop;

namespace {

autodiff::Tensor to_tensor(const std::vector<std::vector<double>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    autodiff::Tensor t(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw py::value_error("ragged matrix");
        for (std::size_t j = 0; j < cols; ++j) t(i, j) = rows[i][j];
    }
    return t;
}

std::vector<std::vector<double>> to_rows(const autodiff::Tensor& t) {
    std::vector<std::vector<double>> out(t.rows());
    for (std::size_t i = 0; i < t.rows(); ++i) out[i].assign(t.row(i).begin(), t.row(i).end());
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fingerprints, metrics and the command-line pipeline for essential-oil property prediction.";

    py::register_exception<chem::SmilesError>(m, "SmilesError", PyExc_ValueError);
    py::register_exception<chem::FingerprintError>(m, "FingerprintError", PyExc_ValueError);
    py::register_exception<eval::DegenerateLabels>(m, "DegenerateLabels", PyExc_ValueError);

    py::class_<chem::Fingerprint>(m, "Fingerprint")
        .def_property_readonly("n_bits", &chem::Fingerprint::n_bits)
        .def_property_readonly("kind", [](const chem::Fingerprint& f) { return chem::to_string(f.kind()); })
        .def_property_readonly("radius", &chem::Fingerprint::radius)
        .def("on_bits", &chem::Fingerprint::on_bits)
        .def("popcount", &chem::Fingerprint::popcount)
        .def("to_hex", &chem::Fingerprint::to_hex)
        .def_static(
            "from_hex",
            [](const std::string& hex, std::size_t n_bits, const std::string& kind) {
                return chem::Fingerprint::from_hex(hex, n_bits, chem::parse_fingerprint_kind(kind));
            },
            py::arg("hex"), py::arg("n_bits"), py::arg("kind"))
        .def("__eq__", [](const chem::Fingerprint& a, const chem::Fingerprint& b) { return a == b; })
        .def("__repr__", [](const chem::Fingerprint& f) {
            return "<Fingerprint " + std::string(chem::to_string(f.kind())) + " " + std::to_string(f.n_bits()) +
                   " bits, " + std::to_string(f.popcount()) + " set>";
        });

    m.def(
        "parse_smiles",
        [](const std::string& smiles) {
            const chem::Molecule mol = chem::parse_smiles(smiles);
            py::list atoms, bonds;
            for (const auto& a : mol.atoms)
                atoms.append(py::dict(py::arg("element") = a.element, py::arg("aromatic") = a.aromatic,
                                      py::arg("charge") = a.charge, py::arg("hydrogens") = a.hydrogens));
            for (const auto& b : mol.bonds)
                bonds.append(py::make_tuple(b.begin, b.end, static_cast<int>(b.order)));
            return py::dict(py::arg("atoms") = atoms, py::arg("bonds") = bonds);
        },
        py::arg("smiles"), "Heavy-atom graph as {'atoms': [...], 'bonds': [(begin, end, order)]}.");

    m.def(
        "ecfp",
        [](const std::string& smiles, int radius, std::size_t n_bits) {
            return chem::ecfp(chem::parse_smiles(smiles), radius, n_bits);
        },
        py::arg("smiles"), py::arg("radius") = chem::kDefaultEcfpRadius, py::arg("n_bits") = chem::kDefaultEcfpBits);
    m.def("tanimoto", &chem::tanimoto, py::arg("a"), py::arg("b"));

    m.def(
        "auc", [](const std::vector<double>& s, const std::vector<int>& y) { return eval::auc(s, y); },
        py::arg("scores"), py::arg("labels"));
    m.def(
        "roc_points",
        [](const std::vector<double>& s, const std::vector<int>& y) {
            std::vector<std::pair<double, double>> out;
            for (const auto& p : eval::roc_points(s, y)) out.emplace_back(p.fpr, p.tpr);
            return out;
        },
        py::arg("scores"), py::arg("labels"), "List of (fpr, tpr) from (0, 0) to (1, 1).");
    m.def(
        "macro_auc",
        [](const std::vector<std::vector<double>>& s, const std::vector<std::vector<int>>& y) {
            const auto r = eval::macro_auc(s, y);
            return py::make_tuple(r.value, r.per_label);
        },
        py::arg("scores"), py::arg("labels"), "(macro value, per-label AUC or None) over [sample][label] inputs.");

    m.def("split_kfold", &dataset::split_kfold, py::arg("n"), py::arg("k") = dataset::kDefaultFolds,
          py::arg("seed") = dataset::kDefaultSeed);
    m.def(
        "normalize_adjacency",
        [](const std::vector<std::vector<double>>& w) { return to_rows(models::normalize_adjacency(to_tensor(w))); },
        py::arg("weights"));

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::vector<std::string> full{"eoprop"};
            full.insert(full.end(), args.begin(), args.end());
            std::vector<const char*> argv;
            for (const auto& a : full) argv.push_back(a.c_str());
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command line in-process; returns (exit_code, stdout, stderr).");
}
