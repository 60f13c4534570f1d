#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "logmaj/funcparse.hpp"
#include "logmaj/probe.hpp"
#include "logmaj/suite.hpp"
#include "logmaj/version.hpp"

namespace py = pybind11;
using namespace logmaj;

namespace {

py::object json_to_py(const nlohmann::json& j) {
    switch (j.type()) {
        case nlohmann::json::value_t::null: return py::none();
        case nlohmann::json::value_t::boolean: return py::bool_(j.get<bool>());
        case nlohmann::json::value_t::number_integer: return py::int_(j.get<long long>());
        case nlohmann::json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
        case nlohmann::json::value_t::number_float: return py::float_(j.get<double>());
        case nlohmann::json::value_t::string: return py::str(j.get<std::string>());
        case nlohmann::json::value_t::array: {
            py::list out;
            for (const auto& item : j) out.append(json_to_py(item));
            return out;
        }
        case nlohmann::json::value_t::object: {
            py::dict out;
            for (const auto& [key, value] : j.items()) out[py::str(key)] = json_to_py(value);
            return out;
        }
        default: return py::none();
    }
}

py::object outcome_to_py(const CheckOutcome& o) { return json_to_py(o.to_json()); }

ProbeTarget parse_target(const std::string& s) {
    if (s == "eq4") return ProbeTarget::Eq4;
    if (s == "eq5") return ProbeTarget::Eq5;
    throw Error("target must be 'eq4' or 'eq5'");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Numerical verification of eigenvalue log-majorisation inequalities";
    m.attr("__version__") = LOGMAJ_VERSION;

    // base first: translators run in reverse registration order
    py::register_exception<Error>(m, "LogmajError", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "FunctionParseError", PyExc_ValueError);
    py::register_exception<EvalError>(m, "FunctionEvalError", PyExc_ValueError);

    py::class_<ScalarFunction>(m, "ScalarFunction")
        .def("__call__", [](const ScalarFunction& f, double x) { return f(x); })
        .def("derivative", [](const ScalarFunction& f, double x) { return f.derivative(x); })
        .def_property_readonly("label", &ScalarFunction::label)
        .def_property_readonly("domain_end", &ScalarFunction::domain_end)
        .def("__repr__",
             [](const ScalarFunction& f) { return "<ScalarFunction " + f.label() + ">"; });

    m.def("parse_function",
          [](const std::string& expr) { return parse_function(expr); },
          py::arg("expr"), "Parse an expression in x into a ScalarFunction");
    m.def("builtin", &builtin, py::arg("name"), py::arg("params") = std::vector<double>{},
          "Catalog function: power(t), min_clip(c), one_minus_exp, exp, constant(k), identity, x_exp_x");
    m.def("geometric_mean", &geometric_mean, py::arg("f1"), py::arg("f2"), py::arg("p"));
    m.def("numeric_inverse", &numeric_inverse, py::arg("f"), py::arg("lo"), py::arg("hi"));
    m.def("associated", &associated, py::arg("f"), py::arg("y"), "F(y) = log f(e^y)");
    m.def(
        "classify",
        [](const ScalarFunction& f, double lo, double hi, int grid_size) {
            return json_to_py(classify(f, lo, hi, grid_size).to_json());
        },
        py::arg("f"), py::arg("lo") = 0.1, py::arg("hi") = 3.0, py::arg("grid_size") = 33);
    m.def("pretty_print", [](const std::string& expr) { return pretty_print(parse(expr)); },
          py::arg("expr"), "Normalised rendering of a parsed expression");

    py::class_<PsdMatrix>(m, "PsdMatrix")
        .def_static("from_entries",
                    [](const std::vector<std::vector<double>>& rows) {
                        return PsdMatrix::from_entries(Matrix::from_rows(rows));
                    })
        .def_property_readonly("dim", &PsdMatrix::dim)
        .def_property_readonly("entries", [](const PsdMatrix& m) { return m.entries().rows(); })
        .def_property_readonly("spectrum",
                               [](const PsdMatrix& m) { return m.spectrum().values(); })
        .def_property_readonly("eigenvectors",
                               [](const PsdMatrix& m) { return m.eigenvectors().rows(); })
        .def("to_json", [](const PsdMatrix& m) { return json_to_py(m.to_json()); })
        .def("__repr__", [](const PsdMatrix& m) {
            return "<PsdMatrix dim=" + std::to_string(m.dim()) + ">";
        });

    py::class_<CommutingQuadruple>(m, "CommutingQuadruple")
        .def_readonly("r1", &CommutingQuadruple::r1)
        .def_readonly("r2", &CommutingQuadruple::r2)
        .def_readonly("s1", &CommutingQuadruple::s1)
        .def_readonly("s2", &CommutingQuadruple::s2);

    m.def("random_psd",
          py::overload_cast<int, double, double, std::uint64_t>(&random_psd),
          py::arg("dim"), py::arg("lo"), py::arg("hi"), py::arg("seed"));
    m.def("random_commuting_quadruple", &random_commuting_quadruple, py::arg("dim"), py::arg("lo"),
          py::arg("hi"), py::arg("seed"));
    m.def("matrix_function", &matrix_function, py::arg("m"), py::arg("f"));
    m.def("product_spectrum",
          [](const PsdMatrix& a, const PsdMatrix& b) { return product_spectrum(a, b).values(); },
          py::arg("a"), py::arg("b"), "Eigenvalues of AB via A^{1/2} B A^{1/2}, sorted non-increasing");
    m.def("mat_sqrt", &mat_sqrt, py::arg("m"));
    m.def("compound", &compound, py::arg("m"), py::arg("k"));
    m.def("eig_sym", [](const PsdMatrix& m) {
        const EigResult r = eig_sym(m);
        return py::make_tuple(r.spectrum.values(), r.vectors.rows());
    });
    m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("dim"), py::arg("trial"));

    m.def(
        "log_submajorize",
        [](const std::vector<double>& x, const std::vector<double>& y, double tol) {
            return json_to_py(log_submajorize(Spectrum(x), Spectrum(y), tol).to_json());
        },
        py::arg("x"), py::arg("y"), py::arg("tolerance") = 1e-9);
    m.def(
        "weak_majorize",
        [](const std::vector<double>& x, const std::vector<double>& y, double tol) {
            return json_to_py(weak_majorize(Spectrum(x), Spectrum(y), tol).to_json());
        },
        py::arg("x"), py::arg("y"), py::arg("tolerance") = 1e-9);

    m.def(
        "check_alt_classic",
        [](const PsdMatrix& a, const PsdMatrix& b, double t, double tol) {
            return outcome_to_py(check_alt_classic(a, b, t, AltDirection::Auto, tol));
        },
        py::arg("a"), py::arg("b"), py::arg("t"), py::arg("tolerance") = 1e-9);
    m.def(
        "check_falt",
        [](const PsdMatrix& a, const PsdMatrix& b, const ScalarFunction& f, double tol) {
            return outcome_to_py(check_falt(a, b, f, tol));
        },
        py::arg("a"), py::arg("b"), py::arg("f"), py::arg("tolerance") = 1e-9);
    m.def(
        "check_ralt",
        [](const PsdMatrix& x, const PsdMatrix& y, const ScalarFunction& g, double tol) {
            return outcome_to_py(check_ralt(x, y, g, tol));
        },
        py::arg("x"), py::arg("y"), py::arg("g"), py::arg("tolerance") = 1e-9);
    m.def(
        "check_lemma_u1",
        [](const CommutingQuadruple& q, double tol) { return outcome_to_py(check_lemma_u1(q, tol)); },
        py::arg("q"), py::arg("tolerance") = 1e-9);
    m.def(
        "check_prop_u2",
        [](const CommutingQuadruple& q, int k, double tol) {
            return outcome_to_py(check_prop_u2(q, k, tol));
        },
        py::arg("q"), py::arg("k"), py::arg("tolerance") = 1e-9);
    m.def(
        "check_prop_u3",
        [](const CommutingQuadruple& q, std::optional<std::vector<double>> p_grid, double tol) {
            return outcome_to_py(check_prop_u3(q, p_grid ? *p_grid : default_p_grid(), tol));
        },
        py::arg("q"), py::arg("p_grid") = py::none(), py::arg("tolerance") = 1e-9);
    m.def(
        "check_min_lemma",
        [](const PsdMatrix& a, const PsdMatrix& b, double tol) {
            return outcome_to_py(check_min_lemma(a, b, tol));
        },
        py::arg("a"), py::arg("b"), py::arg("tolerance") = 1e-9);
    m.def(
        "check_prop_convex",
        [](const PsdMatrix& a, const PsdMatrix& b, const ScalarFunction& f1,
           const ScalarFunction& f2, double p, double tol) {
            return outcome_to_py(check_prop_convex(a, b, f1, f2, p, tol));
        },
        py::arg("a"), py::arg("b"), py::arg("f1"), py::arg("f2"), py::arg("p") = 0.5,
        py::arg("tolerance") = 1e-9);
    m.def(
        "check_gt_complement",
        [](const PsdMatrix& a, const PsdMatrix& b, double tol) {
            return outcome_to_py(check_gt_complement(a, b, tol));
        },
        py::arg("a"), py::arg("b"), py::arg("tolerance") = 1e-9);
    m.def(
        "check_lidskii",
        [](const PsdMatrix& a, const PsdMatrix& b, int k, double tol) {
            return outcome_to_py(check_lidskii(a, b, k, tol));
        },
        py::arg("a"), py::arg("b"), py::arg("k"), py::arg("tolerance") = 1e-9);

    m.def("build_pair", [](double a, double b, double theta) {
        auto [ma, mb] = build_pair({a, b, theta});
        return py::make_tuple(std::move(ma), std::move(mb));
    });
    m.def(
        "expansion_coefficients",
        [](const ScalarFunction& f, double a, double b, const std::string& target) {
            return json_to_py(expansion_coefficients(f, a, b, parse_target(target)).to_json());
        },
        py::arg("f"), py::arg("a"), py::arg("b"), py::arg("target") = "eq4");
    m.def(
        "theta_sweep",
        [](const ScalarFunction& f, double a, double b, const std::vector<double>& thetas) {
            py::list out;
            for (const SweepRow& row : theta_sweep(f, a, b, thetas)) {
                py::dict d;
                d["theta"] = row.theta;
                d["lhs"] = row.lhs;
                d["rhs"] = row.rhs;
                d["margin"] = row.margin;
                out.append(std::move(d));
            }
            return out;
        },
        py::arg("f"), py::arg("a"), py::arg("b"), py::arg("thetas") = default_thetas());
    m.def(
        "search_counterexample",
        [](const ScalarFunction& f, const std::string& target, double lo, double hi) {
            ProbeGrid grid;
            grid.lo = lo;
            grid.hi = hi;
            return json_to_py(search_counterexample(f, parse_target(target), grid).to_json());
        },
        py::arg("f"), py::arg("target") = "eq4", py::arg("lo") = 0.25, py::arg("hi") = 4.0);

    m.def(
        "run_suite",
        [](const std::string& check, const std::vector<int>& dims, int trials, std::uint64_t seed,
           double lo, double hi, double tolerance, const std::vector<ScalarFunction>& functions) {
            SuiteConfig cfg;
            cfg.check = check;
            cfg.dims = dims;
            cfg.trials = trials;
            cfg.master_seed = seed;
            cfg.lo = lo;
            cfg.hi = hi;
            cfg.tolerance = tolerance;
            cfg.functions = functions;
            return json_to_py(run_suite(cfg).to_json(false));
        },
        py::arg("check"), py::arg("dims") = std::vector<int>{2, 3}, py::arg("trials") = 50,
        py::arg("seed") = 1, py::arg("lo") = 0.1, py::arg("hi") = 2.5, py::arg("tolerance") = 1e-9,
        py::arg("functions") = std::vector<ScalarFunction>{});
}
