// Python module singser._core.
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "singser/error.hpp"
#include "singser/field.hpp"
#include "singser/ideals.hpp"
#include "singser/primes.hpp"
#include "singser/singular_series.hpp"
#include "singser/smoothing.hpp"
#include "singser/statistics.hpp"

namespace py = pybind11;
using namespace singser;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Quadratic-field singular series, prime grids and short-interval variance";

    // Raised with args (code, message), code being e.g. "out_of_extent".
    static py::exception<Error> error(m, "Error", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, py::make_tuple(error_code_name(e.code()), e.what()));
        }
    });

    py::enum_<BasisKind>(m, "BasisKind").value("SqrtD", BasisKind::SqrtD).value("Half", BasisKind::Half);

    py::class_<QuadInt>(m, "QuadInt")
        .def(py::init<>())
        .def(py::init([](std::int64_t k1, std::int64_t k2) { return QuadInt{k1, k2}; }), py::arg("k1"), py::arg("k2"))
        .def(py::init([](std::pair<std::int64_t, std::int64_t> c) { return QuadInt{c.first, c.second}; }))
        .def_readwrite("k1", &QuadInt::k1)
        .def_readwrite("k2", &QuadInt::k2)
        .def(py::self == py::self)
        .def("__repr__", [](const QuadInt& a) {
            return "QuadInt(" + std::to_string(a.k1) + ", " + std::to_string(a.k2) + ")";
        });
    py::implicitly_convertible<py::tuple, QuadInt>();

    py::class_<FieldSpec>(m, "Field")
        .def(py::init(&FieldSpec::parse), py::arg("spec"))
        .def_static("maximal", &FieldSpec::maximal, py::arg("D"))
        .def_property_readonly("D", &FieldSpec::D)
        .def_property_readonly("basis", &FieldSpec::basis)
        .def_property_readonly("discriminant", &FieldSpec::discriminant)
        .def("norm", &FieldSpec::norm)
        .def("mul", &FieldSpec::mul)
        .def("conjugate", &FieldSpec::conjugate)
        .def("divide_exact", &FieldSpec::divide_exact)
        .def("is_unit", &FieldSpec::is_unit)
        .def("__str__", &FieldSpec::to_string)
        .def("__repr__", [](const FieldSpec& F) { return "Field('" + F.to_string() + "')"; });

    py::class_<TestFunction>(m, "TestFunction")
        .def(py::init(&TestFunction::parse), py::arg("kind"))
        .def("__call__", py::overload_cast<double, double>(&TestFunction::operator(), py::const_))
        .def_property_readonly("name", &TestFunction::name)
        .def_property_readonly("value_at_zero", &TestFunction::value_at_zero)
        .def_property_readonly("fourier_at_zero", &TestFunction::fourier_at_zero);

    py::class_<ResidueValue>(m, "ResidueValue")
        .def_readonly("value", &ResidueValue::value)
        .def_readonly("error_bound", &ResidueValue::error_bound)
        .def_readonly("method", &ResidueValue::method)
        .def_readonly("terms", &ResidueValue::terms);
    m.def("residue_rk", &residue_rk, py::arg("field"), py::arg("tol") = 1e-8,
          py::arg("max_terms") = std::int64_t{2'000'000'000});

    py::class_<SingularValue>(m, "SingularValue")
        .def_readonly("value", &SingularValue::value)
        .def_readonly("cutoff", &SingularValue::cutoff)
        .def_readonly("tail_bound", &SingularValue::tail_bound);
    m.def("singular_series", &singular_series, py::arg("field"), py::arg("eta"), py::arg("cutoff"));
    m.def("singular_series_rational", &singular_series_rational, py::arg("h"), py::arg("cutoff"));
    m.def(
        "montgomery_sum",
        [](std::int64_t H, std::int64_t cutoff) { return montgomery_sum(H, RationalSingularTable(cutoff)); },
        py::arg("H"), py::arg("cutoff") = std::int64_t{10'000'000});

    py::class_<SmoothedSum>(m, "SmoothedSum")
        .def_readonly("H", &SmoothedSum::H)
        .def_readonly("sum", &SmoothedSum::sum)
        .def_readonly("uncertainty", &SmoothedSum::uncertainty)
        .def_readonly("terms", &SmoothedSum::terms);
    m.def(
        "singular_sum_smoothed",
        [](const FieldSpec& F, const TestFunction& w, double H, std::int64_t cutoff, unsigned threads) {
            py::gil_scoped_release release;
            return singular_sum_smoothed(SingularSeriesTable(F, cutoff), w, H, threads);
        },
        py::arg("field"), py::arg("w"), py::arg("H"), py::arg("cutoff"), py::arg("threads") = 1u);
    m.def("mobius_phi_partial_sum", &mobius_phi_partial_sum, py::arg("field"), py::arg("Y"));

    py::class_<PrefixGrid>(m, "PrefixGrid")
        .def_property_readonly("field", &PrefixGrid::field)
        .def_property_readonly("extent", &PrefixGrid::extent)
        .def_property_readonly("total_count", &PrefixGrid::total_count)
        .def_property_readonly("total_weight", &PrefixGrid::total_weight)
        .def("count", &count_primes_box, py::arg("x1"), py::arg("x2"), py::arg("H"))
        .def("log_weight", &log_weight_box, py::arg("x1"), py::arg("x2"), py::arg("H"))
        .def("save", &save_grid, py::arg("path"));
    m.def(
        "build_grid",
        [](const FieldSpec& F, std::int64_t R, unsigned threads) {
            py::gil_scoped_release release;
            return build_grid(F, R, threads);
        },
        py::arg("field"), py::arg("extent"), py::arg("threads") = 1u);
    m.def("load_grid", &load_grid, py::arg("path"));
    m.def("is_prime_element", &is_prime_element, py::arg("field"), py::arg("alpha"));

    py::class_<VarianceRow>(m, "VarianceRow")
        .def_readonly("delta", &VarianceRow::delta)
        .def_readonly("H", &VarianceRow::H)
        .def_readonly("E", &VarianceRow::E)
        .def_readonly("V", &VarianceRow::V)
        .def_readonly("ratio", &VarianceRow::ratio)
        .def_readonly("target", &VarianceRow::target)
        .def_readonly("n_samples", &VarianceRow::n_samples);
    m.def(
        "variance_profile",
        [](const FieldSpec& F, double X, const std::vector<double>& deltas, const std::string& sampler,
           std::uint64_t seed, unsigned threads) {
            const auto s = Sampler::parse(sampler, seed);
            py::gil_scoped_release release;
            return variance_profile(F, X, deltas, s, threads).rows;
        },
        py::arg("field"), py::arg("X"), py::arg("deltas"), py::arg("sampler") = "exhaustive",
        py::arg("seed") = std::uint64_t{0}, py::arg("threads") = 1u);

    py::class_<ZBaselineRow>(m, "ZBaselineRow")
        .def_readonly("X", &ZBaselineRow::X)
        .def_readonly("H", &ZBaselineRow::H)
        .def_readonly("delta", &ZBaselineRow::delta)
        .def_readonly("E", &ZBaselineRow::E)
        .def_readonly("V_prime", &ZBaselineRow::V_prime)
        .def_readonly("V_lambda", &ZBaselineRow::V_lambda)
        .def_readonly("ratio_prime", &ZBaselineRow::ratio_prime)
        .def_readonly("ratio_lambda", &ZBaselineRow::ratio_lambda);
    m.def("z_baseline", &z_baseline, py::arg("X"), py::arg("delta"));
    m.def("prime_power_correction", &prime_power_correction, py::arg("x"), py::arg("H"));

    m.def(
        "prime_ideal_norms",
        [](const FieldSpec& F, std::int64_t Y) {
            std::vector<std::int64_t> out;
            for (const auto& p : enumerate_prime_ideals(F, Y)) out.push_back(p.norm);
            return out;
        },
        py::arg("field"), py::arg("Y"));
}
