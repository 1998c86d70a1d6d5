#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "cfal/cfchan.hpp"
#include "cfal/cli.hpp"
#include "cfal/error.hpp"
#include "cfal/lattice_codec.hpp"
#include "cfal/numfield.hpp"
#include "cfal/simkit.hpp"
#include "cfal/svp.hpp"

namespace py = pybind11;
using namespace cfal;

namespace {

std::vector<FqElem> vandermonde(const ResidueField& fq, int T, int lf)
{
    std::vector<FqElem> gen(static_cast<std::size_t>(T * lf));
    for (int i = 0; i < T; ++i) {
        const FqElem point = fq.from_index(i + 1);
        FqElem power = fq.from_int(1);
        for (int k = 0; k < lf; ++k) {
            gen[static_cast<std::size_t>(i * lf + k)] = power;
            power = fq.mul(power, point);
        }
    }
    return gen;
}

NumberField field_for(std::int64_t d)
{
    return d == 1 ? NumberField::rationals() : make_quadratic_field(d);
}

SweepResult sweep(const std::vector<double>& snr_db, std::uint64_t trials, const std::vector<std::string>& schemes,
                  std::uint64_t seed, int n, int L, int threads)
{
    SweepConfig cfg;
    cfg.snr_db = snr_db;
    cfg.trials = trials;
    cfg.master_seed = seed;
    cfg.blocks = n;
    cfg.users = L;
    cfg.threads = threads;
    for (const auto& s : schemes)
        cfg.schemes.push_back(Scheme::parse(s));
    py::gil_scoped_release release;
    return run_sweep(cfg);
}

}  // namespace

PYBIND11_MODULE(_cfal, m)
{
    m.doc() = "Compute-and-forward over block-fading channels with algebraic lattices";

    static py::exception<Error> cfal_error(m, "CfalError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::handle(cfal_error.ptr())(e.what());
            exc.attr("kind") = to_string(e.kind());
            PyErr_SetObject(cfal_error.ptr(), exc.ptr());
        }
    });

    py::class_<RingElement>(m, "RingElement")
        .def(py::init<>())
        .def(py::init([](std::int64_t u, std::int64_t v) { return RingElement{u, v}; }), py::arg("u"),
             py::arg("v") = 0)
        .def(py::init([](const py::tuple& t) {
            if (t.size() != 2)
                throw py::value_error("ring element needs (u, v)");
            return RingElement{t[0].cast<std::int64_t>(), t[1].cast<std::int64_t>()};
        }))
        .def_readwrite("u", &RingElement::u)
        .def_readwrite("v", &RingElement::v)
        .def("__eq__", [](const RingElement& a, const RingElement& b) { return a == b; })
        .def("__hash__", [](const RingElement& a) { return py::hash(py::make_tuple(a.u, a.v)); })
        .def("__iter__", [](const RingElement& a) { return py::iter(py::make_tuple(a.u, a.v)); })
        .def("__repr__", [](const RingElement& a) {
            return "RingElement(" + std::to_string(a.u) + ", " + std::to_string(a.v) + ")";
        });
    py::implicitly_convertible<py::tuple, RingElement>();

    py::class_<NumberField>(m, "NumberField")
        .def_property_readonly("degree", &NumberField::degree)
        .def_property_readonly("d", &NumberField::d)
        .def_property_readonly("discriminant", &NumberField::discriminant)
        .def_property_readonly("s", &NumberField::s)
        .def_property_readonly("t", &NumberField::t)
        .def_property_readonly("theta_conjugates", &NumberField::theta_conjugates)
        .def_property_readonly("embedding_matrix", &NumberField::embedding_matrix)
        .def_property_readonly("name", &NumberField::name)
        .def("__repr__", &NumberField::name);

    m.def("quadratic_field", &make_quadratic_field, py::arg("d"));
    m.def("rationals", &NumberField::rationals);
    m.def(
        "embed",
        [](const NumberField& f, const RingElement& a) {
            const auto e = embed_element(f, a);
            return py::make_tuple(e.conjugates, e.norm, e.trace);
        },
        py::arg("field"), py::arg("a"), "(conjugates, norm, trace)");
    m.def("ring_mul", &ring_mul, py::arg("field"), py::arg("a"), py::arg("b"));
    m.def("norm", &algebraic_norm, py::arg("field"), py::arg("a"));

    py::class_<PrimeIdeal>(m, "PrimeIdeal")
        .def_property_readonly("p", &PrimeIdeal::p)
        .def_property_readonly("inertial_degree", &PrimeIdeal::inertial_degree)
        .def_property_readonly("root", &PrimeIdeal::root)
        .def_property_readonly("order", [](const PrimeIdeal& P) { return P.residue_field().order(); })
        .def("contains", &PrimeIdeal::contains)
        .def("reduce",
             [](const PrimeIdeal& P, const RingElement& a) { return P.residue_field().index(residue_reduce(P, a)); });
    m.def("prime_above", &prime_above, py::arg("field"), py::arg("p"));

    py::class_<BlockFadingChannel>(m, "Channel")
        .def(py::init<Eigen::MatrixXd, double>(), py::arg("gains"), py::arg("snr"),
             "gains is L x n: column j holds the user gains of block j")
        .def_property_readonly("blocks", &BlockFadingChannel::blocks)
        .def_property_readonly("users", &BlockFadingChannel::users)
        .def_property_readonly("snr", &BlockFadingChannel::snr)
        .def_property_readonly("gains", &BlockFadingChannel::gains);

    py::class_<EquationCandidate>(m, "Equation")
        .def_readonly("a", &EquationCandidate::a)
        .def_readonly("sigma", &EquationCandidate::sigma)
        .def_readonly("b", &EquationCandidate::b)
        .def_readonly("nu_sq", &EquationCandidate::nu_sq)
        .def_readonly("quadratic_form", &EquationCandidate::quadratic_form)
        .def_readonly("rate_bits", &EquationCandidate::rate_bits)
        .def_property_readonly("sigma_am_sq", &EquationCandidate::sigma_am_sq)
        .def_property_readonly("sigma_gm_sq", &EquationCandidate::sigma_gm_sq);

    m.def("gram_matrix", &gram_matrix, py::arg("h"), py::arg("snr"));
    m.def("mmse_scale", &mmse_scale, py::arg("h"), py::arg("sigma"), py::arg("snr"));
    m.def("am_rate", &am_rate, py::arg("channel"), py::arg("a"), py::arg("field"));
    m.def("best_equation", &best_equation, py::arg("field"), py::arg("channel"));
    m.def("best_equations", &best_equations, py::arg("field"), py::arg("channel"), py::arg("count"),
          py::arg("ratio") = 2.0);
    m.def(
        "naive_rate",
        [](const BlockFadingChannel& ch) {
            const auto c = naive_rate(ch);
            return py::make_tuple(c.rate_bits, c.block, Eigen::VectorXi(c.a));
        },
        py::arg("channel"), "(rate_bits, block, a)");
    m.def("mac_sum_capacity", &mac_sum_capacity, py::arg("channel"));
    m.def("snr_from_db", &snr_from_db);

    m.def(
        "shortest_vector",
        [](const Eigen::MatrixXd& basis) {
            const auto r = shortest_vector(search_basis_from_matrix(basis));
            return py::make_tuple(Eigen::VectorXi(r.coords.cast<int>()), r.norm_sq);
        },
        py::arg("basis"), "Columns are basis vectors; returns (coords, norm_sq).");
    m.def(
        "minkowski_bound", [](const Eigen::MatrixXd& basis) { return minkowski_bound(search_basis_from_matrix(basis)); },
        py::arg("basis"));

    py::class_<ConstructionALattice>(m, "CodecLattice")
        .def_property_readonly("gamma", &ConstructionALattice::gamma)
        .def_property_readonly("blocks", &ConstructionALattice::blocks)
        .def_property_readonly("length", &ConstructionALattice::length)
        .def("fine_volume", &ConstructionALattice::fine_volume, py::arg("scale") = 1.0)
        .def("coarse_volume", &ConstructionALattice::coarse_volume, py::arg("scale") = 1.0)
        .def_property_readonly("message_rate_bits", &ConstructionALattice::message_rate_bits)
        .def_property_readonly("second_moment", &ConstructionALattice::shaping_second_moment);

    m.def(
        "build_codec",
        [](std::int64_t d, std::int64_t p, int T, int lf, int lc, double snr,
           std::optional<std::vector<std::int64_t>> generator) {
            const auto field = make_quadratic_field(d);
            const auto prime = prime_above(field, p);
            const auto fq = prime.residue_field();
            std::vector<FqElem> gen;
            if (generator) {
                for (const auto k : *generator)
                    gen.push_back(fq.from_index(k));
            } else {
                gen = vandermonde(fq, T, lf);
            }
            return build_construction_a(field, prime, NestedCodePair(fq, T, lf, lc, gen), snr);
        },
        py::arg("d"), py::arg("p"), py::arg("T"), py::arg("lf"), py::arg("lc"), py::arg("snr"),
        py::arg("generator") = std::nullopt,
        "generator: T x lf row-major field-element indices; Vandermonde when omitted.");
    m.def(
        "simulate_codec",
        [](const ConstructionALattice& lat, const BlockFadingChannel& ch, const EquationCandidate& eq,
           std::uint64_t trials, std::uint64_t seed, bool dither, int threads) {
            CodecOptions opt;
            opt.dither = dither;
            opt.threads = threads;
            CodecStats s;
            {
                py::gil_scoped_release release;
                s = simulate_codec(lat, ch, eq, trials, seed, opt);
            }
            py::dict out;
            out["errors"] = s.errors;
            out["trials"] = s.trials;
            out["error_rate"] = s.error_rate;
            out["stderr"] = s.stderr_rate;
            return out;
        },
        py::arg("lattice"), py::arg("channel"), py::arg("equation"), py::arg("trials"), py::arg("seed") = 1,
        py::arg("dither") = true, py::arg("threads") = 1);
    m.def(
        "union_bound",
        [](const ConstructionALattice& lat, const Eigen::VectorXd& nu_sq, std::uint64_t min_terms) {
            const auto ub = union_bound_with_terms(lat, {nu_sq}, min_terms);
            return py::make_tuple(ub.value, ub.terms);
        },
        py::arg("lattice"), py::arg("nu_sq"), py::arg("min_terms") = 1000, "(value, terms)");

    m.def(
        "run_sweep",
        [](const std::vector<double>& snr_db, std::uint64_t trials, const std::vector<std::string>& schemes,
           std::uint64_t seed, int n, int L, int threads) {
            const auto res = sweep(snr_db, trials, schemes, seed, n, L, threads);
            py::list rows;
            for (const auto& r : res.rows)
                rows.append(py::make_tuple(r.snr_db, r.scheme.label(), r.mean_rate_bits, r.stderr_bits, r.trials));
            return rows;
        },
        py::arg("snr_db"), py::arg("trials"), py::arg("schemes"), py::arg("seed") = 1, py::arg("n") = 2,
        py::arg("L") = 2, py::arg("threads") = 1, "List of (snr_db, scheme, mean_rate_bits, stderr_bits, trials).");
    m.def(
        "sweep_csv",
        [](const std::vector<double>& snr_db, std::uint64_t trials, const std::vector<std::string>& schemes,
           std::uint64_t seed, int n, int L, int threads) {
            return cli::format_sweep_csv(sweep(snr_db, trials, schemes, seed, n, L, threads));
        },
        py::arg("snr_db"), py::arg("trials"), py::arg("schemes"), py::arg("seed") = 1, py::arg("n") = 2,
        py::arg("L") = 2, py::arg("threads") = 1);
    m.def(
        "sample_channels", &sample_channels, py::arg("seed"), py::arg("trial"), py::arg("n") = 2, py::arg("L") = 2);
    m.def("field", &field_for, py::arg("d"), "Q(sqrt d), or Z for d = 1");
}
