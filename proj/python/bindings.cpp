#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "trevisan/bitbuffer.hpp"
#include "trevisan/bitext.hpp"
#include "trevisan/cli.hpp"
#include "trevisan/error.hpp"
#include "trevisan/extract.hpp"
#include "trevisan/params.hpp"
#include "trevisan/verify.hpp"
#include "trevisan/weakdesign.hpp"

namespace py = pybind11;
using namespace trevisan;

namespace {

DesignKind parse_design(const std::string& name) {
  for (auto kind : {DesignKind::GFp, DesignKind::GF2x, DesignKind::BlockGFp, DesignKind::BlockGF2x}) {
    if (design_name(kind) == name) {
      return kind;
    }
  }
  throw InvalidParameters("unknown design '" + name + "'");
}

Overlap parse_overlap(const std::string& r) {
  if (r == "1") {
    return Overlap::One;
  }
  if (r == "2e") {
    return Overlap::TwoE;
  }
  throw InvalidParameters("overlap must be '1' or '2e'");
}

std::string_view as_view(const py::bytes& b) {
  char* data = nullptr;
  Py_ssize_t len = 0;
  PyBytes_AsStringAndSize(b.ptr(), &data, &len);
  return {data, static_cast<size_t>(len)};
}

BitBuffer to_bits(const py::bytes& b, uint64_t len) {
  const auto view = as_view(b);
  return BitBuffer::from_bytes({reinterpret_cast<const uint8_t*>(view.data()), view.size()}, len);
}

py::bytes to_bytes(const BitBuffer& buf) {
  const auto bytes = buf.bytes();
  return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
}

// Runs the composed extractor for params that already carry a design choice.
BitBuffer run_job(const py::bytes& input, const py::bytes& seed, const ExtractorParams& params,
                  const std::string& design, unsigned threads, bool naive) {
  const DesignKind kind = parse_design(design);
  const ExtractorParams p = params.d == 0 ? apply_design(params, kind) : params;
  const auto wd = make_design(kind, p.t_act, p.m);
  const auto ext = make_extractor(p);
  const BitBuffer in = to_bits(input, p.n);
  const BitBuffer sd = to_bits(seed, wd->d());
  const ExtractionJob job{in, sd, *wd, *ext, p.m, threads};
  if (naive) {
    py::gil_scoped_release release;
    return naive_extract(job);
  }
  py::gil_scoped_release release;
  return extract_all(job);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Trevisan randomness extractor";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<InvalidParameters>(m, "InvalidParameters", base.ptr());
  py::register_exception<InfeasibleError>(m, "InfeasibleError", base.ptr());
  py::register_exception<InsufficientData>(m, "InsufficientData", base.ptr());
  py::register_exception<FormatError>(m, "FormatError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base.ptr());

  py::class_<ExtractorParams>(m, "ExtractorParams")
      .def_property_readonly("bitext", [](const ExtractorParams& p) { return std::string(bitext_name(p.bitext)); })
      .def_readonly("n", &ExtractorParams::n)
      .def_readonly("m", &ExtractorParams::m)
      .def_readonly("alpha", &ExtractorParams::alpha)
      .def_readonly("mu", &ExtractorParams::mu)
      .def_readonly("nu", &ExtractorParams::nu)
      .def_readonly("eps", &ExtractorParams::eps)
      .def_readonly("gamma", &ExtractorParams::gamma)
      .def_readonly("ell", &ExtractorParams::ell)
      .def_readonly("t_req", &ExtractorParams::t_req)
      .def_readonly("t_act", &ExtractorParams::t_act)
      .def_readonly("d", &ExtractorParams::d)
      .def_readonly("k", &ExtractorParams::k)
      .def_readonly("feasible", &ExtractorParams::feasible)
      .def_property_readonly("r", [](const ExtractorParams& p) { return std::string(overlap_name(p.r)); })
      .def("__repr__", [](const ExtractorParams& p) {
        std::ostringstream os;
        os << "ExtractorParams(bitext=" << bitext_name(p.bitext) << ", n=" << p.n << ", m=" << p.m
           << ", t_req=" << p.t_req << ", d=" << p.d << ", feasible=" << (p.feasible ? "True" : "False") << ")";
        return os.str();
      });

  m.def("binary_entropy", &binary_entropy, py::arg("p"));
  m.def("binary_entropy_inv", &binary_entropy_inv, py::arg("y"));
  m.def("solve_w", &solve_w, py::arg("nu"));
  m.def(
      "xor_params",
      [](uint64_t n, uint64_t m_out, double alpha, double mu, double eps, const std::string& r) {
        return xor_params(n, m_out, alpha, mu, eps, parse_overlap(r));
      },
      py::arg("n"), py::arg("m"), py::arg("alpha"), py::arg("mu"), py::arg("eps"), py::arg("r") = "2e");
  m.def(
      "rsh_params",
      [](uint64_t n, uint64_t m_out, double alpha, double eps, const std::string& r) {
        return rsh_params(n, m_out, alpha, eps, parse_overlap(r));
      },
      py::arg("n"), py::arg("m"), py::arg("alpha"), py::arg("eps"), py::arg("r") = "2e");
  m.def(
      "lu_params",
      [](uint64_t n, uint64_t m_out, double alpha, double nu, double eps, const std::string& r) {
        return lu_params(n, m_out, alpha, nu, eps, parse_overlap(r));
      },
      py::arg("n"), py::arg("m"), py::arg("alpha"), py::arg("nu"), py::arg("eps"), py::arg("r") = "2e");
  m.def("max_output_len", &max_output_len, py::arg("params"));
  m.def("with_output_len", &with_output_len, py::arg("params"), py::arg("m"));
  m.def(
      "apply_design", [](const ExtractorParams& p, const std::string& design) { return apply_design(p, parse_design(design)); },
      py::arg("params"), py::arg("design"));
  m.def(
      "design_d",
      [](const std::string& design, uint64_t t_req, uint64_t m_out) { return design_d(parse_design(design), t_req, m_out); },
      py::arg("design"), py::arg("t_req"), py::arg("m") = 0);

  py::class_<WeakDesign>(m, "WeakDesign")
      .def_property_readonly("kind", [](const WeakDesign& d) { return std::string(design_name(d.kind())); })
      .def_property_readonly("t", &WeakDesign::t)
      .def_property_readonly("m", &WeakDesign::m)
      .def_property_readonly("d", &WeakDesign::d)
      .def_property_readonly("r", [](const WeakDesign& d) { return std::string(overlap_name(d.overlap())); })
      .def("set", &WeakDesign::compute_Si, py::arg("i"))
      .def("serialize", [](const WeakDesign& d) {
        const auto bytes = design_serialize(d);
        return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
      })
      .def_static("deserialize", [](const py::bytes& b) {
        const auto view = as_view(b);
        return design_deserialize({reinterpret_cast<const uint8_t*>(view.data()), view.size()});
      });
  m.def(
      "make_design",
      [](const std::string& design, uint64_t t, uint64_t m_out) { return make_design(parse_design(design), t, m_out); },
      py::arg("design"), py::arg("t"), py::arg("m"));
  m.def(
      "overlap_check",
      [](const WeakDesign& d) {
        const OverlapReport r = overlap_check(d);
        py::dict out;
        out["worst_row"] = r.worst_row;
        out["worst_sum"] = r.worst_sum;
        out["pass"] = r.pass;
        return out;
      },
      py::arg("design"));

  m.def(
      "extract",
      [](const py::bytes& input, const py::bytes& seed, const ExtractorParams& params, const std::string& design,
         unsigned threads) { return to_bytes(run_job(input, seed, params, design, threads, false)); },
      py::arg("input"), py::arg("seed"), py::arg("params"), py::arg("design") = "gfp", py::arg("threads") = 1,
      "Output bytes of the composed extractor; bits are LSB-first within each byte.");
  m.def(
      "naive_extract",
      [](const py::bytes& input, const py::bytes& seed, const ExtractorParams& params, const std::string& design) {
        return to_bytes(run_job(input, seed, params, design, 1, true));
      },
      py::arg("input"), py::arg("seed"), py::arg("params"), py::arg("design") = "gfp");
  m.def(
      "monobit", [](const py::bytes& bits, uint64_t len) { return monobit(to_bits(bits, len)); }, py::arg("bits"),
      py::arg("len"));

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "trevisan");
        std::ostringstream out;
        std::ostringstream err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line front end; returns (exit_code, stdout, stderr).");
}
