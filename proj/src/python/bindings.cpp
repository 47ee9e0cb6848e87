// Python bindings. Scalars cross the boundary as strings in the syntax of
// parse_scalar, so exact values survive the round trip.

#include <albert/parse.hpp>
#include <albert/scenario.hpp>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;

namespace {

albert::Command command_from(const std::string& name) {
  for (auto c : {albert::Command::CheckAxioms, albert::Command::VerifyMap, albert::Command::BuildCert})
    if (albert::command_name(c) == name) return c;
  throw albert::Error(albert::Errc::InvalidArgument, "unknown command '" + name + "'");
}

py::dict check_dict(const albert::CheckResult& c) {
  py::dict d;
  d["id"] = c.id;
  d["label"] = c.label;
  d["pass"] = c.pass;
  d["mode"] = c.mode;
  d["instances"] = c.instances;
  d["detail"] = c.detail;
  return d;
}

py::list checks_list(const std::vector<albert::CheckResult>& checks) {
  py::list out;
  for (const auto& c : checks) out.append(check_dict(c));
  return out;
}

albert::Vec to_vec(const albert::CubicJordan& j, const std::vector<std::string>& coords) {
  if (coords.size() != j.dim())
    throw albert::Error(albert::Errc::DimensionMismatch,
                        "expected " + std::to_string(j.dim()) + " coordinates, got " + std::to_string(coords.size()));
  albert::Vec v;
  for (const auto& s : coords) v.push_back(albert::parse_scalar(s, j.base_ring()));
  return v;
}

std::vector<std::string> to_strings(const albert::Vec& v) {
  std::vector<std::string> out;
  for (const auto& s : v) out.push_back(s.to_string());
  return out;
}

// A parsed construction; holds the shared structure alive.
struct Construction {
  albert::JordanPtr j;
};

}  // namespace

PYBIND11_MODULE(_albert, m) {
  m.doc() = "Cubic norm structures, Tits constructions and R-equivalence certificates";

  static py::exception<albert::Error> error(m, "AlbertError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const albert::Error& e) {
      py::object exc = py::handle(error.ptr())(e.what());
      exc.attr("code") = std::string(albert::errc_name(e.code()));
      exc.attr("exit_status") = albert::exit_status(e.code());
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<Construction>(m, "Construction")
      .def_property_readonly("dim", [](const Construction& c) { return c.j->dim(); })
      .def_property_readonly("base_ring", [](const Construction& c) { return c.j->base_ring()->to_string(); })
      .def("describe", [](const Construction& c) { return c.j->describe(); })
      .def("unit", [](const Construction& c) { return to_strings(c.j->unit()); })
      .def("norm", [](const Construction& c, const std::vector<std::string>& x) {
        return c.j->norm(to_vec(*c.j, x)).to_string();
      })
      .def("sharp", [](const Construction& c, const std::vector<std::string>& x) {
        return to_strings(c.j->sharp(to_vec(*c.j, x)));
      })
      .def("trace", [](const Construction& c, const std::vector<std::string>& x) {
        return albert::trace_linear(*c.j, to_vec(*c.j, x)).to_string();
      })
      .def(
          "axioms",
          [](const Construction& c, std::size_t samples, std::uint64_t seed, bool symbolic) {
            albert::SuiteOptions opt;
            opt.samples = samples;
            opt.seed = seed;
            opt.symbolic = symbolic;
            py::gil_scoped_release release;
            auto report = albert::axiom_suite(*c.j, opt);
            py::gil_scoped_acquire acquire;
            return checks_list(report.checks);
          },
          py::arg("samples") = 20, py::arg("seed") = 1, py::arg("symbolic") = true)
      .def("__repr__", [](const Construction& c) { return "<Construction " + c.j->describe() + ">"; });

  m.def(
      "construction", [](const std::string& text) { return Construction{albert::parse_construction(text)}; },
      py::arg("descriptor"), "Parse a construction descriptor such as 'first_tits(matrix3(Q), lambda=2)'.");

  m.def(
      "run_scenario",
      [](const std::string& text, const std::string& command, std::optional<std::uint64_t> seed,
         std::optional<std::size_t> samples, bool parallel, const std::string& source) {
        albert::RunOptions opt;
        opt.seed = seed;
        opt.samples = samples;
        opt.parallel = parallel;
        const albert::Scenario s = albert::Scenario::parse(text, source);
        albert::Report r;
        {
          py::gil_scoped_release release;
          r = s.run(command_from(command), opt);
        }
        py::dict out;
        out["pass"] = r.pass();
        out["text"] = r.to_text();
        out["machine"] = r.to_machine();
        py::list certs;
        for (const auto& c : r.certificates) {
          std::ostringstream os;
          albert::write_certificate(os, c);
          certs.append(os.str());
        }
        out["certificates"] = certs;
        return out;
      },
      py::arg("text"), py::arg("command") = "check-axioms", py::arg("seed") = py::none(),
      py::arg("samples") = py::none(), py::arg("parallel") = false, py::arg("source") = "<python>");

  m.def(
      "check_certificate",
      [](const std::string& text) {
        std::istringstream is(text);
        const albert::RCertificate cert = albert::read_certificate(is);
        const albert::JordanPtr j = albert::parse_construction(cert.construction);
        albert::CertReport r;
        {
          py::gil_scoped_release release;
          r = albert::cert_check(cert, j);
        }
        py::dict out;
        out["pass"] = r.pass();
        out["checks"] = checks_list(r.checks);
        return out;
      },
      py::arg("text"));
}
