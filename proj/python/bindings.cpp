// Python bindings. Structured data crosses the boundary as JSON text in the
// same formats the command-line tool reads and writes; hvlab/__init__.py
// turns it into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hvlab/cli.hpp"
#include "hvlab/errors.hpp"
#include "hvlab/inequalities.hpp"
#include "hvlab/io.hpp"
#include "hvlab/kochenspecker.hpp"
#include "hvlab/models.hpp"
#include "hvlab/quantum.hpp"

namespace py = pybind11;
using namespace hvlab;

namespace {

io::Json parse(const std::string& text) {
  try {
    return io::Json::parse(text);
  } catch (const io::Json::parse_error& e) {
    throw InputError(std::string("not valid JSON: ") + e.what());
  }
}

std::string out(const io::Json& j) { return io::dump(j, -1); }

quantum::Frame frame(const std::array<double, 9>& rows) { return quantum::Frame::from_rows(rows); }

ks::RaySet rays_from(const std::vector<std::array<double, 3>>& v) {
  std::vector<quantum::Ray> rays;
  for (const auto& x : v) rays.push_back(quantum::Ray::normalized(x));
  return ks::RaySet(std::move(rays));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "hidden-variable model checks (native core)";

  py::register_exception<RefusalError>(m, "RefusalError", PyExc_RuntimeError);
  py::register_exception<ConditioningError>(m, "ConditioningError", PyExc_ValueError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

  m.def("photon_stats", [](double a, double b) { return out(io::to_json(quantum::photon_stats(quantum::Angle(a), quantum::Angle(b)))); });
  m.def("born_oracle_photon", [](double a, double b) {
    return out(io::to_json(quantum::born_oracle_photon(quantum::Angle(a), quantum::Angle(b))));
  });
  m.def("spin1_joint", [](std::array<double, 9> a, std::array<double, 9> b) {
    return out(io::to_json(quantum::spin1_joint(frame(a), frame(b))));
  });
  m.def("born_oracle_spin1", [](std::array<double, 9> a, std::array<double, 9> b) {
    return out(io::to_json(quantum::born_oracle_spin1(frame(a), frame(b))));
  });

  m.def("f_theta", &inequalities::f_theta);
  m.def("scan_f", [](double lo, double hi, double step) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : inequalities::scan_f(lo, hi, step).points) pts.emplace_back(p.theta, p.f);
    return pts;
  });
  m.def("boole_check", [](std::vector<double> pz, std::vector<std::uint8_t> f1, std::vector<std::uint8_t> f2,
                          std::vector<std::uint8_t> g1, std::vector<std::uint8_t> g2) {
    return out(io::to_json(inequalities::boole_check(pz, f1, f2, g1, g2)));
  });
  m.def("local_polytope", [](const std::string& table, double tol) {
    return out(io::to_json(inequalities::local_polytope_feasible(io::parse_table(parse(table)), tol)));
  }, py::arg("table"), py::arg("tol") = inequalities::kFeasibilityTol);

  m.def("predicted_table", [](const std::string& model) {
    return out(io::to_json(models::predicted_table(io::parse_model(parse(model)))));
  });
  m.def("simulate", [](const std::string& model, std::size_t shots, std::uint64_t seed) {
    return out(io::to_json(models::simulate(io::parse_model(parse(model)), shots, seed)));
  });
  m.def("reduce_raw", [](const std::string& model) {
    // Factorized model -> induced raw model -> factorize, passing through the Freedom and PI checks.
    auto raw = models::induced_raw_model(io::parse_model(parse(model)));
    return out(io::to_json(models::factorize(raw)));
  });
  m.def("check_bell_locality", [](const std::string& model, double tol) {
    return out(io::to_json(models::check_bell_locality(models::joint_table(io::parse_stochastic_model(parse(model))), tol)));
  }, py::arg("model"), py::arg("tol") = 1e-9);
  m.def("derandomize", [](const std::string& model) {
    auto d = models::derandomize(io::parse_stochastic_model(parse(model)));
    io::Json j;
    j["certified"] = d.certified;
    j["max_abs_diff"] = d.max_abs_diff;
    j["table"] = io::to_json(d.table);
    return out(j);
  });

  m.def("peres33", [] {
    std::vector<std::array<double, 3>> v;
    for (const auto& r : ks::peres33().rays()) v.push_back({r[0], r[1], r[2]});
    return v;
  });
  m.def("search_coloring", [](const std::vector<std::array<double, 3>>& rays, bool count) {
    return out(io::to_json(ks::search_coloring(ks::orthogonality_graph(rays_from(rays)), {.count = count})));
  }, py::arg("rays"), py::arg("count") = false);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream o, e;
    const int code = cli::run(args, o, e);
    return py::make_tuple(code, o.str(), e.str());
  });
}
