#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "abcat/addfun.hpp"
#include "abcat/bitmatrix.hpp"
#include "abcat/cli.hpp"
#include "abcat/json_io.hpp"
#include "abcat/matcat.hpp"
#include "abcat/points.hpp"
#include "abcat/regsite.hpp"
#include "abcat/report.hpp"

namespace py = pybind11;
using namespace abcat;

namespace {

py::object to_python(const Report& r) { return py::module_::import("json").attr("loads")(r.to_json().dump()); }

std::vector<std::vector<int>> to_lists(const BitMatrix& m) {
  std::vector<std::vector<int>> out(m.rows(), std::vector<int>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m.at(r, c);
  return out;
}

BitMatrix matrix(const std::vector<std::vector<int>>& rows, std::optional<std::size_t> cols) {
  if (cols) return BitMatrix::from_rows(rows.size(), *cols, rows);
  if (rows.empty()) throw py::value_error("pass cols= for a matrix without rows");
  return BitMatrix::from_rows(rows);
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Exact computations in the category of finite powers of Z2, its sheaves and their points";

  py::register_exception<InputError>(mod, "InputError", PyExc_ValueError);
  py::register_exception<EnumerationLimitError>(mod, "EnumerationLimitError", PyExc_RuntimeError);

  py::class_<BitMatrix>(mod, "BitMatrix")
      .def(py::init<std::size_t, std::size_t>(), py::arg("rows"), py::arg("cols"))
      .def(py::init(&matrix), py::arg("entries"), py::arg("cols") = py::none())
      .def_static("identity", &BitMatrix::identity)
      .def_property_readonly("rows", &BitMatrix::rows)
      .def_property_readonly("cols", &BitMatrix::cols)
      .def("at", &BitMatrix::at)
      .def("tolist", &to_lists)
      .def("transpose", &BitMatrix::transpose)
      .def("is_zero", &BitMatrix::is_zero)
      .def("__mul__", [](const BitMatrix& a, const BitMatrix& b) { return a * b; })
      .def("__add__", [](const BitMatrix& a, const BitMatrix& b) { return a + b; })
      .def("__eq__", [](const BitMatrix& a, const BitMatrix& b) { return a == b; })
      .def("__repr__", [](const BitMatrix& m) {
        return "BitMatrix(" + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", " + m.to_string() + ")";
      });

  mod.def("rref", [](const BitMatrix& m) {
    auto r = rref(m);
    return py::make_tuple(r.reduced, r.pivots);
  });
  mod.def("rank", &rank);
  mod.def("kernel_basis", &kernel_basis);
  mod.def("image_basis", &image_basis);
  mod.def("solve", py::overload_cast<const BitMatrix&, const BitMatrix&>(&solve));

  py::class_<GMor>(mod, "GMor")
      .def(py::init([](std::size_t dom, std::size_t cod, const BitMatrix& m) { return GMor(GObj{dom}, GObj{cod}, m); }),
           py::arg("dom"), py::arg("cod"), py::arg("mat"))
      .def_static("identity", [](std::size_t n) { return GMor::identity(GObj{n}); })
      .def_property_readonly("dom", [](const GMor& f) { return f.dom().n; })
      .def_property_readonly("cod", [](const GMor& f) { return f.cod().n; })
      .def_property_readonly("mat", &GMor::mat)
      .def("__eq__", [](const GMor& a, const GMor& b) { return a == b; })
      .def("__repr__", &GMor::to_string);

  mod.def("compose", py::overload_cast<const GMor&, const GMor&>(&compose), py::arg("g"), py::arg("f"));
  mod.def("is_mono", &is_mono);
  mod.def("is_epi", &is_epi);
  mod.def("is_iso", &is_iso);
  mod.def("kernel", [](const GMor& f) { return kernel(f).mor; }, "Canonical kernel map into dom f");
  mod.def("cokernel", [](const GMor& f) { return cokernel(f).mor; }, "Canonical cokernel map out of cod f");
  mod.def("pullback", [](const GMor& f, const GMor& g) {
    auto pb = pullback(f, g);
    return py::make_tuple(pb.p1, pb.p2);
  });
  mod.def("enumerate_morphisms", [](std::size_t a, std::size_t b) { return enumerate_morphisms(GObj{a}, GObj{b}); });

  mod.def("verify_abelian", [](std::size_t bound) { return to_python(verify_abelian(bound)); });
  mod.def("subfunctor_count", [](std::size_t k) { return subfunctors(AddFunctor::contravariant(k)).size(); });
  mod.def("subspace_count", &subspace_count);
  mod.def("check_sheaf", [](std::size_t k, std::size_t bound) {
    return to_python(check_sheaf(Presheaf(AddFunctor::contravariant(k)), bound));
  });
  mod.def("check_full_faithful", [](std::size_t a, std::size_t b) { return to_python(check_full_faithful(GObj{a}, GObj{b})); });
  mod.def("verify_embedding_exact", [](const GMor& mono, const GMor& epi, std::size_t bound) {
    return to_python(verify_embedding_exact(ShortExact{mono, epi}, bound));
  });

  py::class_<PointHandle>(mod, "PointHandle")
      .def(py::init([](std::size_t n) { return base_point(GObj{n}); }), py::arg("base_dim"))
      .def_property_readonly("size", &PointHandle::size)
      .def("node_dim", [](const PointHandle& p, NodeId n) { return p.node(n).obj.n; })
      .def("node_depth", [](const PointHandle& p, NodeId n) { return p.node(n).depth; })
      .def("node_kind", [](const PointHandle& p, NodeId n) { return to_string(p.node(n).kind); })
      .def("has_arrow", &PointHandle::has_arrow)
      .def("arrow", &PointHandle::arrow_mor)
      .def(
          "refine_for",
          [](PointHandle& p, NodeId node, const GMor& f, const GMor& eps) { return p.refine_for(Triple{node, f, Cover(eps)}); },
          py::arg("node"), py::arg("f"), py::arg("cover"))
      .def("upper_bound", py::overload_cast<NodeId, NodeId>(&PointHandle::upper_bound))
      .def("u_eval_count", [](const PointHandle& p, std::size_t v, std::size_t depth) {
        return u_eval(p, GObj{v}, depth).size();
      })
      .def(
          "check_point_axioms",
          [](PointHandle& p, std::size_t bound, std::size_t depth) { return to_python(check_point_axioms(p, bound, depth)); },
          py::arg("bound") = 2, py::arg("depth") = 2)
      .def(
          "stalk_equal",
          [](const PointHandle& p, std::size_t a, const BitVector& x, const BitVector& y, std::size_t depth) {
            const SheafAb F = yoneda(GObj{a});
            return stalk_eq(p, F, stalk_elem(p, F, x), stalk_elem(p, F, y), depth).equal();
          },
          "Compare two base sections of the representable H_a", py::arg("a"), py::arg("x"), py::arg("y"),
          py::arg("depth") = 0);

  mod.def(
      "conservativity_check",
      [](const GMor& h, const std::vector<std::size_t>& us, std::size_t bound, std::size_t depth) {
        std::vector<GObj> objs;
        for (auto n : us) objs.push_back(GObj{n});
        return to_python(conservativity_check(yoneda_map(h), objs, bound, depth));
      },
      "Stalkwise isomorphism test for the map of representables induced by h", py::arg("h"),
      py::arg("us") = std::vector<std::size_t>{}, py::arg("bound") = 2, py::arg("depth") = 0);

  mod.def("run_cli", [](const std::vector<std::string>& args) {
    auto r = run_cli(args);
    return py::make_tuple(r.exit_code, r.out, r.err);
  });
}
