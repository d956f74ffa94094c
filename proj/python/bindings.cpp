#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spinrep/builtins.hpp"
#include "spinrep/cli.hpp"
#include "spinrep/dirac3.hpp"
#include "spinrep/dirac4.hpp"
#include "spinrep/expr.hpp"
#include "spinrep/io.hpp"
#include "spinrep/nil3.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>

namespace py = pybind11;
using namespace spinrep;

namespace {

using CArr = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;
using DArr = py::array_t<double, py::array::c_style | py::array::forcecast>;

Field<cplx> field_from(const Domain& dom, const CArr& a) {
    if (a.ndim() != 2 || a.shape(0) != dom.ny || a.shape(1) != dom.nx)
        throw std::invalid_argument("array must have shape (ny, nx)");
    Field<cplx> f(dom);
    auto r = a.unchecked<2>();
    for (int iy = 0; iy < dom.ny; ++iy)
        for (int ix = 0; ix < dom.nx; ++ix) f.at(ix, iy) = r(iy, ix);
    return f;
}

CArr to_numpy(const Field<cplx>& f) {
    CArr out({f.dom.ny, f.dom.nx});
    auto w = out.mutable_unchecked<2>();
    for (int iy = 0; iy < f.dom.ny; ++iy)
        for (int ix = 0; ix < f.dom.nx; ++ix) w(iy, ix) = f.at(ix, iy);
    return out;
}

DArr to_numpy(const Field<double>& f) {
    DArr out({f.dom.ny, f.dom.nx});
    auto w = out.mutable_unchecked<2>();
    for (int iy = 0; iy < f.dom.ny; ++iy)
        for (int ix = 0; ix < f.dom.nx; ++ix) w(iy, ix) = f.at(ix, iy);
    return out;
}

DArr points3_to_numpy(const Field<Vec3>& f) {
    DArr out({f.dom.ny, f.dom.nx, 3});
    auto w = out.mutable_unchecked<3>();
    for (int iy = 0; iy < f.dom.ny; ++iy)
        for (int ix = 0; ix < f.dom.nx; ++ix)
            for (int k = 0; k < 3; ++k) w(iy, ix, k) = f.at(ix, iy)[k];
    return out;
}

DArr points4_to_numpy(const Field<Quaternion>& f) {
    DArr out({f.dom.ny, f.dom.nx, 4});
    auto w = out.mutable_unchecked<3>();
    for (int iy = 0; iy < f.dom.ny; ++iy)
        for (int ix = 0; ix < f.dom.nx; ++ix) {
            Vec4 v = f.at(ix, iy).real4();
            for (int k = 0; k < 4; ++k) w(iy, ix, k) = v[k];
        }
    return out;
}

Field<Vec3> points3_from(const Domain& dom, const DArr& a) {
    if (a.ndim() != 3 || a.shape(0) != dom.ny || a.shape(1) != dom.nx || a.shape(2) != 3)
        throw std::invalid_argument("points must have shape (ny, nx, 3)");
    Field<Vec3> f(dom);
    auto r = a.unchecked<3>();
    for (int iy = 0; iy < dom.ny; ++iy)
        for (int ix = 0; ix < dom.nx; ++ix) f.at(ix, iy) = {r(iy, ix, 0), r(iy, ix, 1), r(iy, ix, 2)};
    return f;
}

py::dict report_dict(const ResidualReport& r) {
    py::dict d;
    d["name"] = r.name;
    d["max"] = r.max_abs;
    d["mean"] = r.mean_abs;
    d["interior_max"] = r.interior_max;
    d["h"] = r.h;
    return d;
}

SpinorField3 spinor_from(const Domain& dom, const CArr& p1, const CArr& p2) {
    return {field_from(dom, p1), field_from(dom, p2)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "spinor representation toolkit: conformal immersions in R3, Nil3 and R4 "
              "from spinor data, with residual verification";

    py::class_<Domain>(m, "Domain")
        .def(py::init([](double x0, double x1, double y0, double y1, double h) {
                 return Domain::with_spacing(x0, x1, y0, y1, h);
             }),
             py::arg("x_min"), py::arg("x_max"), py::arg("y_min"), py::arg("y_max"), py::arg("h"))
        .def_readonly("nx", &Domain::nx)
        .def_readonly("ny", &Domain::ny)
        .def_readonly("h", &Domain::h)
        .def_readonly("x_min", &Domain::x_min)
        .def_readonly("x_max", &Domain::x_max)
        .def_readonly("y_min", &Domain::y_min)
        .def_readonly("y_max", &Domain::y_max)
        .def("__repr__", [](const Domain& d) {
            return "Domain([" + std::to_string(d.x_min) + ", " + std::to_string(d.x_max) +
                   "] x [" + std::to_string(d.y_min) + ", " + std::to_string(d.y_max) +
                   "], h=" + std::to_string(d.h) + ")";
        });

    m.def("rot3",
          [](const Vec4& a, const Vec3& x) {
              return rot3(Quaternion::from_real4(a), Quaternion::from_imag(x)).imag();
          },
          py::arg("a"), py::arg("x"),
          "rotate the imaginary quaternion x by the unit quaternion a");

    m.def("rot4",
          [](const Vec4& p, const Vec4& q, const Vec4& x) {
              return rot4({Quaternion::from_real4(p), Quaternion::from_real4(q)},
                          Quaternion::from_real4(x))
                  .real4();
          },
          py::arg("p"), py::arg("q"), py::arg("x"));

    m.def("segre",
          [](cplx p1, cplx p2) {
              CVec3 z = segre(p1, p2);
              return py::make_tuple(z[0], z[1], z[2]);
          },
          py::arg("psi1"), py::arg("psi2"));

    m.def("eval_expr",
          [](const std::string& text, const Domain& dom) { return to_numpy(Expr(text).eval(dom)); },
          py::arg("text"), py::arg("domain"),
          "evaluate an expression over z, zbar on the grid");

    m.def("immerse_r3",
          [](const Domain& dom, const CArr& p1, const CArr& p2) {
              SpinorField3 sf = spinor_from(dom, p1, p2);
              ResidualReport closed;
              Immersion f = immerse_r3(sf, &closed);
              py::dict out;
              out["points"] = points3_to_numpy(f.p3);
              out["closedness"] = report_dict(closed);
              return out;
          },
          py::arg("domain"), py::arg("psi1"), py::arg("psi2"));

    m.def("immerse_nil3",
          [](const Domain& dom, const CArr& p1, const CArr& p2, double tau) {
              SpinorField3 sf = spinor_from(dom, p1, p2);
              ResidualReport integ;
              Immersion f = immerse_nil3(sf, tau, &integ);
              py::dict out;
              out["points"] = points3_to_numpy(f.p3);
              out["integrability"] = report_dict(integ);
              return out;
          },
          py::arg("domain"), py::arg("psi1"), py::arg("psi2"), py::arg("tau"));

    m.def("potential_from_spinor",
          [](const Domain& dom, const CArr& p1, const CArr& p2) {
              Potential3 pot = potential_from_spinor(spinor_from(dom, p1, p2));
              py::dict out;
              out["U"] = to_numpy(pot.U);
              out["consistency"] = report_dict(pot.consistency);
              return out;
          },
          py::arg("domain"), py::arg("psi1"), py::arg("psi2"));

    m.def("dirac_residual",
          [](const Domain& dom, const CArr& p1, const CArr& p2, const CArr& U) {
              DiracResidual r = dirac_residual(spinor_from(dom, p1, p2), field_from(dom, U));
              return py::make_tuple(report_dict(r.eq1), report_dict(r.eq2));
          },
          py::arg("domain"), py::arg("psi1"), py::arg("psi2"), py::arg("U"));

    m.def("spinor_from_weierstrass",
          [](const Domain& dom, const CArr& g, const CArr& h) {
              SpinorField3 sf = spinor_from_weierstrass({field_from(dom, g), field_from(dom, h)});
              return py::make_tuple(to_numpy(sf.psi1), to_numpy(sf.psi2));
          },
          py::arg("domain"), py::arg("g"), py::arg("h"));

    m.def("induced_spinor",
          [](const Domain& dom, const DArr& points) {
              Immersion f;
              f.ambient = Ambient::R3;
              f.dom = dom;
              f.p3 = points3_from(dom, points);
              SpinorField3 sf = induced_spinor(f);
              return py::make_tuple(to_numpy(sf.psi1), to_numpy(sf.psi2));
          },
          py::arg("domain"), py::arg("points"));

    m.def("mean_curvature_r3",
          [](const Domain& dom, const DArr& points) {
              Immersion f;
              f.ambient = Ambient::R3;
              f.dom = dom;
              f.p3 = points3_from(dom, points);
              return to_numpy(mean_curvature_r3(f).H);
          },
          py::arg("domain"), py::arg("points"));

    m.def("congruence_rms",
          [](const Domain& dom, const DArr& a, const DArr& b) {
              Immersion f, g;
              f.ambient = g.ambient = Ambient::R3;
              f.dom = g.dom = dom;
              f.p3 = points3_from(dom, a);
              g.p3 = points3_from(dom, b);
              return congruence(f, g).rms;
          },
          py::arg("domain"), py::arg("points_a"), py::arg("points_b"));

    m.def("dbar_solve",
          [](const Domain& dom, const CArr& rhs, double tol, int max_iter) {
              return to_numpy(dbar_solve(field_from(dom, rhs), tol, max_iter));
          },
          py::arg("domain"), py::arg("rhs"), py::arg("tol") = 1e-10, py::arg("max_iter") = 2000);

    m.def("kt_immerse",
          [](const Domain& dom, const CArr& s1, const CArr& s2, const CArr& t1, const CArr& t2) {
              KTData kt{field_from(dom, s1), field_from(dom, s2), field_from(dom, t1),
                        field_from(dom, t2)};
              ResidualReport integ;
              Immersion f = kt_immerse(kt, &integ);
              py::dict out;
              out["points"] = points4_to_numpy(f.p4);
              out["integrability"] = report_dict(integ);
              return out;
          },
          py::arg("domain"), py::arg("s1"), py::arg("s2"), py::arg("t1"), py::arg("t2"));

    m.def("gauge_fix",
          [](const Domain& dom, const CArr& s1, const CArr& s2, const CArr& t1, const CArr& t2) {
              KTData kt{field_from(dom, s1), field_from(dom, s2), field_from(dom, t1),
                        field_from(dom, t2)};
              GaugeFixResult g = gauge_fix(kt);
              py::dict out;
              out["s1"] = to_numpy(g.fixed.s1);
              out["s2"] = to_numpy(g.fixed.s2);
              out["t1"] = to_numpy(g.fixed.t1);
              out["t2"] = to_numpy(g.fixed.t2);
              out["h"] = to_numpy(g.h);
              out["alpha"] = to_numpy(g.alpha);
              out["off_span"] = report_dict(g.off_span);
              return out;
          },
          py::arg("domain"), py::arg("s1"), py::arg("s2"), py::arg("t1"), py::arg("t2"));

    m.def("generate_nil3",
          [](const Domain& dom, double tau) {
              Nil3GenParams prm;
              prm.tau = tau;
              Nil3Generated g = generate_nil3_surface(dom, prm);
              py::dict out;
              out["psi1"] = to_numpy(g.sf.psi1);
              out["psi2"] = to_numpy(g.sf.psi2);
              out["U"] = to_numpy(g.U);
              out["points"] = points3_to_numpy(g.f.p3);
              out["lambda"] = to_numpy(g.sd.lambda);
              return out;
          },
          py::arg("domain"), py::arg("tau") = 0.5);

    m.def("builtin_names", &builtin_names);

    m.def("builtin",
          [](const std::string& name, double h, double tau) {
              Dataset ds = make_builtin(name, h, tau);
              py::dict out;
              out["name"] = ds.name;
              out["ambient"] = ds.ambient == Ambient::R3   ? "r3"
                               : ds.ambient == Ambient::Nil3 ? "nil3"
                                                             : "r4";
              out["tau"] = ds.tau;
              out["domain"] = ds.dom;
              if (ds.spinor) {
                  out["psi1"] = to_numpy(ds.spinor->psi1);
                  out["psi2"] = to_numpy(ds.spinor->psi2);
              }
              if (ds.immersion) {
                  if (ds.immersion->ambient == Ambient::R4)
                      out["points"] = points4_to_numpy(ds.immersion->p4);
                  else
                      out["points"] = points3_to_numpy(ds.immersion->p3);
              }
              if (ds.kt) {
                  out["s1"] = to_numpy(ds.kt->s1);
                  out["s2"] = to_numpy(ds.kt->s2);
                  out["t1"] = to_numpy(ds.kt->t1);
                  out["t2"] = to_numpy(ds.kt->t2);
              }
              return out;
          },
          py::arg("name"), py::arg("h") = 0.0, py::arg("tau") = 0.0);

    m.def("run_job_json",
          [](const std::string& config_json) {
              nlohmann::json j = nlohmann::json::parse(config_json);
              std::string tmp = "spinrep_pyjob_config.json";
              {
                  std::ofstream out(tmp);
                  out << j.dump();
              }
              JobConfig cfg = config_from_json_file(tmp);
              std::remove(tmp.c_str());
              return run_job(cfg);
          },
          py::arg("config_json"),
          "run a CLI-style job described by a JSON string; returns the exit status");

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "0.1.0";
#endif
}
