#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "spinrep/builtins.hpp"
#include "spinrep/cli.hpp"
#include "spinrep/expr.hpp"
#include "spinrep/io.hpp"

using namespace spinrep;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tmp_path(const std::string& name) {
    return std::string("spinrep_test_") + name;
}

}  // namespace

TEST_CASE("expression parser evaluates the documented grammar") {
    CHECK(std::abs(Expr("1+2*3").eval({0, 0}) - cplx(7, 0)) < 1e-15);
    CHECK(std::abs(Expr("(1+2)*3").eval({0, 0}) - cplx(9, 0)) < 1e-15);
    CHECK(std::abs(Expr("z*zbar").eval({3, 4}) - cplx(25, 0)) < 1e-12);
    CHECK(std::abs(Expr("exp(i*pi)").eval({0, 0}) - cplx(-1, 0)) < 1e-12);
    CHECK(std::abs(Expr("z^2").eval({1, 1}) - cplx(0, 2)) < 1e-12);
    CHECK(std::abs(Expr("-z^2").eval({1, 1}) + cplx(0, 2)) < 1e-12);
    CHECK(std::abs(Expr("2^2^3").eval({0, 0}) - cplx(256, 0)) < 1e-9);  // right associative
    CHECK(std::abs(Expr("conj(z)").eval({1, 2}) - cplx(1, -2)) < 1e-15);
    CHECK(std::abs(Expr("re(z) + i*im(z)").eval({1.5, -2.5}) - cplx(1.5, -2.5)) < 1e-15);
    CHECK(std::abs(Expr("sin(z)/cos(z) - tan(z)").eval({0.3, 0.1})) < 1e-14);
    CHECK_THROWS(Expr("1+"));
    CHECK_THROWS(Expr("frobnicate(z)"));
    CHECK_THROWS(Expr("(1"));
}

TEST_CASE("csv round trips preserve values exactly") {
    Dataset enneper = make_builtin("enneper", 0.1);
    std::string p = tmp_path("sp.csv");
    write_spinor3_csv(p, *enneper.spinor, Ambient::R3, 0);
    SpinorCsv back = read_spinor3_csv(p);
    CHECK(back.ambient == Ambient::R3);
    for (std::size_t i = 0; i < back.sf.psi1.values.size(); ++i) {
        CHECK(back.sf.psi1.values[i] == enneper.spinor->psi1.values[i]);
        CHECK(back.sf.psi2.values[i] == enneper.spinor->psi2.values[i]);
    }

    Immersion f = immerse_r3(*enneper.spinor);
    std::string q = tmp_path("im.csv");
    write_immersion_csv(q, f);
    Immersion g = read_immersion_csv(q);
    CHECK(g.ambient == Ambient::R3);
    for (std::size_t i = 0; i < g.p3.values.size(); ++i)
        CHECK(norm3(sub3(g.p3.values[i], f.p3.values[i])) == 0.0);

    Dataset plane4 = make_builtin("flat-plane", 0.1);
    std::string r = tmp_path("kt.csv");
    write_kt_csv(r, *plane4.kt);
    KTData kt = read_kt_csv(r);
    for (std::size_t i = 0; i < kt.s1.values.size(); ++i)
        CHECK(kt.t1.values[i] == plane4.kt->t1.values[i]);
    std::remove(p.c_str());
    std::remove(q.c_str());
    std::remove(r.c_str());
}

TEST_CASE("obj export writes the full grid with triangulated quads") {
    Dataset plane = make_builtin("plane", 0.25);
    Immersion f = immerse_r3(*plane.spinor);
    std::string p = tmp_path("mesh.obj");
    write_obj(p, f);
    std::string text = slurp(p);
    int nv = 0, nf = 0;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.rfind("v ", 0) == 0) ++nv;
        if (line.rfind("f ", 0) == 0) ++nf;
    }
    CHECK(nv == f.dom.nx * f.dom.ny);
    CHECK(nf == 2 * (f.dom.nx - 1) * (f.dom.ny - 1));
    std::remove(p.c_str());
}

TEST_CASE("identical jobs produce byte-identical artifacts") {
    for (int round = 0; round < 2; ++round) {
        JobConfig cfg;
        cfg.verb = "gen";
        cfg.builtin = "enneper";
        cfg.domain_set = true;
        cfg.h = 0.05;
        cfg.out_obj = tmp_path("det" + std::to_string(round) + ".obj");
        cfg.out_report = tmp_path("det" + std::to_string(round) + ".json");
        CHECK(run_job(cfg) == 0);
    }
    CHECK(slurp(tmp_path("det0.obj")) == slurp(tmp_path("det1.obj")));
    CHECK(slurp(tmp_path("det0.json")) == slurp(tmp_path("det1.json")));
    CHECK(!slurp(tmp_path("det0.obj")).empty());
    for (const char* n : {"det0.obj", "det1.obj", "det0.json", "det1.json"})
        std::remove(tmp_path(n).c_str());
}

TEST_CASE("bad configuration yields a machine-readable error and nonzero exit") {
    JobConfig cfg;
    cfg.verb = "gen";
    cfg.builtin = "no-such-surface";
    cfg.out_report = tmp_path("err.json");
    CHECK(run_job(cfg) == 2);
    std::string rep = slurp(tmp_path("err.json"));
    CHECK(rep.find("\"error\"") != std::string::npos);
    std::remove(tmp_path("err.json").c_str());

    JobConfig empty;
    empty.verb = "gen";
    empty.out_report = tmp_path("err2.json");
    CHECK(run_job(empty) == 2);
    std::remove(tmp_path("err2.json").c_str());
}

TEST_CASE("verify on a plane csv passes with zero residuals") {
    Dataset plane = make_builtin("plane", 0.1);
    std::string p = tmp_path("plane.csv");
    write_spinor3_csv(p, *plane.spinor, Ambient::R3, 0);
    JobConfig cfg;
    cfg.verb = "verify";
    cfg.csv_in = p;
    cfg.out_report = tmp_path("plane_rep.json");
    CHECK(run_job(cfg) == 0);
    std::string rep = slurp(cfg.out_report);
    CHECK(rep.find("\"pass\": true") != std::string::npos);
    std::remove(p.c_str());
    std::remove(cfg.out_report.c_str());
}

TEST_CASE("expression data source drives the pipeline") {
    JobConfig cfg;
    cfg.verb = "gen";
    cfg.exprs["psi1"] = "1";
    cfg.exprs["psi2"] = "zbar";
    cfg.domain_set = true;
    cfg.h = 0.05;
    cfg.out_report = tmp_path("expr.json");
    CHECK(run_job(cfg) == 0);
    std::remove(cfg.out_report.c_str());

    JobConfig kt;
    kt.verb = "verify";
    kt.exprs["s1"] = "1";
    kt.exprs["s2"] = "0";
    kt.exprs["t1"] = "1";
    kt.exprs["t2"] = "z";
    kt.ambient = "r4";
    kt.domain_set = true;
    kt.h = 0.05;
    kt.out_report = tmp_path("expr4.json");
    CHECK(run_job(kt) == 0);
    std::remove(kt.out_report.c_str());
}

TEST_CASE("config files parse and flags semantics hold") {
    std::string cfg_path = tmp_path("cfg.json");
    {
        std::ofstream out(cfg_path);
        out << R"({
            "job": "gen",
            "ambient": "nil3",
            "tau": 0.5,
            "domain": {"x_min": -1, "x_max": 1, "y_min": -1, "y_max": 1, "h": 0.1},
            "source": {"builtin": "vertical-plane"},
            "tol_scale": 2.0
        })";
    }
    JobConfig cfg = config_from_json_file(cfg_path);
    CHECK(cfg.verb == "gen");
    CHECK(cfg.tau == 0.5);
    CHECK(cfg.h == 0.1);
    CHECK(cfg.builtin == "vertical-plane");
    CHECK(cfg.tol_scale == 2.0);
    cfg.out_report = tmp_path("cfg_rep.json");
    CHECK(run_job(cfg) == 0);
    std::remove(cfg_path.c_str());
    std::remove(cfg.out_report.c_str());
}
