#include "spinrep/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "spinrep/builtins.hpp"
#include "spinrep/expr.hpp"
#include "spinrep/io.hpp"

namespace spinrep {

namespace {

using nlohmann::json;

struct Check {
    ResidualReport report;
    double threshold;
    bool use_interior = false;
    bool pass() const { return (use_interior ? report.interior_max : report.max_abs) <= threshold; }
};

struct JobState {
    const JobConfig& cfg;
    std::vector<Check> checks;
    json extras = json::object();
    std::optional<Domain> dom;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    double thr(double C, double h, double floor_val = 1e-9) const {
        return cfg.tol_scale * std::max(C * h * h, floor_val);
    }
    void add(const ResidualReport& r, double threshold, bool interior = false) {
        checks.push_back({r, threshold, interior});
    }
};

Ambient ambient_from(const std::string& s) {
    if (s == "r3") return Ambient::R3;
    if (s == "nil3") return Ambient::Nil3;
    if (s == "r4") return Ambient::R4;
    throw std::invalid_argument("unknown ambient: " + s);
}

// the resolved data a job works on
struct SourceData {
    Ambient ambient = Ambient::R3;
    double tau = 0;
    std::optional<SpinorField3> spinor;
    std::optional<WeierstrassData> weierstrass;
    std::optional<Immersion> immersion;
    std::optional<KTData> kt;
};

SourceData resolve_source(const JobConfig& cfg) {
    SourceData src;
    if (!cfg.builtin.empty()) {
        Dataset ds = make_builtin(cfg.builtin, cfg.domain_set ? cfg.h : 0.0, cfg.tau);
        src.ambient = ds.ambient;
        src.tau = ds.tau;
        src.spinor = ds.spinor;
        src.weierstrass = ds.weierstrass;
        src.immersion = ds.immersion;
        src.kt = ds.kt;
        return src;
    }
    if (!cfg.csv_in.empty()) {
        std::ifstream probe(cfg.csv_in);
        std::string first;
        std::getline(probe, first);
        if (first.find(",spinor3,") != std::string::npos) {
            SpinorCsv sc = read_spinor3_csv(cfg.csv_in);
            src.ambient = sc.ambient;
            src.tau = sc.tau;
            src.spinor = sc.sf;
        } else if (first.find(",immersion,") != std::string::npos) {
            Immersion f = read_immersion_csv(cfg.csv_in);
            src.ambient = f.ambient;
            src.tau = f.tau;
            src.immersion = std::move(f);
        } else if (first.find(",kt,") != std::string::npos) {
            src.ambient = Ambient::R4;
            src.kt = read_kt_csv(cfg.csv_in);
        } else {
            throw std::invalid_argument(cfg.csv_in + ": unrecognized csv kind");
        }
        if (!cfg.ambient.empty()) src.ambient = ambient_from(cfg.ambient);
        if (cfg.tau > 0) src.tau = cfg.tau;
        return src;
    }
    if (!cfg.exprs.empty()) {
        Domain dom = Domain::with_spacing(cfg.x_min, cfg.x_max, cfg.y_min, cfg.y_max, cfg.h);
        src.ambient = cfg.ambient.empty() ? Ambient::R3 : ambient_from(cfg.ambient);
        src.tau = cfg.tau;
        auto field = [&](const std::string& key) { return Expr(cfg.exprs.at(key)).eval(dom); };
        if (cfg.exprs.count("psi1") && cfg.exprs.count("psi2")) {
            src.spinor = SpinorField3{field("psi1"), field("psi2")};
        } else if (cfg.exprs.count("g") && cfg.exprs.count("h")) {
            src.weierstrass = WeierstrassData{field("g"), field("h")};
            src.spinor = spinor_from_weierstrass(*src.weierstrass);
        } else if (cfg.exprs.count("s1") && cfg.exprs.count("s2") && cfg.exprs.count("t1") &&
                   cfg.exprs.count("t2")) {
            src.ambient = Ambient::R4;
            src.kt = KTData{field("s1"), field("s2"), field("t1"), field("t2")};
        } else {
            throw std::invalid_argument(
                "expression source needs psi1+psi2, g+h, or s1+s2+t1+t2");
        }
        return src;
    }
    throw std::invalid_argument("no data source: give a builtin, a csv, or expressions");
}

void spinor_residuals(JobState& st, const SpinorField3& sf, Ambient ambient, double tau) {
    const double h = sf.psi1.dom.h;
    Potential3 pot = potential_from_spinor(sf);
    st.add(pot.consistency, st.thr(50, h));
    DiracResidual dr = dirac_residual(sf, pot.U);
    st.add(dr.eq1, st.thr(50, h));
    st.add(dr.eq2, st.thr(50, h));
    if (ambient == Ambient::Nil3) {
        Field<double> law = combine(pot.U, combine(sf.psi1, sf.psi2, [](cplx a, cplx b) {
                                        return cplx(std::norm(b) - std::norm(a), 0);
                                    }),
                                    [&](cplx U, cplx d) {
                                        return std::abs(U.imag() - 0.25 * tau * d.real());
                                    });
        st.add(report_from_field(law, "nil3_potential_law"), st.thr(50, h));
        MaurerCartanField mc = mc_from_spinor(sf);
        st.add(nil3_integrability_residual(mc, tau).total, st.thr(50, h), true);
    } else {
        // row-first and column-first integrals of the representation integrand
        MaurerCartanField mc = mc_from_spinor(sf);
        st.add(path_independence_residual(mc.ax, mc.ay, sf.psi1.dom.base_ix(),
                                          sf.psi1.dom.base_iy(), "w3_path_independence"),
               st.thr(50, h));
    }
}

Immersion immerse_from_spinor(JobState& st, const SpinorField3& sf, Ambient ambient, double tau) {
    const double h = sf.psi1.dom.h;
    if (ambient == Ambient::Nil3) return immerse_nil3(sf, tau);
    ResidualReport closed;
    Immersion f = immerse_r3(sf, &closed);
    st.add(closed, st.thr(50, h), true);
    return f;
}

ResidualReport scalar_report(const std::string& name, double value, double h) {
    ResidualReport r;
    r.name = name;
    r.max_abs = r.mean_abs = r.interior_max = value;
    r.h = h;
    return r;
}

// theorem-witness residuals extracted from an immersed surface: surface data,
// normalized spinor, tangency compatibility, constancy, q-invariant, energy-momentum
void witness_residuals(JobState& st, const Immersion& f) {
    const double h = f.dom.h;
    SurfaceData3 sd = f.ambient == Ambient::Nil3 ? surface_data_nil3(f) : surface_data_r3(f);
    SpinorField3 sf = induced_spinor(f);
    Field<Quaternion> v(f.dom);
    for (int iy = 0; iy < f.dom.ny; ++iy)
        for (int ix = 0; ix < f.dom.nx; ++ix) {
            double s = std::sqrt(std::norm(sf.psi1.at(ix, iy)) + std::norm(sf.psi2.at(ix, iy)));
            v.at(ix, iy) =
                unsplit2(sf.psi1.at(ix, iy) / s, sf.psi2.at(ix, iy) / s, SplitConv::R3).value;
        }
    st.add(daniel_residual(sd), st.thr(200, h), true);
    ConstancyResidual cr = constancy_residual(sd, v);
    st.add(cr.vx, st.thr(200, h), true);
    st.add(cr.vy, st.thr(200, h), true);
    st.add(cr.norm, st.thr(10, h));
    QInvariant qi = q_invariant(v, sd);
    st.add(scalar_report("q_spread", qi.spread, h), st.thr(200, h));
    st.add(scalar_report("q_real_part", qi.max_re, h), st.thr(200, h));
    st.add(qi.vanishing, st.thr(200, h));
    st.add(em_tensor_residual(v, sd), st.thr(200, h), true);
}

// resolve KT data from an r4 source, extracting from an immersion if needed
struct R4Pipeline {
    KTData kt;
    Field<cplx> h;
    std::optional<TwistedSpinor4> ts;
};

R4Pipeline r4_pipeline(JobState& st, const SourceData& src) {
    R4Pipeline out;
    if (src.kt) {
        const double h = src.kt->s1.dom.h;
        st.add(integrability_residual(*src.kt), st.thr(50, h), true);
        GaugeFixResult g = gauge_fix(*src.kt);
        st.add(g.off_span, st.thr(50, h), true);
        out.kt = g.fixed;
        out.h = g.h;
    } else if (src.immersion) {
        const double h = src.immersion->dom.h;
        TwistedSpinor4 ts = build_ab_from_immersion(*src.immersion);
        TwistedDiracResidual tdr = twisted_dirac_residual(ts);
        st.add(tdr.a_eq, st.thr(50, h), true);
        st.add(tdr.b_eq, st.thr(50, h), true);
        ABBuildResult ab = build_AB_from_ab(ts);
        st.add(ab.xi_agreement, std::max(1e-10 * st.cfg.tol_scale, 1e-12));
        out.kt = ab.kt;
        out.h = ab.h;
        out.ts = std::move(ts);
    } else {
        throw std::invalid_argument("r4 job needs KT data or an immersion");
    }
    const double h = out.kt.s1.dom.h;
    KTDiracResidual kd = kt_dirac_residual(out.kt, out.h);
    st.add(kd.s1_eq, st.thr(50, h), true);
    st.add(kd.s2_eq, st.thr(50, h), true);
    st.add(kd.t1_eq, st.thr(50, h), true);
    st.add(kd.t2_eq, st.thr(50, h), true);
    st.add(kd.agreement, std::max(1e-10 * st.cfg.tol_scale, 1e-12));
    return out;
}

R4Projection projection_from(const JobConfig& cfg) {
    R4Projection proj;
    proj.kind = cfg.projection == "stereographic" ? R4Projection::Kind::Stereographic
                                                  : R4Projection::Kind::Orthogonal;
    proj.drop_axis = cfg.drop_axis;
    proj.pole = cfg.pole;
    return proj;
}

void verb_gen_or_verify(JobState& st, const SourceData& src, bool write_outputs) {
    const JobConfig& cfg = st.cfg;
    std::optional<Immersion> out_f;
    if (src.ambient == Ambient::R4) {
        R4Pipeline pipe = r4_pipeline(st, src);
        ResidualReport agree;
        Immersion f = kt_immerse(pipe.kt, nullptr, &agree);
        st.add(agree, std::max(1e-12, 1e-12 * cfg.tol_scale));
        FirstForm ff = first_form(f);
        st.add(ff.conformality, st.thr(200, f.dom.h), true);
        if (write_outputs && !cfg.out_csv.empty()) write_kt_csv(cfg.out_csv, pipe.kt);
        out_f = std::move(f);
    } else {
        std::optional<SpinorField3> spinor = src.spinor;
        if (!spinor && src.immersion) spinor = induced_spinor(*src.immersion);
        if (!spinor) throw std::invalid_argument("this job needs spinor data or an immersion");
        spinor_residuals(st, *spinor, src.ambient, src.tau);
        Immersion f = immerse_from_spinor(st, *spinor, src.ambient, src.tau);
        FirstForm ff = first_form(f);
        st.add(ff.conformality, st.thr(200, f.dom.h), true);
        if (src.ambient == Ambient::R3) {
            CurvatureR3 cv = mean_curvature_r3(f);
            st.extras["mean_curvature"] = {
                {"max", report_from_field(cv.H, "H").max_abs},
                {"interior_max", report_from_field(cv.H, "H").interior_max}};
        }
        if (!write_outputs) witness_residuals(st, f);  // verify runs the full battery
        if (write_outputs && !cfg.out_csv.empty())
            write_spinor3_csv(cfg.out_csv, *spinor, src.ambient, src.tau);
        out_f = std::move(f);
    }
    if (write_outputs && !cfg.out_obj.empty()) write_obj(cfg.out_obj, *out_f, projection_from(cfg));
}

void verb_roundtrip(JobState& st, const SourceData& src) {
    if (src.ambient == Ambient::R4) {
        if (!src.immersion) throw std::invalid_argument("r4 roundtrip needs an immersion");
        TwistedSpinor4 ts = build_ab_from_immersion(*src.immersion);
        Immersion f2 = xi_immerse(ts);
        CongruenceResult cr = congruence(f2, *src.immersion);
        st.add(scalar_report("roundtrip_congruence_rms", cr.rms, src.immersion->dom.h),
               st.cfg.tol_scale * 1e-4);
        return;
    }
    Immersion f = src.immersion ? *src.immersion
                                : immerse_from_spinor(st, *src.spinor, src.ambient, src.tau);
    if (src.ambient != Ambient::R3)
        throw std::invalid_argument("roundtrip supports r3 and r4 immersions");
    SpinorField3 back = induced_spinor(f);
    Immersion f2 = immerse_r3(back);
    Immersion f1 = src.spinor ? immerse_r3(*src.spinor) : f;
    CongruenceResult cr = congruence(f2, f1);
    st.add(scalar_report("roundtrip_congruence_rms", cr.rms, f.dom.h), st.cfg.tol_scale * 1e-4);
    if (src.spinor) {
        double errp = 0, errm = 0;
        const Domain& dom = f.dom;
        for (int iy = 1; iy < dom.ny - 1; ++iy)
            for (int ix = 1; ix < dom.nx - 1; ++ix) {
                errp = std::max(
                    {errp, std::abs(back.psi1.at(ix, iy) - src.spinor->psi1.at(ix, iy)),
                     std::abs(back.psi2.at(ix, iy) - src.spinor->psi2.at(ix, iy))});
                errm = std::max(
                    {errm, std::abs(back.psi1.at(ix, iy) + src.spinor->psi1.at(ix, iy)),
                     std::abs(back.psi2.at(ix, iy) + src.spinor->psi2.at(ix, iy))});
            }
        st.add(scalar_report("spinor_recovery_interior", std::min(errp, errm), dom.h),
               st.cfg.tol_scale * 1e-6);
    }
    if (!st.cfg.out_csv.empty()) write_spinor3_csv(st.cfg.out_csv, back, src.ambient, src.tau);
}

void verb_convert(JobState& st, const SourceData& src) {
    const JobConfig& cfg = st.cfg;
    if (cfg.convert_to == "spinor") {
        if (!src.weierstrass) throw std::invalid_argument("convert to spinor needs g and h");
        SpinorField3 sf = spinor_from_weierstrass(*src.weierstrass);
        spinor_residuals(st, sf, Ambient::R3, 0);
        if (!cfg.out_csv.empty()) write_spinor3_csv(cfg.out_csv, sf, Ambient::R3, 0);
        return;
    }
    if (cfg.convert_to == "weierstrass") {
        if (!src.spinor) throw std::invalid_argument("convert to weierstrass needs spinor data");
        // h = psi1^2, g = conj(psi2)/psi1
        Field<cplx> hf = src.spinor->psi1.map([](cplx p) { return p * p; });
        Field<cplx> gf = combine(src.spinor->psi2, src.spinor->psi1,
                                 [](cplx p2, cplx p1) { return std::conj(p2) / p1; });
        if (!cfg.out_csv.empty()) {
            write_field_csv(cfg.out_csv + ".g.csv", gf, "g");
            write_field_csv(cfg.out_csv + ".h.csv", hf, "h");
        }
        return;
    }
    if (cfg.convert_to == "gauge" || cfg.convert_to == "kt") {
        R4Pipeline pipe = r4_pipeline(st, src);
        if (!cfg.out_csv.empty()) {
            write_kt_csv(cfg.out_csv, pipe.kt);
            write_field_csv(cfg.out_csv + ".h.csv", pipe.h, "h");
        }
        return;
    }
    throw std::invalid_argument("convert needs --to spinor|weierstrass|gauge|kt");
}

void verb_export(JobState& st, const SourceData& src) {
    const JobConfig& cfg = st.cfg;
    Immersion f = src.immersion ? *src.immersion
                                : (src.kt ? kt_immerse(*src.kt)
                                          : immerse_from_spinor(st, *src.spinor, src.ambient,
                                                                src.tau));
    if (!cfg.out_obj.empty()) write_obj(cfg.out_obj, f, projection_from(cfg));
    if (!cfg.out_csv.empty()) write_immersion_csv(cfg.out_csv, f);
}

json report_json(const JobState& st, bool ok) {
    json rep;
    rep["job"] = {{"verb", st.cfg.verb},
                  {"builtin", st.cfg.builtin},
                  {"csv_in", st.cfg.csv_in},
                  {"ambient", st.cfg.ambient},
                  {"tau", st.cfg.tau},
                  {"tol_scale", st.cfg.tol_scale}};
    json rs = json::array();
    for (const Check& c : st.checks)
        rs.push_back({{"name", c.report.name},
                      {"max", c.report.max_abs},
                      {"mean", c.report.mean_abs},
                      {"interior_max", c.report.interior_max},
                      {"threshold", c.threshold},
                      {"checked", c.use_interior ? "interior_max" : "max"},
                      {"pass", c.pass()}});
    rep["residuals"] = rs;
    if (st.dom)
        rep["grid"] = {{"h", st.dom->h}, {"nx", st.dom->nx}, {"ny", st.dom->ny}};
    else
        rep["grid"] = json::object();
    rep["pass"] = ok;
    if (!st.extras.empty()) rep["extras"] = st.extras;
    if (st.cfg.timings) {
        rep["timings"] = {{"wall_seconds",
                           std::chrono::duration<double>(std::chrono::steady_clock::now() - st.t0)
                               .count()}};
    } else {
        rep["timings"] = json::object();
    }
    return rep;
}

void write_report(const JobConfig& cfg, const json& rep) {
    if (!cfg.out_report.empty()) {
        std::ofstream out(cfg.out_report);
        out << rep.dump(2) << "\n";
    } else {
        std::cout << rep.dump(2) << "\n";
    }
}

}  // namespace

JobConfig config_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config " + path);
    json j = json::parse(in);
    JobConfig cfg;
    cfg.verb = j.value("job", "");
    cfg.ambient = j.value("ambient", "");
    cfg.tau = j.value("tau", 0.0);
    if (j.contains("domain")) {
        const json& d = j["domain"];
        cfg.domain_set = true;
        cfg.x_min = d.value("x_min", -1.0);
        cfg.x_max = d.value("x_max", 1.0);
        cfg.y_min = d.value("y_min", -1.0);
        cfg.y_max = d.value("y_max", 1.0);
        cfg.h = d.value("h", 0.01);
    }
    if (j.contains("source")) {
        const json& s = j["source"];
        cfg.builtin = s.value("builtin", "");
        cfg.csv_in = s.value("csv", "");
        for (const char* key : {"psi1", "psi2", "g", "h", "s1", "s2", "t1", "t2"})
            if (s.contains(key)) cfg.exprs[key] = s[key].get<std::string>();
    }
    if (j.contains("out")) {
        const json& o = j["out"];
        cfg.out_obj = o.value("obj", "");
        cfg.out_csv = o.value("csv", "");
        cfg.out_report = o.value("report", "");
    }
    cfg.tol_scale = j.value("tol_scale", 1.0);
    cfg.convert_to = j.value("convert_to", "");
    if (j.contains("projection")) {
        const json& p = j["projection"];
        cfg.projection = p.value("type", "orthogonal");
        cfg.drop_axis = p.value("drop", 3);
        if (p.contains("pole"))
            for (int i = 0; i < 4; ++i) cfg.pole[i] = p["pole"][i].get<double>();
    }
    cfg.timings = j.value("timings", false);
    return cfg;
}

int run_job(const JobConfig& cfg) {
    JobState st{cfg};
    try {
        if (cfg.ambient == "nil3" && !(cfg.tau > 0) && cfg.builtin.empty())
            throw std::invalid_argument("nil3 jobs need --tau");
        SourceData src = resolve_source(cfg);
        if (src.spinor) st.dom = src.spinor->psi1.dom;
        else if (src.immersion) st.dom = src.immersion->dom;
        else if (src.kt) st.dom = src.kt->s1.dom;
        if (cfg.verb == "gen") verb_gen_or_verify(st, src, true);
        else if (cfg.verb == "verify") verb_gen_or_verify(st, src, false);
        else if (cfg.verb == "roundtrip") verb_roundtrip(st, src);
        else if (cfg.verb == "convert") verb_convert(st, src);
        else if (cfg.verb == "export") verb_export(st, src);
        else throw std::invalid_argument("unknown verb: " + cfg.verb);
    } catch (const std::exception& e) {
        json err = {{"error", e.what()}, {"job", cfg.verb}};
        write_report(cfg, err);
        return 2;
    }
    bool ok = true;
    for (const Check& c : st.checks) ok = ok && c.pass();
    if (cfg.verb == "verify" && !cfg.out_csv.empty()) {
        std::vector<ResidualReport> rs;
        for (const Check& c : st.checks) rs.push_back(c.report);
        write_residuals_csv(cfg.out_csv, rs);
    }
    json rep = report_json(st, ok);
    write_report(cfg, rep);
    return ok ? 0 : 1;
}

}  // namespace spinrep
