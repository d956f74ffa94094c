#include "spinrep/dirac4.hpp"

#include <cmath>
#include <stdexcept>

namespace spinrep {

Field<Quaternion> KTData::A() const {
    return combine(s1, s2, [](cplx a, cplx b) {
        return Quaternion::from_complex_pair(std::conj(a), -std::conj(b));
    });
}

Field<Quaternion> KTData::B() const {
    return combine(t1, t2, [](cplx a, cplx b) { return Quaternion::from_complex_pair(a, b); });
}

namespace {

Field<cplx> conj_field(const Field<cplx>& f) {
    return f.map([](cplx c) { return std::conj(c); });
}

struct KTDerivs {
    Field<cplx> s1_zbar, s2bar_z, t1_zbar, t2bar_z;
};

KTDerivs kt_derivs(const KTData& kt, int order) {
    if (kt.has_exact_derivs) return {kt.s1_zbar, kt.s2bar_z, kt.t1_zbar, kt.t2bar_z};
    return {d_dzbar(kt.s1, order), d_dz(conj_field(kt.s2), order), d_dzbar(kt.t1, order),
            d_dz(conj_field(kt.t2), order)};
}

}  // namespace

KTDiracResidual kt_dirac_residual(const KTData& kt, const Field<cplx>& h, int order) {
    KTDerivs d = kt_derivs(kt, order);
    const Domain& dom = kt.s1.dom;
    Field<cplx> r1(dom), r2(dom), r3(dom), r4(dom);
    Field<double> qa(dom), qb(dom), agree(dom);
    for (int iy = 0; iy < dom.ny; ++iy)
        for (int ix = 0; ix < dom.nx; ++ix) {
            cplx hv = h.at(ix, iy);
            cplx s1 = kt.s1.at(ix, iy), s2 = kt.s2.at(ix, iy);
            cplx t1 = kt.t1.at(ix, iy), t2 = kt.t2.at(ix, iy);
            r1.at(ix, iy) = d.s1_zbar.at(ix, iy) + std::conj(hv) * std::conj(s2);
            r2.at(ix, iy) = d.s2bar_z.at(ix, iy) - hv * s1;
            r3.at(ix, iy) = d.t1_zbar.at(ix, iy) + hv * std::conj(t2);
            r4.at(ix, iy) = d.t2bar_z.at(ix, iy) - std::conj(hv) * t1;

            // quaternionic form, assembled from the same discrete derivatives:
            // dz\dA = conj(ds1/dzbar) - (d conj(s2)/dz) j, dzbar\dB = dt1/dzbar + conj(d conj(t2)/dz) j
            Quaternion A = Quaternion::from_complex_pair(std::conj(s1), -std::conj(s2));
            Quaternion B = Quaternion::from_complex_pair(t1, t2);
            Quaternion dA = Quaternion::from_complex_pair(std::conj(d.s1_zbar.at(ix, iy)),
                                                          -d.s2bar_z.at(ix, iy));
            Quaternion dB = Quaternion::from_complex_pair(d.t1_zbar.at(ix, iy),
                                                          std::conj(d.t2bar_z.at(ix, iy)));
            Quaternion hq = Quaternion::from_complex_pair(hv, 0);
            Quaternion ra = dA * A.inverse() + hq * Q_J;
            Quaternion rb = dB * B.inverse() - hq * Q_J;
            qa.at(ix, iy) = ra.norm();
            qb.at(ix, iy) = rb.norm();
            double comp_a = std::sqrt(std::norm(r1.at(ix, iy)) + std::norm(r2.at(ix, iy))) / A.norm();
            double comp_b = std::sqrt(std::norm(r3.at(ix, iy)) + std::norm(r4.at(ix, iy))) / B.norm();
            agree.at(ix, iy) =
                std::max(std::abs(qa.at(ix, iy) - comp_a), std::abs(qb.at(ix, iy) - comp_b));
        }
    KTDiracResidual out;
    out.s1_eq = report_from_field(r1, "kt_dirac_s1");
    out.s2_eq = report_from_field(r2, "kt_dirac_s2");
    out.t1_eq = report_from_field(r3, "kt_dirac_t1");
    out.t2_eq = report_from_field(r4, "kt_dirac_t2");
    out.A_eq = report_from_field(qa, "kt_dirac_A");
    out.B_eq = report_from_field(qb, "kt_dirac_B");
    out.agreement = report_from_field(agree, "kt_dirac_form_agreement");
    return out;
}

ResidualReport integrability_residual(const KTData& kt, int order) {
    Field<Quaternion> A = kt.A();
    Field<Quaternion> B = kt.B();
    Field<Quaternion> Abar = A.map([](const Quaternion& q) { return q.conj(); });
    Field<Quaternion> dAbar = d_dzbar_right(Abar, order);
    Field<Quaternion> dB = d_dzbar_left(B, order);
    Field<Quaternion> res(A.dom);
    for (std::size_t i = 0; i < res.values.size(); ++i) {
        const Quaternion& ab = Abar.values[i];
        const Quaternion& b = B.values[i];
        res.values[i] = ab.inverse() * dAbar.values[i] * Q_I + Q_I * dB.values[i] * b.inverse();
    }
    return report_from_field(res, "kt_integrability");
}

Immersion kt_immerse(const KTData& kt, ResidualReport* integrability,
                     ResidualReport* form_agreement) {
    if (integrability) *integrability = integrability_residual(kt);
    const Domain& dom = kt.s1.dom;
    Field<Quaternion> P(dom), Q(dom), diff(dom);
    for (int iy = 0; iy < dom.ny; ++iy)
        for (int ix = 0; ix < dom.nx; ++ix) {
            cplx s1 = kt.s1.at(ix, iy), s2 = kt.s2.at(ix, iy);
            cplx t1 = kt.t1.at(ix, iy), t2 = kt.t2.at(ix, iy);
            Quaternion A = Quaternion::from_complex_pair(std::conj(s1), -std::conj(s2));
            Quaternion B = Quaternion::from_complex_pair(t1, t2);
            Quaternion fx = A.conj() * B;
            Quaternion fy = A.conj() * Q_I * B;
            // componentwise (W4) integrand
            cplx s2b = std::conj(s2), t1b = std::conj(t1), t2b = std::conj(t2);
            Quaternion fx_c = Quaternion::from_complex_pair(s1 * t1 - s2b * t2b, s1 * t2 + s2b * t1b);
            Quaternion fy_c =
                Q_I * Quaternion::from_complex_pair(s1 * t1 + s2b * t2b, s1 * t2 - s2b * t1b);
            P.at(ix, iy) = fx;
            Q.at(ix, iy) = fy;
            diff.at(ix, iy) = (fx - fx_c) + (fy - fy_c);
        }
    if (form_agreement) *form_agreement = report_from_field(diff, "w4_form_agreement");
    Immersion f;
    f.ambient = Ambient::R4;
    f.dom = dom;
    f.p4 = integrate_form(P, Q, dom.base_ix(), dom.base_iy());
    f.has_exact_derivs = true;
    f.fx4 = std::move(P);
    f.fy4 = std::move(Q);
    return f;
}

GaugeFixResult gauge_fix(const KTData& kt) {
    Field<Quaternion> B = kt.B();
    Field<Quaternion> dB = d_dzbar_left(B);
    const Domain& dom = B.dom;
    Field<double> Px(dom), Py(dom);
    for (int iy = 0; iy < dom.ny; ++iy)
        for (int ix = 0; ix < dom.nx; ++ix) {
            Quaternion G = dB.at(ix, iy) * B.at(ix, iy).inverse();
            cplx c{G.w, G.x};
            cplx ic = cplx(0, 1) * c;  // d alpha / d zbar must equal i c
            Px.at(ix, iy) = 2.0 * ic.real();
            Py.at(ix, iy) = 2.0 * ic.imag();
        }
    GaugeFixResult out;
    out.closedness = closedness_residual(Px, Py, "gauge_closedness");
    out.alpha = integrate_form(Px, Py, dom.base_ix(), dom.base_iy());

    out.fixed.s1 = Field<cplx>(dom);
    out.fixed.s2 = Field<cplx>(dom);
    out.fixed.t1 = Field<cplx>(dom);
    out.fixed.t2 = Field<cplx>(dom);
    for (int iy = 0; iy < dom.ny; ++iy)
        for (int ix = 0; ix < dom.nx; ++ix) {
            cplx ea = std::exp(cplx(0, out.alpha.at(ix, iy)));
            out.fixed.s1.at(ix, iy) = std::conj(ea) * kt.s1.at(ix, iy);
            out.fixed.s2.at(ix, iy) = std::conj(ea) * kt.s2.at(ix, iy);
            out.fixed.t1.at(ix, iy) = ea * kt.t1.at(ix, iy);
            out.fixed.t2.at(ix, iy) = ea * kt.t2.at(ix, iy);
        }

    Field<Quaternion> Bf = out.fixed.B();
    Field<Quaternion> dBf = d_dzbar_left(Bf);
    out.h = Field<cplx>(dom);
    Field<double> off(dom);
    for (int iy = 0; iy < dom.ny; ++iy)
        for (int ix = 0; ix < dom.nx; ++ix) {
            Quaternion G = dBf.at(ix, iy) * Bf.at(ix, iy).inverse();
            out.h.at(ix, iy) = cplx{G.y, G.z};
            off.at(ix, iy) = std::abs(cplx{G.w, G.x});
        }
    // report the span(1,i) defect of the A-side logarithmic derivative as well
    Field<Quaternion> Af = out.fixed.A();
    Field<Quaternion> dAf = d_dz_left(Af);
    Field<double> offA(dom);
    for (int iy = 0; iy < dom.ny; ++iy)
        for (int ix = 0; ix < dom.nx; ++ix) {
            Quaternion G = dAf.at(ix, iy) * Af.at(ix, iy).inverse();
            offA.at(ix, iy) = std::abs(cplx{G.w, G.x});
        }
    Field<double> off_both = combine(off, offA, [](double a, double b) { return std::max(a, b); });
    out.off_span = report_from_field(off_both, "gauge_off_span");
    // two chained one-sided stencils pollute the outer two rings; the quoted
    // interior figure starts at ring 2
    out.off_span.interior_max = interior_max_ring(off_both, 2);
    return out;
}

namespace {

// discrete d/dzbar and its adjoint, matrix-free
Field<cplx> dbar_apply(const Field<cplx>& w) { return d_dzbar(w); }

void line_deriv_adjoint_accumulate(std::vector<cplx>& out, const std::vector<cplx>& in, int n,
                                   double h, int stride, int base) {
    auto add = [&](int idx, int from, double c) { out[base + idx * stride] += c * in[base + from * stride]; };
    // row 0: (-3 f0 + 4 f1 - f2)/2h ; row n-1 mirrored; interior centered
    add(0, 0, -1.5 / h);
    add(1, 0, 2.0 / h);
    add(2, 0, -0.5 / h);
    add(n - 1, n - 1, 1.5 / h);
    add(n - 2, n - 1, -2.0 / h);
    add(n - 3, n - 1, 0.5 / h);
    for (int i = 1; i < n - 1; ++i) {
        add(i - 1, i, -0.5 / h);
        add(i + 1, i, 0.5 / h);
    }
}

Field<cplx> dx_adjoint(const Field<cplx>& r) {
    Field<cplx> out(r.dom);
    for (int iy = 0; iy < r.dom.ny; ++iy)
        line_deriv_adjoint_accumulate(out.values, r.values, r.dom.nx, r.dom.h, 1,
                                      iy * r.dom.nx);
    return out;
}

Field<cplx> dy_adjoint(const Field<cplx>& r) {
    Field<cplx> out(r.dom);
    for (int ix = 0; ix < r.dom.nx; ++ix)
        line_deriv_adjoint_accumulate(out.values, r.values, r.dom.ny, r.dom.h, r.dom.nx, ix);
    return out;
}

Field<cplx> dbar_adjoint(const Field<cplx>& r) {
    auto ax = dx_adjoint(r);
    auto ay = dy_adjoint(r);
    return combine(ax, ay, [](cplx a, cplx b) { return 0.5 * (a - cplx(0, 1) * b); });
}

double dot_re(const Field<cplx>& a, const Field<cplx>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        s += std::real(std::conj(a.values[i]) * b.values[i]);
    return s;
}

}  // namespace

namespace {

// CGLS: least squares on D w = g keeping the true residual explicit
Field<cplx> dbar_cgls(const Field<cplx>& rhs, const Field<cplx>& x0, double tol, int max_iter) {
    Field<cplx> x = x0;
    Field<cplx> s = combine(rhs, dbar_apply(x), [](cplx a, cplx b) { return a - b; });
    Field<cplx> r = dbar_adjoint(s);
    Field<cplx> p = r;
    double rr = dot_re(r, r);
    const double bb = dot_re(rhs, rhs);
    const double stop = tol * tol * std::max(bb, 1e-300);
    for (int it = 0; it < max_iter && rr > stop; ++it) {
        Field<cplx> q = dbar_apply(p);
        double qq = dot_re(q, q);
        if (qq <= 0) break;
        double alpha = rr / qq;
        for (std::size_t i = 0; i < x.values.size(); ++i) {
            x.values[i] += alpha * p.values[i];
            s.values[i] -= alpha * q.values[i];
        }
        Field<cplx> rn = dbar_adjoint(s);
        double rr_new = dot_re(rn, rn);
        double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t i = 0; i < p.values.size(); ++i)
            p.values[i] = rn.values[i] + beta * p.values[i];
    }
    return x;
}

bool coarsenable(const Domain& d) { return d.nx % 2 == 1 && d.ny % 2 == 1 && d.nx >= 33 && d.ny >= 33; }

Field<cplx> restrict_half(const Field<cplx>& f) {
    Domain c(f.dom.x_min, f.dom.x_max, f.dom.y_min, f.dom.y_max, (f.dom.nx + 1) / 2,
             (f.dom.ny + 1) / 2);
    Field<cplx> out(c);
    for (int iy = 0; iy < c.ny; ++iy)
        for (int ix = 0; ix < c.nx; ++ix) out.at(ix, iy) = f.at(2 * ix, 2 * iy);
    return out;
}

Field<cplx> prolong_double(const Field<cplx>& c, const Domain& fine) {
    Field<cplx> out(fine);
    for (int iy = 0; iy < fine.ny; ++iy)
        for (int ix = 0; ix < fine.nx; ++ix) {
            int cx = ix / 2, cy = iy / 2;
            bool ex = ix % 2, ey = iy % 2;
            int cx1 = std::min(cx + 1, c.dom.nx - 1), cy1 = std::min(cy + 1, c.dom.ny - 1);
            cplx v00 = c.at(cx, cy), v10 = c.at(cx1, cy), v01 = c.at(cx, cy1), v11 = c.at(cx1, cy1);
            if (!ex && !ey) out.at(ix, iy) = v00;
            else if (ex && !ey) out.at(ix, iy) = 0.5 * (v00 + v10);
            else if (!ex && ey) out.at(ix, iy) = 0.5 * (v00 + v01);
            else out.at(ix, iy) = 0.25 * (v00 + v10 + v01 + v11);
        }
    return out;
}

}  // namespace

Field<cplx> dbar_solve(const Field<cplx>& rhs, double tol, int max_iter) {
    // coarse-to-fine cascade gives CGLS a smooth initial guess
    Field<cplx> x0(rhs.dom);
    if (coarsenable(rhs.dom)) {
        Field<cplx> coarse = dbar_solve(restrict_half(rhs), tol, max_iter);
        x0 = prolong_double(coarse, rhs.dom);
    }
    return dbar_cgls(rhs, x0, tol, max_iter);
}

TwistedDiracResidual twisted_dirac_residual(const TwistedSpinor4& ts, int order) {
    const Domain& dom = ts.a.dom;
    for (const Quaternion& q : ts.a.values)
        if (std::abs(q.norm() - 1.0) > 1e-8)
            throw std::invalid_argument("twisted_dirac_residual: |a| drifted from 1");
    for (const Quaternion& q : ts.b.values)
        if (std::abs(q.norm() - 1.0) > 1e-8)
            throw std::invalid_argument("twisted_dirac_residual: |b| drifted from 1");

    Field<Quaternion> da = d_dz_left(ts.a, order);
    Field<Quaternion> db = d_dzbar_left(ts.b, order);
    Field<double> rx = ts.has_exact_rho_derivs ? ts.rho_x : d_dx(ts.rho, order);
    Field<double> ry = ts.has_exact_rho_derivs ? ts.rho_y : d_dy(ts.rho, order);
    Field<Quaternion> ra(dom), rb(dom);
    for (int iy = 0; iy < dom.ny; ++iy)
        for (int ix = 0; ix < dom.nx; ++ix) {
            double er = std::exp(ts.rho.at(ix, iy));
            cplx rho_z{0.5 * rx.at(ix, iy), -0.5 * ry.at(ix, iy)};
            cplx rho_zb = std::conj(rho_z);
            cplx cc{ts.cy.at(ix, iy), ts.cx.at(ix, iy)};   // c_y + i c_x
            cplx ccm{ts.cy.at(ix, iy), -ts.cx.at(ix, iy)};  // c_y - i c_x
            Quaternion Hjk = Quaternion::from_complex_pair(0, {ts.H3.at(ix, iy), ts.H4.at(ix, iy)});
            ra.at(ix, iy) = 2.0 * da.at(ix, iy) * ts.a.at(ix, iy).inverse() +
                            Quaternion::from_complex_pair(rho_z + 0.5 * cc, 0) + er * Hjk;
            rb.at(ix, iy) = 2.0 * db.at(ix, iy) * ts.b.at(ix, iy).inverse() +
                            Quaternion::from_complex_pair(rho_zb - 0.5 * ccm, 0) - er * Hjk;
        }
    return {report_from_field(ra, "twisted_dirac_a"), report_from_field(rb, "twisted_dirac_b")};
}

ABBuildResult build_AB_from_ab(const TwistedSpinor4& ts) {
    const Domain& dom = ts.a.dom;
    Field<cplx> rhs(dom);
    for (int iy = 0; iy < dom.ny; ++iy)
        for (int ix = 0; ix < dom.nx; ++ix)
            rhs.at(ix, iy) = 0.25 * cplx{ts.cy.at(ix, iy), -ts.cx.at(ix, iy)};
    Field<cplx> w = dbar_solve(rhs);

    ABBuildResult out;
    out.u = w.map([](cplx c) { return c.real(); });
    out.v = w.map([](cplx c) { return -c.imag(); });
    out.kt.s1 = Field<cplx>(dom);
    out.kt.s2 = Field<cplx>(dom);
    out.kt.t1 = Field<cplx>(dom);
    out.kt.t2 = Field<cplx>(dom);
    out.h = Field<cplx>(dom);
    Field<Quaternion> agree(dom);
    for (int iy = 0; iy < dom.ny; ++iy)
        for (int ix = 0; ix < dom.nx; ++ix) {
            double uu = out.u.at(ix, iy), vv = out.v.at(ix, iy), rho = ts.rho.at(ix, iy);
            cplx scaleA = std::exp(cplx(uu + rho / 2, vv));
            cplx scaleB = std::exp(cplx(-uu + rho / 2, vv));
            Quaternion A = cmul_left(scaleA, ts.a.at(ix, iy));
            Quaternion B = cmul_left(scaleB, ts.b.at(ix, iy));
            out.kt.s1.at(ix, iy) = std::conj(A.complex1());
            out.kt.s2.at(ix, iy) = -std::conj(A.complex2());
            out.kt.t1.at(ix, iy) = B.complex1();
            out.kt.t2.at(ix, iy) = B.complex2();
            out.h.at(ix, iy) = 0.5 * std::exp(rho) * std::exp(cplx(0, 2 * vv)) *
                               cplx{ts.H3.at(ix, iy), ts.H4.at(ix, iy)};
            // xi-form identity: conj(A) dz B == e^rho a^-1 dz b
            Quaternion lhs_x = A.conj() * B;
            Quaternion lhs_y = A.conj() * Q_I * B;
            Quaternion rhs_x = std::exp(rho) * (ts.a.at(ix, iy).inverse() * ts.b.at(ix, iy));
            Quaternion rhs_y =
                std::exp(rho) * (ts.a.at(ix, iy).inverse() * Q_I * ts.b.at(ix, iy));
            agree.at(ix, iy) = (lhs_x - rhs_x) + (lhs_y - rhs_y);
        }
    out.xi_agreement = report_from_field(agree, "xi_form_agreement");
    return out;
}

Immersion xi_immerse(const TwistedSpinor4& ts, ResidualReport* closedness) {
    const Domain& dom = ts.a.dom;
    Field<Quaternion> P(dom), Q(dom);
    for (int iy = 0; iy < dom.ny; ++iy)
        for (int ix = 0; ix < dom.nx; ++ix) {
            double er = std::exp(ts.rho.at(ix, iy));
            Quaternion ai = ts.a.at(ix, iy).inverse();
            P.at(ix, iy) = er * (ai * ts.b.at(ix, iy));
            Q.at(ix, iy) = er * (ai * Q_I * ts.b.at(ix, iy));
        }
    if (closedness) *closedness = closedness_residual(P, Q, "xi_closedness");
    Immersion f;
    f.ambient = Ambient::R4;
    f.dom = dom;
    f.p4 = integrate_form(P, Q, dom.base_ix(), dom.base_iy());
    f.has_exact_derivs = true;
    f.fx4 = std::move(P);
    f.fy4 = std::move(Q);
    return f;
}

namespace {

double det4(const Quaternion& c0, const Quaternion& c1, const Quaternion& c2,
            const Quaternion& c3) {
    double m[4][4] = {{c0.w, c1.w, c2.w, c3.w},
                      {c0.x, c1.x, c2.x, c3.x},
                      {c0.y, c1.y, c2.y, c3.y},
                      {c0.z, c1.z, c2.z, c3.z}};
    // cofactor expansion along the first row with 3x3 minors
    auto det3 = [&](int r0, int r1, int r2, int k0, int k1, int k2) {
        return m[r0][k0] * (m[r1][k1] * m[r2][k2] - m[r1][k2] * m[r2][k1]) -
               m[r0][k1] * (m[r1][k0] * m[r2][k2] - m[r1][k2] * m[r2][k0]) +
               m[r0][k2] * (m[r1][k0] * m[r2][k1] - m[r1][k1] * m[r2][k0]);
    };
    return m[0][0] * det3(1, 2, 3, 1, 2, 3) - m[0][1] * det3(1, 2, 3, 0, 2, 3) +
           m[0][2] * det3(1, 2, 3, 0, 1, 3) - m[0][3] * det3(1, 2, 3, 0, 1, 2);
}

}  // namespace

TwistedSpinor4 build_ab_from_immersion(const Immersion& f, double conformality_tol) {
    if (f.ambient != Ambient::R4) throw std::invalid_argument("build_ab_from_immersion: not R4");
    FirstForm ff = first_form(f);
    if (ff.conformality.max_abs > conformality_tol)
        throw std::invalid_argument("build_ab_from_immersion: immersion is not conformal");
    auto [fx, fy] = tangent_fields4(f);
    const Domain& dom = f.dom;

    Field<Quaternion> e1(dom), e2(dom), e3(dom), e4(dom);
    for (int iy = 0; iy < dom.ny; ++iy)
        for (int ix = 0; ix < dom.nx; ++ix) {
            Quaternion tx = fx.at(ix, iy), ty = fy.at(ix, iy);
            double n1 = tx.norm();
            if (!(n1 > 0)) throw std::invalid_argument("build_ab_from_immersion: degenerate frame");
            Quaternion u1 = tx / n1;
            Quaternion u2 = ty - dot(ty, u1) * u1;
            u2 = u2 / u2.norm();
            e1.at(ix, iy) = u1;
            e2.at(ix, iy) = u2;
        }

    // normal frame: Gram-Schmidt from the two coordinate directions most
    // transverse to the tangent plane at the base point, then parallel
    // propagation along the base row and up each column
    const Quaternion cands[4] = {Q_ONE, Q_I, Q_J, Q_K};
    int bx = dom.base_ix(), by = dom.base_iy();
    double score[4];
    for (int c = 0; c < 4; ++c) {
        double s1 = dot(cands[c], e1.at(bx, by));
        double s2 = dot(cands[c], e2.at(bx, by));
        score[c] = s1 * s1 + s2 * s2;
    }
    int i3 = 0;
    for (int c = 1; c < 4; ++c)
        if (score[c] < score[i3]) i3 = c;
    int i4 = i3 == 0 ? 1 : 0;
    for (int c = 0; c < 4; ++c)
        if (c != i3 && score[c] < score[i4]) i4 = c;

    auto set_frame = [&](int ix, int iy, const Quaternion& seed3, const Quaternion& seed4) {
        const Quaternion &u1 = e1.at(ix, iy), &u2 = e2.at(ix, iy);
        Quaternion n3 = seed3 - dot(seed3, u1) * u1 - dot(seed3, u2) * u2;
        double nn3 = n3.norm();
        if (nn3 < 0.25)
            throw std::invalid_argument("build_ab_from_immersion: normal frame degenerated");
        n3 = n3 / nn3;
        Quaternion n4 =
            seed4 - dot(seed4, u1) * u1 - dot(seed4, u2) * u2 - dot(seed4, n3) * n3;
        double nn4 = n4.norm();
        if (nn4 < 0.25)
            throw std::invalid_argument("build_ab_from_immersion: normal frame degenerated");
        n4 = n4 / nn4;
        if (det4(u1, u2, n3, n4) < 0) n4 = -n4;
        e3.at(ix, iy) = n3;
        e4.at(ix, iy) = n4;
    };
    set_frame(bx, by, cands[i3], cands[i4]);
    for (int ix = bx + 1; ix < dom.nx; ++ix)
        set_frame(ix, by, e3.at(ix - 1, by), e4.at(ix - 1, by));
    for (int ix = bx - 1; ix >= 0; --ix)
        set_frame(ix, by, e3.at(ix + 1, by), e4.at(ix + 1, by));
    for (int ix = 0; ix < dom.nx; ++ix) {
        for (int iy = by + 1; iy < dom.ny; ++iy)
            set_frame(ix, iy, e3.at(ix, iy - 1), e4.at(ix, iy - 1));
        for (int iy = by - 1; iy >= 0; --iy)
            set_frame(ix, iy, e3.at(ix, iy + 1), e4.at(ix, iy + 1));
    }

    // spin frame: p x conj(q) maps (1,i,j,k) to (e1,e2,e3,e4); a = conj(p), b = conj(q)
    Field<Quaternion> a(dom), b(dom);
    for (int iy = 0; iy < dom.ny; ++iy)
        for (int ix = 0; ix < dom.nx; ++ix) {
            Mat4 M;
            const Quaternion cols[4] = {e1.at(ix, iy), e2.at(ix, iy), e3.at(ix, iy), e4.at(ix, iy)};
            for (int c = 0; c < 4; ++c) {
                Vec4 v = cols[c].real4();
                for (int r = 0; r < 4; ++r) M[r][c] = v[r];
            }
            SpinFrame4 pq = frame_from_rotation(M, 1e-6);
            a.at(ix, iy) = pq.p.conj();
            b.at(ix, iy) = pq.q.conj();
        }
    auto align = [&](int ix, int iy, int jx, int jy) {
        if (dot(a.at(ix, iy), a.at(jx, jy)) + dot(b.at(ix, iy), b.at(jx, jy)) < 0) {
            a.at(ix, iy) = -a.at(ix, iy);
            b.at(ix, iy) = -b.at(ix, iy);
        }
    };
    for (int ix = bx + 1; ix < dom.nx; ++ix) align(ix, by, ix - 1, by);
    for (int ix = bx - 1; ix >= 0; --ix) align(ix, by, ix + 1, by);
    for (int ix = 0; ix < dom.nx; ++ix) {
        for (int iy = by + 1; iy < dom.ny; ++iy) align(ix, iy, ix, iy - 1);
        for (int iy = by - 1; iy >= 0; --iy) align(ix, iy, ix, iy + 1);
    }

    CurvatureR4 cv = mean_curvature_r4(f, e3, e4);
    TwistedSpinor4 ts;
    ts.a = std::move(a);
    ts.b = std::move(b);
    ts.rho = cv.rho;
    ts.cx = cv.cx;
    ts.cy = cv.cy;
    ts.H3 = cv.H3;
    ts.H4 = cv.H4;
    return ts;
}

}  // namespace spinrep
