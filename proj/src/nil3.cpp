#include "spinrep/nil3.hpp"

#include <cmath>
#include <stdexcept>

namespace spinrep {

Nil3Point nil3_mul(const Nil3Point& p, const Nil3Point& q) {
    if (p.tau != q.tau) throw std::invalid_argument("nil3_mul: tau mismatch");
    return {{p.x[0] + q.x[0], p.x[1] + q.x[1],
             p.x[2] + q.x[2] + p.tau * (p.x[0] * q.x[1] - p.x[1] * q.x[0])},
            p.tau};
}

Nil3Point nil3_inverse(const Nil3Point& p) { return {{-p.x[0], -p.x[1], -p.x[2]}, p.tau}; }

std::array<Vec3, 3> left_frame(const Nil3Point& p) {
    return {Vec3{1, 0, -p.tau * p.x[1]}, Vec3{0, 1, p.tau * p.x[0]}, Vec3{0, 0, 1}};
}

MaurerCartanField mc_from_spinor(const SpinorField3& sf) {
    Field<CVec3> Z = segre(sf);
    MaurerCartanField mc;
    mc.ax = Field<Vec3>(Z.dom);
    mc.ay = Field<Vec3>(Z.dom);
    for (std::size_t i = 0; i < Z.values.size(); ++i) {
        const CVec3& z = Z.values[i];
        mc.ax.values[i] = {z[0].real(), z[1].real(), z[2].real()};
        mc.ay.values[i] = {-z[0].imag(), -z[1].imag(), -z[2].imag()};
    }
    return mc;
}

Nil3Integrability nil3_integrability_residual(const MaurerCartanField& mc, double tau) {
    auto dxay = d_dx(mc.ay);
    auto dyax = d_dy(mc.ax);
    Nil3Integrability out;
    out.residual = Field<Vec3>(mc.ax.dom);
    for (int iy = 0; iy < mc.ax.dom.ny; ++iy)
        for (int ix = 0; ix < mc.ax.dom.nx; ++ix) {
            Vec3 r = sub3(dxay.at(ix, iy), dyax.at(ix, iy));
            const Vec3 &ax = mc.ax.at(ix, iy), &ay = mc.ay.at(ix, iy);
            r[2] += 2.0 * tau * (ax[0] * ay[1] - ax[1] * ay[0]);
            out.residual.at(ix, iy) = r;
        }
    out.e1 = report_from_field(out.residual.map([](const Vec3& v) { return v[0]; }), "nil3_mc_e1");
    out.e2 = report_from_field(out.residual.map([](const Vec3& v) { return v[1]; }), "nil3_mc_e2");
    out.e3 = report_from_field(out.residual.map([](const Vec3& v) { return v[2]; }), "nil3_mc_e3");
    out.total = report_from_field(out.residual, "nil3_mc");
    return out;
}

Immersion immerse_nil3(const SpinorField3& sf, double tau, ResidualReport* integrability) {
    MaurerCartanField mc = mc_from_spinor(sf);
    if (integrability) *integrability = nil3_integrability_residual(mc, tau).total;
    const Domain& dom = mc.ax.dom;
    const int bx = dom.base_ix(), by = dom.base_iy();

    auto comp = [](const Field<Vec3>& f, int k) {
        return f.map([k](const Vec3& v) { return v[k]; });
    };
    Field<double> f1 = integrate_form(comp(mc.ax, 0), comp(mc.ay, 0), bx, by);
    Field<double> f2 = integrate_form(comp(mc.ax, 1), comp(mc.ay, 1), bx, by);

    Field<double> P3(dom), Q3(dom);
    for (int iy = 0; iy < dom.ny; ++iy)
        for (int ix = 0; ix < dom.nx; ++ix) {
            const Vec3 &ax = mc.ax.at(ix, iy), &ay = mc.ay.at(ix, iy);
            double a = f1.at(ix, iy), b = f2.at(ix, iy);
            P3.at(ix, iy) = ax[2] + tau * (a * ax[1] - b * ax[0]);
            Q3.at(ix, iy) = ay[2] + tau * (a * ay[1] - b * ay[0]);
        }
    Field<double> f3 = integrate_form(P3, Q3, bx, by);

    Immersion f;
    f.ambient = tau == 0.0 ? Ambient::R3 : Ambient::Nil3;
    f.tau = tau;
    f.dom = dom;
    f.p3 = Field<Vec3>(dom);
    for (int iy = 0; iy < dom.ny; ++iy)
        for (int ix = 0; ix < dom.nx; ++ix)
            f.p3.at(ix, iy) = {f1.at(ix, iy), f2.at(ix, iy), f3.at(ix, iy)};
    f.has_exact_derivs = true;
    f.fx3 = mc.ax;
    f.fy3 = mc.ay;
    return f;
}

TLambda extract_T_lambda(const Immersion& f) {
    auto [bx, by] = tangent_fields3(f);
    TLambda out;
    out.T1 = Field<double>(f.dom);
    out.T2 = Field<double>(f.dom);
    out.lambda = Field<double>(f.dom);
    Field<double> unit(f.dom);
    for (int iy = 0; iy < f.dom.ny; ++iy)
        for (int ix = 0; ix < f.dom.nx; ++ix) {
            Vec3 ex = bx.at(ix, iy), ey = by.at(ix, iy);
            double nx_ = norm3(ex), ny_ = norm3(ey);
            if (!(nx_ > 0) || !(ny_ > 0))
                throw std::invalid_argument("extract_T_lambda: degenerate tangent plane");
            Vec3 n = cross3(ex, ey);
            double nn = norm3(n);
            if (!(nn > 0)) throw std::invalid_argument("extract_T_lambda: degenerate tangent plane");
            double T1 = ex[2] / nx_, T2 = ey[2] / ny_, lam = n[2] / nn;
            out.T1.at(ix, iy) = T1;
            out.T2.at(ix, iy) = T2;
            out.lambda.at(ix, iy) = lam;
            unit.at(ix, iy) = std::abs(lam * lam + T1 * T1 + T2 * T2 - 1.0);
        }
    out.unit = report_from_field(unit, "t_lambda_unit");
    return out;
}

namespace {

// connection term of the left-invariant frame applied to a field W along direction beta
Vec3 nil3_gamma_term(const Vec3& beta, const Vec3& W, double tau) {
    return {tau * (beta[1] * W[2] + beta[2] * W[1]), -tau * (beta[0] * W[2] + beta[2] * W[0]),
            tau * (beta[0] * W[1] - beta[1] * W[0])};
}

}  // namespace

Nil3Shape shape_operator_nil3(const Immersion& f) {
    auto [bx, by] = tangent_fields3(f);
    const Domain& dom = f.dom;
    Nil3Shape out;
    out.h11 = Field<double>(dom);
    out.h12 = Field<double>(dom);
    out.h22 = Field<double>(dom);
    out.rho = Field<double>(dom);
    out.nu = Field<Vec3>(dom);
    for (int iy = 0; iy < dom.ny; ++iy)
        for (int ix = 0; ix < dom.nx; ++ix) {
            Vec3 n = cross3(bx.at(ix, iy), by.at(ix, iy));
            double nn = norm3(n);
            if (!(nn > 0)) throw std::invalid_argument("shape_operator_nil3: degenerate frame");
            out.nu.at(ix, iy) = scale3(n, 1.0 / nn);
            out.rho.at(ix, iy) = std::log(norm3(bx.at(ix, iy)));
        }
    auto nux = d_dx(out.nu);
    auto nuy = d_dy(out.nu);
    const double tau = f.tau;
    for (int iy = 0; iy < dom.ny; ++iy)
        for (int ix = 0; ix < dom.nx; ++ix) {
            const Vec3& n = out.nu.at(ix, iy);
            Vec3 Sx = -1.0 * (nux.at(ix, iy) + nil3_gamma_term(bx.at(ix, iy), n, tau));
            Vec3 Sy = -1.0 * (nuy.at(ix, iy) + nil3_gamma_term(by.at(ix, iy), n, tau));
            double e2r = std::exp(2.0 * out.rho.at(ix, iy));
            out.h11.at(ix, iy) = dot3(Sx, bx.at(ix, iy)) / e2r;
            out.h22.at(ix, iy) = dot3(Sy, by.at(ix, iy)) / e2r;
            out.h12.at(ix, iy) =
                0.5 * (dot3(Sx, by.at(ix, iy)) + dot3(Sy, bx.at(ix, iy))) / e2r;
        }
    return out;
}

SurfaceData3 surface_data_nil3(const Immersion& f) {
    Nil3Shape shape = shape_operator_nil3(f);
    TLambda tl = extract_T_lambda(f);
    SurfaceData3 sd;
    sd.tau = f.tau;
    sd.rho = shape.rho;
    sd.h11 = shape.h11;
    sd.h12 = shape.h12;
    sd.h22 = shape.h22;
    sd.T1 = tl.T1;
    sd.T2 = tl.T2;
    sd.lambda = tl.lambda;
    return sd;
}

namespace {

struct GenState {
    cplx p1, p2;
    Vec3 F;
};

struct GenDeriv {
    cplx dp1, dp2;
    Vec3 dF;
};

GenDeriv gen_rhs(double x, const GenState& s, const Nil3GenParams& prm) {
    double ur = prm.ur_const + prm.ur_amp * std::sin(prm.ur_freq * x);
    cplx U{ur, 0.25 * prm.tau * (std::norm(s.p2) - std::norm(s.p1))};
    GenDeriv d;
    d.dp1 = 2.0 * U * s.p2;
    d.dp2 = -2.0 * U * s.p1;
    CVec3 Z = segre(s.p1, s.p2);
    Vec3 ax{Z[0].real(), Z[1].real(), Z[2].real()};
    d.dF = {ax[0], ax[1], ax[2] + prm.tau * (s.F[0] * ax[1] - s.F[1] * ax[0])};
    return d;
}

GenState rk4_step(double x, const GenState& s, double h, const Nil3GenParams& prm) {
    auto add = [](const GenState& a, const GenDeriv& d, double c) {
        return GenState{a.p1 + c * d.dp1, a.p2 + c * d.dp2, add3(a.F, scale3(d.dF, c))};
    };
    GenDeriv k1 = gen_rhs(x, s, prm);
    GenDeriv k2 = gen_rhs(x + h / 2, add(s, k1, h / 2), prm);
    GenDeriv k3 = gen_rhs(x + h / 2, add(s, k2, h / 2), prm);
    GenDeriv k4 = gen_rhs(x + h, add(s, k3, h), prm);
    GenState out = s;
    out.p1 += (h / 6) * (k1.dp1 + 2.0 * k2.dp1 + 2.0 * k3.dp1 + k4.dp1);
    out.p2 += (h / 6) * (k1.dp2 + 2.0 * k2.dp2 + 2.0 * k3.dp2 + k4.dp2);
    out.F = add3(out.F, scale3(add3(add3(k1.dF, scale3(add3(k2.dF, k3.dF), 2.0)), k4.dF), h / 6));
    return out;
}

}  // namespace

Nil3Generated generate_nil3_surface(const Domain& dom, const Nil3GenParams& prm) {
    const int bx = dom.base_ix(), by = dom.base_iy();
    const double y0 = dom.y(by);
    const int nsub = std::max(1, prm.substeps_per_cell);
    const double hs = dom.h / nsub;

    // march the profile along x in both directions from the base column
    std::vector<GenState> prof(dom.nx);
    prof[bx] = {prm.psi1_0, prm.psi2_0, {0, 0, 0}};
    for (int ix = bx + 1; ix < dom.nx; ++ix) {
        GenState s = prof[ix - 1];
        double x = dom.x(ix - 1);
        for (int k = 0; k < nsub; ++k) s = rk4_step(x + k * hs, s, hs, prm);
        prof[ix] = s;
    }
    for (int ix = bx - 1; ix >= 0; --ix) {
        GenState s = prof[ix + 1];
        double x = dom.x(ix + 1);
        for (int k = 0; k < nsub; ++k) s = rk4_step(x - k * hs, s, -hs, prm);
        prof[ix] = s;
    }
    for (const GenState& s : prof)
        if (std::abs(s.p1) < 1e-6 && std::abs(s.p2) < 1e-6)
            throw std::runtime_error("generate_nil3_surface: spinor came too close to zero");

    Nil3Generated out;
    out.sf.psi1 = Field<cplx>(dom);
    out.sf.psi2 = Field<cplx>(dom);
    out.sf.has_exact_derivs = true;
    out.sf.d1z = Field<cplx>(dom);
    out.sf.d1zb = Field<cplx>(dom);
    out.sf.d2z = Field<cplx>(dom);
    out.sf.d2zb = Field<cplx>(dom);
    out.U = Field<cplx>(dom);

    out.f.ambient = Ambient::Nil3;
    out.f.tau = prm.tau;
    out.f.dom = dom;
    out.f.p3 = Field<Vec3>(dom);
    out.f.has_exact_derivs = true;
    out.f.fx3 = Field<Vec3>(dom);
    out.f.fy3 = Field<Vec3>(dom);

    out.sd.tau = prm.tau;
    out.sd.rho = Field<double>(dom);
    out.sd.T1 = Field<double>(dom);
    out.sd.T2 = Field<double>(dom);
    out.sd.lambda = Field<double>(dom);
    out.sd.has_exact_rho_derivs = true;
    out.sd.rho_x = Field<double>(dom);
    out.sd.rho_y = Field<double>(dom);

    out.v = Field<Quaternion>(dom);

    for (int ix = 0; ix < dom.nx; ++ix) {
        const GenState& s = prof[ix];
        const double x = dom.x(ix);
        GenDeriv der = gen_rhs(x, s, prm);
        double ur = prm.ur_const + prm.ur_amp * std::sin(prm.ur_freq * x);
        cplx U{ur, 0.25 * prm.tau * (std::norm(s.p2) - std::norm(s.p1))};

        CVec3 Z = segre(s.p1, s.p2);
        Vec3 ax{Z[0].real(), Z[1].real(), Z[2].real()};
        Vec3 ay{-Z[0].imag(), -Z[1].imag(), -Z[2].imag()};

        double m = 0.5 * (std::norm(s.p1) + std::norm(s.p2));
        double mprime = std::real(std::conj(s.p1) * der.dp1 + std::conj(s.p2) * der.dp2);

        // frame and induced unit spinor (y-invariant along the column)
        Vec3 e1 = scale3(ax, 1.0 / norm3(ax));
        Vec3 e2 = scale3(ay, 1.0 / norm3(ay));
        Vec3 e3 = cross3(e1, e2);
        Mat3 R{{{e1[0], e2[0], e3[0]}, {e1[1], e2[1], e3[1]}, {e1[2], e2[2], e3[2]}}};
        Quaternion a = frame_from_rotation(R, 1e-8).conj();
        Quaternion v = a * U0;

        for (int iy = 0; iy < dom.ny; ++iy) {
            double dy = dom.y(iy) - y0;
            out.sf.psi1.at(ix, iy) = s.p1;
            out.sf.psi2.at(ix, iy) = s.p2;
            // y-invariant: d/dz = d/dzbar = (d/dx)/2
            out.sf.d1z.at(ix, iy) = 0.5 * der.dp1;
            out.sf.d1zb.at(ix, iy) = 0.5 * der.dp1;
            out.sf.d2z.at(ix, iy) = 0.5 * der.dp2;
            out.sf.d2zb.at(ix, iy) = 0.5 * der.dp2;
            out.U.at(ix, iy) = U;

            out.f.p3.at(ix, iy) = {
                s.F[0] + ay[0] * dy, s.F[1] + ay[1] * dy,
                s.F[2] + dy * (ay[2] + prm.tau * (s.F[0] * ay[1] - s.F[1] * ay[0]))};
            out.f.fx3.at(ix, iy) = ax;
            out.f.fy3.at(ix, iy) = ay;

            out.sd.rho.at(ix, iy) = std::log(m);
            out.sd.rho_x.at(ix, iy) = mprime / m;
            out.sd.rho_y.at(ix, iy) = 0.0;
            out.sd.T1.at(ix, iy) = e1[2];
            out.sd.T2.at(ix, iy) = e2[2];
            out.sd.lambda.at(ix, iy) = e3[2];

            out.v.at(ix, iy) = v;
        }
    }

    out.mc = mc_from_spinor(out.sf);
    Nil3Shape shape = shape_operator_nil3(out.f);
    out.sd.h11 = shape.h11;
    out.sd.h12 = shape.h12;
    out.sd.h22 = shape.h22;

    // smooth the spin sign along x (the extraction is y-invariant)
    for (int ix = 1; ix < dom.nx; ++ix) {
        if (dot(out.v.at(ix, 0), out.v.at(ix - 1, 0)) < 0)
            for (int iy = 0; iy < dom.ny; ++iy) out.v.at(ix, iy) = -out.v.at(ix, iy);
    }
    return out;
}

}  // namespace spinrep
