#include "spinrep/dirac3.hpp"

#include <cmath>
#include <stdexcept>

namespace spinrep {

CVec3 segre(cplx psi1, cplx psi2) {
    cplx p2b = std::conj(psi2);
    return {cplx(0, 0.5) * (p2b * p2b + psi1 * psi1), 0.5 * (p2b * p2b - psi1 * psi1),
            psi1 * p2b};
}

Field<CVec3> segre(const SpinorField3& sf) {
    return combine(sf.psi1, sf.psi2, [](cplx a, cplx b) { return segre(a, b); });
}

Potential3 potential_from_spinor(const SpinorField3& sf, double threshold, int order) {
    Field<cplx> d1 = sf.psi1_dzbar(order);
    Field<cplx> d2 = sf.psi2_dz(order);
    Potential3 out;
    out.U = Field<cplx>(sf.psi1.dom);
    Field<cplx> incons(sf.psi1.dom);
    for (int iy = 0; iy < out.U.dom.ny; ++iy)
        for (int ix = 0; ix < out.U.dom.nx; ++ix) {
            cplx p1 = sf.psi1.at(ix, iy), p2 = sf.psi2.at(ix, iy);
            double a1 = std::abs(p1), a2 = std::abs(p2);
            if (a1 < threshold && a2 < threshold)
                throw std::invalid_argument("potential_from_spinor: psi1 and psi2 both vanish");
            cplx u_from2 = d1.at(ix, iy) / p2;   // valid when psi2 != 0
            cplx u_from1 = -d2.at(ix, iy) / p1;  // valid when psi1 != 0
            out.U.at(ix, iy) = a2 >= a1 ? u_from2 : u_from1;
            incons.at(ix, iy) =
                (a1 >= threshold && a2 >= threshold) ? (u_from2 - u_from1) : cplx(0);
        }
    out.consistency = report_from_field(incons, "potential_consistency");
    return out;
}

DiracResidual dirac_residual(const SpinorField3& sf, const Field<cplx>& U, int order) {
    Field<cplx> d1 = sf.psi1_dzbar(order);
    Field<cplx> d2 = sf.psi2_dz(order);
    auto r1 = combine(d1, combine(U, sf.psi2, [](cplx u, cplx p) { return u * p; }),
                      [](cplx a, cplx b) { return a - b; });
    auto r2 = combine(d2, combine(U, sf.psi1, [](cplx u, cplx p) { return u * p; }),
                      [](cplx a, cplx b) { return a + b; });
    return {report_from_field(r1, "dirac_eq1"), report_from_field(r2, "dirac_eq2")};
}

Immersion immerse_r3(const SpinorField3& sf, ResidualReport* closedness) {
    Field<CVec3> Z = segre(sf);
    Field<Vec3> P(Z.dom), Q(Z.dom);
    for (std::size_t i = 0; i < Z.values.size(); ++i) {
        const CVec3& z = Z.values[i];
        P.values[i] = {z[0].real(), z[1].real(), z[2].real()};
        Q.values[i] = {-z[0].imag(), -z[1].imag(), -z[2].imag()};
    }
    if (closedness) *closedness = closedness_residual(P, Q, "w3_closedness");
    Immersion f;
    f.ambient = Ambient::R3;
    f.dom = Z.dom;
    f.p3 = integrate_form(P, Q, Z.dom.base_ix(), Z.dom.base_iy());
    f.has_exact_derivs = true;
    f.fx3 = std::move(P);
    f.fy3 = std::move(Q);
    return f;
}

SpinorField3 spinor_from_weierstrass(const WeierstrassData& wd) {
    const Domain& dom = wd.h.dom;
    if (!dom.same_shape(wd.g.dom)) throw std::invalid_argument("weierstrass: shape mismatch");
    Field<cplx> s(dom);
    for (const cplx& h : wd.h.values)
        if (std::abs(h) < 1e-14)
            throw std::invalid_argument("spinor_from_weierstrass: h vanishes on the domain");

    const int bx = dom.base_ix(), by = dom.base_iy();
    auto continue_from = [&](cplx prev, cplx hval) {
        cplx r = std::sqrt(hval);
        return (std::abs(r - prev) <= std::abs(r + prev)) ? r : -r;
    };
    s.at(bx, by) = std::sqrt(wd.h.at(bx, by));
    for (int ix = bx + 1; ix < dom.nx; ++ix)
        s.at(ix, by) = continue_from(s.at(ix - 1, by), wd.h.at(ix, by));
    for (int ix = bx - 1; ix >= 0; --ix)
        s.at(ix, by) = continue_from(s.at(ix + 1, by), wd.h.at(ix, by));
    for (int ix = 0; ix < dom.nx; ++ix) {
        for (int iy = by + 1; iy < dom.ny; ++iy)
            s.at(ix, iy) = continue_from(s.at(ix, iy - 1), wd.h.at(ix, iy));
        for (int iy = by - 1; iy >= 0; --iy)
            s.at(ix, iy) = continue_from(s.at(ix, iy + 1), wd.h.at(ix, iy));
    }
    // a consistent branch exists iff no adjacent pair still disagrees
    for (int iy = 0; iy < dom.ny; ++iy)
        for (int ix = 0; ix + 1 < dom.nx; ++ix)
            if (std::abs(s.at(ix + 1, iy) - s.at(ix, iy)) >
                std::abs(s.at(ix + 1, iy) + s.at(ix, iy)))
                throw std::runtime_error("spinor_from_weierstrass: branch tracking failed (h winds around 0)");
    for (int ix = 0; ix < dom.nx; ++ix)
        for (int iy = 0; iy + 1 < dom.ny; ++iy)
            if (std::abs(s.at(ix, iy + 1) - s.at(ix, iy)) >
                std::abs(s.at(ix, iy + 1) + s.at(ix, iy)))
                throw std::runtime_error("spinor_from_weierstrass: branch tracking failed (h winds around 0)");

    SpinorField3 sf;
    sf.psi1 = s;
    sf.psi2 = combine(wd.g, s, [](cplx g, cplx p1) { return std::conj(g * p1); });
    return sf;
}

SpinorField3 induced_spinor(const Immersion& f, double conformality_tol) {
    if (f.ambient == Ambient::R4) throw std::invalid_argument("induced_spinor: R4 immersion");
    FirstForm ff = first_form(f);
    if (ff.conformality.max_abs > conformality_tol)
        throw std::invalid_argument("induced_spinor: immersion is not conformal");
    auto [fx, fy] = tangent_fields3(f);
    const Domain& dom = f.dom;

    Field<Quaternion> a(dom);
    Field<double> erho(dom);
    for (int iy = 0; iy < dom.ny; ++iy)
        for (int ix = 0; ix < dom.nx; ++ix) {
            Vec3 tx = fx.at(ix, iy), ty = fy.at(ix, iy);
            double nx_ = norm3(tx), ny_ = norm3(ty);
            if (!(nx_ > 0) || !(ny_ > 0))
                throw std::invalid_argument("induced_spinor: degenerate frame");
            Vec3 e1 = scale3(tx, 1.0 / nx_);
            Vec3 e2 = scale3(ty, 1.0 / ny_);
            Vec3 e3 = cross3(e1, e2);
            double n3 = norm3(e3);
            if (!(n3 > 0.5)) throw std::invalid_argument("induced_spinor: degenerate frame");
            e3 = scale3(e3, 1.0 / n3);
            // re-orthogonalize e2 against e1 to absorb O(h^2) conformality error
            e2 = sub3(e2, scale3(e1, dot3(e1, e2)));
            e2 = scale3(e2, 1.0 / norm3(e2));
            Mat3 R{{{e1[0], e2[0], e3[0]}, {e1[1], e2[1], e3[1]}, {e1[2], e2[2], e3[2]}}};
            a.at(ix, iy) = frame_from_rotation(R, 1e-6).conj();
            erho.at(ix, iy) = nx_;
        }

    // smooth the spin double-cover sign from the base point outward
    const int bx = dom.base_ix(), by = dom.base_iy();
    auto align = [&](Quaternion& cur, const Quaternion& ref) {
        if (dot(cur, ref) < 0) cur = -cur;
    };
    for (int ix = bx + 1; ix < dom.nx; ++ix) align(a.at(ix, by), a.at(ix - 1, by));
    for (int ix = bx - 1; ix >= 0; --ix) align(a.at(ix, by), a.at(ix + 1, by));
    for (int ix = 0; ix < dom.nx; ++ix) {
        for (int iy = by + 1; iy < dom.ny; ++iy) align(a.at(ix, iy), a.at(ix, iy - 1));
        for (int iy = by - 1; iy >= 0; --iy) align(a.at(ix, iy), a.at(ix, iy + 1));
    }

    SpinorField3 sf;
    sf.psi1 = Field<cplx>(dom);
    sf.psi2 = Field<cplx>(dom);
    for (int iy = 0; iy < dom.ny; ++iy)
        for (int ix = 0; ix < dom.nx; ++ix) {
            Quaternion v = a.at(ix, iy) * U0;
            auto [vp, vm] = split2({v, SplitConv::R3});
            double scale = std::sqrt(2.0 * erho.at(ix, iy));
            sf.psi1.at(ix, iy) = scale * vp;
            sf.psi2.at(ix, iy) = scale * vm;
        }
    return sf;
}

SurfaceData3 surface_data_r3(const Immersion& f) {
    CurvatureR3 cv = mean_curvature_r3(f);
    auto [fx, fy] = tangent_fields3(f);
    SurfaceData3 sd;
    sd.tau = 0;
    sd.rho = cv.rho;
    sd.h11 = cv.h11;
    sd.h12 = cv.h12;
    sd.h22 = cv.h22;
    sd.T1 = Field<double>(f.dom);
    sd.T2 = Field<double>(f.dom);
    sd.lambda = Field<double>(f.dom);
    for (int iy = 0; iy < f.dom.ny; ++iy)
        for (int ix = 0; ix < f.dom.nx; ++ix) {
            double er = std::exp(cv.rho.at(ix, iy));
            sd.T1.at(ix, iy) = fx.at(ix, iy)[2] / er;
            sd.T2.at(ix, iy) = fy.at(ix, iy)[2] / er;
            sd.lambda.at(ix, iy) = cv.nu.at(ix, iy)[2];
        }
    return sd;
}

ConstancyMultipliers constancy_multipliers(double rho_x, double rho_y, double erho, double h11,
                                           double h12, double h22, double T1, double T2,
                                           double lambda, double tau) {
    Quaternion E{0, T1, T2, lambda};
    Quaternion Mx = (rho_y / 2) * Q_K + (erho / 2) * (h11 * Q_J - h12 * Q_I) +
                    (tau * erho / 2) * Q_I - (tau * erho * T1) * E;
    Quaternion My = (-rho_x / 2) * Q_K + (erho / 2) * (h12 * Q_J - h22 * Q_I) +
                    (tau * erho / 2) * Q_J - (tau * erho * T2) * E;
    return {Mx, My};
}

std::pair<Quaternion, Quaternion> constancy_rhs(const ConstancyMultipliers& m,
                                                const Quaternion& v) {
    return {m.Mx * v, m.My * v};
}

namespace {

struct SurfacePointData {
    double rho_x, rho_y, erho, h11, h12, h22, T1, T2, lambda;
};

template <class F>
void for_surface_points(const SurfaceData3& sd, F&& fn) {
    Field<double> rx = sd.has_exact_rho_derivs ? sd.rho_x : d_dx(sd.rho);
    Field<double> ry = sd.has_exact_rho_derivs ? sd.rho_y : d_dy(sd.rho);
    const Domain& dom = sd.rho.dom;
    for (int iy = 0; iy < dom.ny; ++iy)
        for (int ix = 0; ix < dom.nx; ++ix) {
            SurfacePointData p{rx.at(ix, iy),
                               ry.at(ix, iy),
                               std::exp(sd.rho.at(ix, iy)),
                               sd.h11.at(ix, iy),
                               sd.h12.at(ix, iy),
                               sd.h22.at(ix, iy),
                               sd.T1.at(ix, iy),
                               sd.T2.at(ix, iy),
                               sd.lambda.at(ix, iy)};
            fn(ix, iy, p);
        }
}

}  // namespace

ConstancyResidual constancy_residual(const SurfaceData3& sd, const Field<Quaternion>& v) {
    auto vx = d_dx(v);
    auto vy = d_dy(v);
    Field<Quaternion> rx(v.dom), ry(v.dom);
    Field<double> rn(v.dom);
    for_surface_points(sd, [&](int ix, int iy, const SurfacePointData& p) {
        auto m = constancy_multipliers(p.rho_x, p.rho_y, p.erho, p.h11, p.h12, p.h22, p.T1, p.T2,
                                       p.lambda, sd.tau);
        auto [ex, ey] = constancy_rhs(m, v.at(ix, iy));
        rx.at(ix, iy) = vx.at(ix, iy) - ex;
        ry.at(ix, iy) = vy.at(ix, iy) - ey;
        rn.at(ix, iy) = std::abs(v.at(ix, iy).norm() - 1.0);
    });
    return {report_from_field(rx, "constancy_x"), report_from_field(ry, "constancy_y"),
            report_from_field(rn, "constancy_norm")};
}

QInvariant q_invariant(const Field<Quaternion>& v, const SurfaceData3& sd) {
    QInvariant out;
    out.q = Field<Quaternion>(v.dom);
    Field<Quaternion> vanish(v.dom);
    Quaternion sum{0, 0, 0, 0};
    for (int iy = 0; iy < v.dom.ny; ++iy)
        for (int ix = 0; ix < v.dom.nx; ++ix) {
            Quaternion E{0, sd.T1.at(ix, iy), sd.T2.at(ix, iy), sd.lambda.at(ix, iy)};
            const Quaternion& vv = v.at(ix, iy);
            Quaternion q = vv.conj() * E * vv;
            out.q.at(ix, iy) = q;
            sum += q;
            Quaternion kq = vv.conj() * Q_K * vv;
            vanish.at(ix, iy) = sd.lambda.at(ix, iy) * q - dot(kq, q) * q;
            out.max_re = std::max(out.max_re, std::abs(q.w));
        }
    out.mean = sum / static_cast<double>(v.dom.size());
    double var = 0;
    for (const Quaternion& q : out.q.values) {
        double d = (q - out.mean).norm();
        out.spread = std::max(out.spread, d);
        var += d * d;
    }
    out.stddev = std::sqrt(var / static_cast<double>(v.dom.size()));
    out.vanishing = report_from_field(vanish, "vanishing_lemma");
    return out;
}

ResidualReport daniel_residual(const SurfaceData3& sd) {
    auto t1x = d_dx(sd.T1), t1y = d_dy(sd.T1);
    auto t2x = d_dx(sd.T2), t2y = d_dy(sd.T2);
    auto lx = d_dx(sd.lambda), ly = d_dy(sd.lambda);
    Field<double> res(sd.rho.dom);
    const double tau = sd.tau;
    for_surface_points(sd, [&](int ix, int iy, const SurfacePointData& p) {
        double r = 0;
        r = std::max(r, std::abs(t1x.at(ix, iy) - (p.lambda * p.erho * p.h11 - p.T2 * p.rho_y)));
        r = std::max(r,
                     std::abs(t1y.at(ix, iy) - (p.lambda * p.erho * (p.h12 + tau) + p.T2 * p.rho_x)));
        r = std::max(r,
                     std::abs(t2x.at(ix, iy) - (p.lambda * p.erho * (p.h12 - tau) + p.T1 * p.rho_y)));
        r = std::max(r, std::abs(t2y.at(ix, iy) - (p.lambda * p.erho * p.h22 - p.T1 * p.rho_x)));
        r = std::max(r, std::abs(lx.at(ix, iy) + p.erho * (p.T1 * p.h11 + p.T2 * (p.h12 - tau))));
        r = std::max(r, std::abs(ly.at(ix, iy) + p.erho * (p.T1 * (p.h12 + tau) + p.T2 * p.h22)));
        res.at(ix, iy) = r;
    });
    return report_from_field(res, "daniel");
}

ResidualReport em_tensor_residual(const Field<Quaternion>& v, const SurfaceData3& sd) {
    auto vx = d_dx(v);
    auto vy = d_dy(v);
    auto lx = d_dx(sd.lambda), ly = d_dy(sd.lambda);
    Field<Vec2> res(v.dom);
    const double tau = sd.tau;
    for_surface_points(sd, [&](int ix, int iy, const SurfacePointData& p) {
        const Quaternion& vv = v.at(ix, iy);
        double n2 = vv.norm2();
        double em = std::exp(-sd.rho.at(ix, iy));
        Quaternion g1 = em * (vx.at(ix, iy) - (p.rho_y / 2) * (Q_K * vv));
        Quaternion g2 = em * (vy.at(ix, iy) + (p.rho_x / 2) * (Q_K * vv));
        // Clifford action of e_i followed by the volume element: i k = -j, j k = i
        const Quaternion c1 = -Q_J, c2 = Q_I;
        double q11 = dot(c1 * g1, vv) / n2;
        double q22 = dot(c2 * g2, vv) / n2;
        double q12 = 0.5 * (dot(c1 * g2, vv) + dot(c2 * g1, vv)) / n2;
        double T1 = p.T1, T2 = p.T2;
        // B(T) with B = [[2 tau T1 T2, -tau(T1^2-T2^2)], [-tau(T1^2-T2^2), -2 tau T1 T2]]
        double b1 = 2 * tau * T1 * T2 * T1 - tau * (T1 * T1 - T2 * T2) * T2;
        double b2 = -tau * (T1 * T1 - T2 * T2) * T1 - 2 * tau * T1 * T2 * T2;
        double r1 = em * lx.at(ix, iy) + 2 * (q11 * T1 + q12 * T2) + b1 + tau * (-T2);
        double r2 = em * ly.at(ix, iy) + 2 * (q12 * T1 + q22 * T2) + b2 + tau * T1;
        res.at(ix, iy) = {r1, r2};
    });
    return report_from_field(res, "energy_momentum");
}

}  // namespace spinrep
