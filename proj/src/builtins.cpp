#include "spinrep/builtins.hpp"

#include <cmath>
#include <stdexcept>

namespace spinrep {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Field<cplx> const_field(const Domain& d, cplx v) {
    return Field<cplx>::sample(d, [v](cplx) { return v; });
}

}  // namespace

Immersion sphere_immersion(const Domain& dom) {
    Immersion f;
    f.ambient = Ambient::R3;
    f.dom = dom;
    f.p3 = Field<Vec3>(dom);
    f.fx3 = Field<Vec3>(dom);
    f.fy3 = Field<Vec3>(dom);
    f.has_exact_derivs = true;
    for (int iy = 0; iy < dom.ny; ++iy)
        for (int ix = 0; ix < dom.nx; ++ix) {
            double x = dom.x(ix), y = dom.y(iy);
            double D = 1 + x * x + y * y;
            f.p3.at(ix, iy) = {2 * x / D, 2 * y / D, (x * x + y * y - 1) / D};
            f.fx3.at(ix, iy) = {2 * (1 + y * y - x * x) / (D * D), -4 * x * y / (D * D),
                                4 * x / (D * D)};
            f.fy3.at(ix, iy) = {-4 * x * y / (D * D), 2 * (1 + x * x - y * y) / (D * D),
                                4 * y / (D * D)};
        }
    return f;
}

SpinorField3 sphere_spinor(const Domain& dom) {
    SpinorField3 sf;
    sf.psi1 = Field<cplx>(dom);
    sf.psi2 = Field<cplx>(dom);
    sf.has_exact_derivs = true;
    sf.d1z = Field<cplx>(dom);
    sf.d1zb = Field<cplx>(dom);
    sf.d2z = Field<cplx>(dom);
    sf.d2zb = Field<cplx>(dom);
    const cplx c = std::polar(1.0, M_PI / 4);
    for (int iy = 0; iy < dom.ny; ++iy)
        for (int ix = 0; ix < dom.nx; ++ix) {
            cplx z = dom.z(ix, iy);
            cplx zb = std::conj(z);
            double D = 1 + std::norm(z);
            sf.psi1.at(ix, iy) = 2.0 * c * zb / D;
            sf.psi2.at(ix, iy) = 2.0 * c / D;
            sf.d1z.at(ix, iy) = -2.0 * c * zb * zb / (D * D);
            sf.d1zb.at(ix, iy) = 2.0 * c / (D * D);
            sf.d2z.at(ix, iy) = -2.0 * c * zb / (D * D);
            sf.d2zb.at(ix, iy) = -2.0 * c * z / (D * D);
        }
    return sf;
}

std::vector<std::string> builtin_names() {
    return {"plane",          "enneper",  "catenoid",          "sphere",
            "vertical-plane", "nil3-from-spinor", "flat-plane", "holomorphic-graph",
            "clifford-torus", "lagrangian-hr"};
}

Dataset make_builtin(const std::string& name, double h, double tau) {
    Dataset ds;
    ds.name = name;

    auto square_dom = [&](double def_h) {
        return Domain::with_spacing(-1, 1, -1, 1, h > 0 ? h : def_h);
    };

    if (name == "plane") {
        ds.ambient = Ambient::R3;
        ds.dom = square_dom(0.01);
        SpinorField3 sf;
        sf.psi1 = const_field(ds.dom, 1.0);
        sf.psi2 = const_field(ds.dom, 0.0);
        sf.has_exact_derivs = true;
        sf.d1z = sf.d1zb = sf.d2z = sf.d2zb = const_field(ds.dom, 0.0);
        ds.spinor = sf;
        return ds;
    }
    if (name == "enneper") {
        ds.ambient = Ambient::R3;
        ds.dom = square_dom(0.01);
        SpinorField3 sf;
        sf.psi1 = const_field(ds.dom, 1.0);
        sf.psi2 = Field<cplx>::sample(ds.dom, [](cplx z) { return std::conj(z); });
        sf.has_exact_derivs = true;
        sf.d1z = sf.d1zb = sf.d2z = const_field(ds.dom, 0.0);
        sf.d2zb = const_field(ds.dom, 1.0);
        ds.spinor = sf;
        ds.weierstrass = WeierstrassData{Field<cplx>::sample(ds.dom, [](cplx z) { return z; }),
                                         const_field(ds.dom, 1.0)};
        return ds;
    }
    if (name == "catenoid") {
        ds.ambient = Ambient::R3;
        double hh = h > 0 ? h : 0.01;
        ds.dom = Domain::with_spacing(-1, 1, -1.57, 1.57, hh);
        SpinorField3 sf;
        sf.psi1 = Field<cplx>::sample(ds.dom, [](cplx z) { return std::exp(-z / 2.0); });
        sf.psi2 = Field<cplx>::sample(ds.dom, [](cplx z) { return std::exp(std::conj(z) / 2.0); });
        sf.has_exact_derivs = true;
        sf.d1z = Field<cplx>::sample(ds.dom, [](cplx z) { return -0.5 * std::exp(-z / 2.0); });
        sf.d1zb = const_field(ds.dom, 0.0);
        sf.d2z = const_field(ds.dom, 0.0);
        sf.d2zb =
            Field<cplx>::sample(ds.dom, [](cplx z) { return 0.5 * std::exp(std::conj(z) / 2.0); });
        ds.spinor = sf;
        ds.weierstrass =
            WeierstrassData{Field<cplx>::sample(ds.dom, [](cplx z) { return std::exp(z); }),
                            Field<cplx>::sample(ds.dom, [](cplx z) { return std::exp(-z); })};
        return ds;
    }
    if (name == "sphere") {
        ds.ambient = Ambient::R3;
        ds.dom = square_dom(0.01);
        ds.immersion = sphere_immersion(ds.dom);
        ds.spinor = sphere_spinor(ds.dom);
        return ds;
    }
    if (name == "vertical-plane") {
        ds.ambient = Ambient::Nil3;
        ds.tau = tau > 0 ? tau : 0.5;
        ds.dom = square_dom(0.01);
        SpinorField3 sf;
        sf.psi1 = const_field(ds.dom, 1.0);
        sf.psi2 = const_field(ds.dom, 1.0);
        sf.has_exact_derivs = true;
        sf.d1z = sf.d1zb = sf.d2z = sf.d2zb = const_field(ds.dom, 0.0);
        ds.spinor = sf;
        return ds;
    }
    if (name == "nil3-from-spinor") {
        ds.ambient = Ambient::Nil3;
        ds.tau = tau > 0 ? tau : 0.5;
        ds.dom = square_dom(0.01);
        Nil3GenParams prm;
        prm.tau = ds.tau;
        ds.generated = generate_nil3_surface(ds.dom, prm);
        ds.spinor = ds.generated->sf;
        ds.immersion = ds.generated->f;
        return ds;
    }
    if (name == "flat-plane") {
        ds.ambient = Ambient::R4;
        ds.dom = square_dom(0.01);
        KTData kt;
        kt.s1 = const_field(ds.dom, 1.0);
        kt.s2 = const_field(ds.dom, 0.0);
        kt.t1 = const_field(ds.dom, 1.0);
        kt.t2 = const_field(ds.dom, 0.0);
        kt.has_exact_derivs = true;
        kt.s1_zbar = kt.s2bar_z = kt.t1_zbar = kt.t2bar_z = const_field(ds.dom, 0.0);
        ds.kt = kt;
        return ds;
    }
    if (name == "holomorphic-graph") {
        // the complex curve (z, z^2/2): s = (1, 0), t = (1, w'(z)) with w' = z
        ds.ambient = Ambient::R4;
        ds.dom = square_dom(0.01);
        KTData kt;
        kt.s1 = const_field(ds.dom, 1.0);
        kt.s2 = const_field(ds.dom, 0.0);
        kt.t1 = const_field(ds.dom, 1.0);
        kt.t2 = Field<cplx>::sample(ds.dom, [](cplx z) { return z; });
        kt.has_exact_derivs = true;
        kt.s1_zbar = kt.s2bar_z = kt.t1_zbar = kt.t2bar_z = const_field(ds.dom, 0.0);
        ds.kt = kt;

        Immersion f;
        f.ambient = Ambient::R4;
        f.dom = ds.dom;
        f.p4 = Field<Quaternion>::sample(ds.dom, [](cplx z) {
            return Quaternion::from_complex_pair(z, 0.5 * z * z);
        });
        f.has_exact_derivs = true;
        f.fx4 = Field<Quaternion>::sample(ds.dom, [](cplx z) {
            return Quaternion::from_complex_pair(1.0, z);
        });
        f.fy4 = Field<Quaternion>::sample(ds.dom, [](cplx z) {
            return Quaternion::from_complex_pair(cplx(0, 1), cplx(0, 1) * z);
        });
        ds.immersion = f;
        return ds;
    }
    if (name == "clifford-torus") {
        // product of circles of radius 1/sqrt2, chart scaled so |f_x| = 1/2
        ds.ambient = Ambient::R4;
        ds.dom = square_dom(0.01);
        Immersion f;
        f.ambient = Ambient::R4;
        f.dom = ds.dom;
        f.p4 = Field<Quaternion>(ds.dom);
        f.fx4 = Field<Quaternion>(ds.dom);
        f.fy4 = Field<Quaternion>(ds.dom);
        f.has_exact_derivs = true;
        for (int iy = 0; iy < ds.dom.ny; ++iy)
            for (int ix = 0; ix < ds.dom.nx; ++ix) {
                double u = ds.dom.x(ix) * kInvSqrt2, v = ds.dom.y(iy) * kInvSqrt2;
                cplx eu = std::polar(kInvSqrt2, u), ev = std::polar(kInvSqrt2, v);
                f.p4.at(ix, iy) = Quaternion::from_complex_pair(eu, ev);
                f.fx4.at(ix, iy) =
                    Quaternion::from_complex_pair(cplx(0, 1) * eu * kInvSqrt2, 0.0);
                f.fy4.at(ix, iy) =
                    Quaternion::from_complex_pair(0.0, cplx(0, 1) * ev * kInvSqrt2);
            }
        ds.immersion = f;
        return ds;
    }
    if (name == "lagrangian-hr") {
        // conformal product of two circles with different radii; lagrangian in C^2
        ds.ambient = Ambient::R4;
        ds.dom = square_dom(0.01);
        Immersion f;
        f.ambient = Ambient::R4;
        f.dom = ds.dom;
        f.p4 = Field<Quaternion>(ds.dom);
        f.fx4 = Field<Quaternion>(ds.dom);
        f.fy4 = Field<Quaternion>(ds.dom);
        f.has_exact_derivs = true;
        const double r1 = 1.0, r2 = 0.5, c = 0.5;  // |f_x| = |f_y| = c
        for (int iy = 0; iy < ds.dom.ny; ++iy)
            for (int ix = 0; ix < ds.dom.nx; ++ix) {
                double u = c * ds.dom.x(ix) / r1, v = c * ds.dom.y(iy) / r2;
                cplx g1 = std::polar(r1, u), g2 = std::polar(r2, v);
                f.p4.at(ix, iy) = Quaternion::from_complex_pair(g1, g2);
                f.fx4.at(ix, iy) = Quaternion::from_complex_pair(cplx(0, 1) * g1 * (c / r1), 0.0);
                f.fy4.at(ix, iy) = Quaternion::from_complex_pair(0.0, cplx(0, 1) * g2 * (c / r2));
            }
        ds.immersion = f;
        return ds;
    }
    throw std::invalid_argument("unknown builtin: " + name);
}

}  // namespace spinrep
