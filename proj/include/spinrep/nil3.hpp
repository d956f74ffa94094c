#pragma once

#include <array>

#include "spinrep/dirac3.hpp"
#include "spinrep/geomcheck.hpp"
#include "spinrep/grid.hpp"

namespace spinrep {

// Heisenberg group in exponential coordinates:
//   (p1,p2,p3)(q1,q2,q3) = (p1+q1, p2+q2, p3+q3 + tau (p1 q2 - p2 q1))
// with left-invariant frame E1 = d1 - tau x2 d3, E2 = d2 + tau x1 d3, E3 = d3,
// the only nonzero bracket being [E1, E2] = 2 tau E3.
struct Nil3Point {
    Vec3 x{0, 0, 0};
    double tau = 0;
};

Nil3Point nil3_mul(const Nil3Point& p, const Nil3Point& q);
Nil3Point nil3_inverse(const Nil3Point& p);

// coordinate coefficients of the left-invariant frame at p
std::array<Vec3, 3> left_frame(const Nil3Point& p);

struct MaurerCartanField {
    Field<Vec3> ax, ay;  // frame components of f^-1 f_x and f^-1 f_y
};

// the 1-form Re(Z dz) of the representation integrand in frame components
MaurerCartanField mc_from_spinor(const SpinorField3& sf);

struct Nil3Integrability {
    Field<Vec3> residual;  // d_x a_y - d_y a_x + [a_x, a_y]
    ResidualReport e1, e2, e3, total;
};

Nil3Integrability nil3_integrability_residual(const MaurerCartanField& mc, double tau);

// solves f^-1 df = (ax dx + ay dy): x1, x2 by plain path integration, then
// x3 with the bracket correction; f(base) = identity
Immersion immerse_nil3(const SpinorField3& sf, double tau, ResidualReport* integrability = nullptr);

struct TLambda {
    Field<double> T1, T2, lambda;
    ResidualReport unit;  // | lambda^2 + |T|^2 - 1 |
};

TLambda extract_T_lambda(const Immersion& f);

// shape operator through the left-invariant connection; for tau = 0 this is -d(nu)
struct Nil3Shape {
    Field<double> h11, h12, h22;
    Field<double> rho;
    Field<Vec3> nu;  // frame components of the unit normal
};

Nil3Shape shape_operator_nil3(const Immersion& f);

SurfaceData3 surface_data_nil3(const Immersion& f);

// family of exactly integrable spinor fields, y-invariant, integrated by RK4:
//   psi1' = 2 U psi2, psi2' = -2 U psi1,
//   U = ur(x) + i (tau/4)(|psi2|^2 - |psi1|^2)
struct Nil3GenParams {
    double tau = 0.5;
    cplx psi1_0{1.10, 0.00};
    cplx psi2_0{0.35, 0.20};
    double ur_const = 0.35;
    double ur_amp = 0.15;
    double ur_freq = 1.3;
    int substeps_per_cell = 16;
};

struct Nil3Generated {
    SpinorField3 sf;        // carries exact Wirtinger derivatives
    Field<cplx> U;          // exact potential
    MaurerCartanField mc;
    Immersion f;            // exact coordinates and frame components
    SurfaceData3 sd;        // exact rho derivatives; shape from the covariant normal derivative
    Field<Quaternion> v;    // unit spinor a u0 from the moving frame
};

Nil3Generated generate_nil3_surface(const Domain& dom, const Nil3GenParams& params);

}  // namespace spinrep
