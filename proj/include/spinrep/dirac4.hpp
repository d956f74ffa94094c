#pragma once

#include <optional>

#include "spinrep/geomcheck.hpp"
#include "spinrep/grid.hpp"

namespace spinrep {

// the explicit (s1, s2, t1, t2) data; A = conj(s1) - conj(s2) j, B = t1 + t2 j
struct KTData {
    Field<cplx> s1, s2, t1, t2;
    bool has_exact_derivs = false;
    Field<cplx> s1_zbar, s2bar_z, t1_zbar, t2bar_z;

    Field<Quaternion> A() const;
    Field<Quaternion> B() const;
};

struct KTDiracResidual {
    ResidualReport s1_eq, s2_eq, t1_eq, t2_eq;  // component form
    ResidualReport A_eq, B_eq;                  // quaternionic form
    ResidualReport agreement;                   // both forms coincide pointwise
};

KTDiracResidual kt_dirac_residual(const KTData& kt, const Field<cplx>& h, int order = 2);

// | conj(A)^-1 (d conj(A)/d zbar) i + i (dzbar \ d B) B^-1 |
ResidualReport integrability_residual(const KTData& kt, int order = 2);

// integrates df = conj(A) dz B; the componentwise integrand is evaluated
// independently and compared (agreement expected at rounding level)
Immersion kt_immerse(const KTData& kt, ResidualReport* integrability = nullptr,
                     ResidualReport* form_agreement = nullptr);

struct GaugeFixResult {
    KTData fixed;
    Field<cplx> h;
    Field<double> alpha;
    ResidualReport off_span;   // span(1,i) part of (dz \ dA') A'^-1, should be O(h^2)
    ResidualReport closedness; // of the 1-form integrated to get alpha
};

GaugeFixResult gauge_fix(const KTData& kt);

// least-squares solution of dw/dzbar = rhs (unique up to holomorphic addition);
// conjugate gradients on the normal equations, fixed schedule
Field<cplx> dbar_solve(const Field<cplx>& rhs, double tol = 1e-10, int max_iter = 4000);

struct TwistedSpinor4 {
    Field<Quaternion> a, b;
    Field<double> rho, cx, cy, H3, H4;
    bool has_exact_rho_derivs = false;
    Field<double> rho_x, rho_y;
};

struct TwistedDiracResidual {
    ResidualReport a_eq, b_eq;
};

// residuals of  2 (dz \ da) a^-1 + drho/dz + (c_y + i c_x)/2 + e^rho (H3 j + H4 k)
// and           2 (dzbar \ db) b^-1 + drho/dzbar - (c_y - i c_x)/2 - e^rho (H3 j + H4 k)
TwistedDiracResidual twisted_dirac_residual(const TwistedSpinor4& ts, int order = 2);

struct ABBuildResult {
    KTData kt;
    Field<cplx> h;              // e^{rho + 2iv} (H3 + H4 i)/2
    Field<double> u, v;
    ResidualReport xi_agreement;  // conj(A) dz B == e^rho a^-1 dz b pointwise
};

ABBuildResult build_AB_from_ab(const TwistedSpinor4& ts);

// integrates xi = e^rho a^-1 (dx + i dy) b
Immersion xi_immerse(const TwistedSpinor4& ts, ResidualReport* closedness = nullptr);

// moving spin frame extraction: a = conj(p), b = conj(q) with p q^-1 = e1, ...
TwistedSpinor4 build_ab_from_immersion(const Immersion& f, double conformality_tol = 1e-2);

}  // namespace spinrep
