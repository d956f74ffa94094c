#pragma once

#include <optional>
#include <utility>

#include "spinrep/cliff.hpp"
#include "spinrep/geomcheck.hpp"
#include "spinrep/grid.hpp"

namespace spinrep {

// the constant reference spinor (1 + i - j + k)/2
inline constexpr Quaternion U0{0.5, 0.5, -0.5, 0.5};

struct SpinorField3 {
    Field<cplx> psi1, psi2;
    // analytic Wirtinger derivatives, when the data source provides them
    bool has_exact_derivs = false;
    Field<cplx> d1z, d1zb, d2z, d2zb;

    Field<cplx> psi1_dzbar(int order = 2) const {
        return has_exact_derivs ? d1zb : d_dzbar(psi1, order);
    }
    Field<cplx> psi2_dz(int order = 2) const { return has_exact_derivs ? d2z : d_dz(psi2, order); }
};

// Z = ( i(conj(psi2)^2 + psi1^2)/2, (conj(psi2)^2 - psi1^2)/2, psi1 conj(psi2) )
CVec3 segre(cplx psi1, cplx psi2);
Field<CVec3> segre(const SpinorField3& sf);

struct Potential3 {
    Field<cplx> U;
    ResidualReport consistency;  // |U + (1/psi1) dpsi2/dz| where both quotients exist
};

Potential3 potential_from_spinor(const SpinorField3& sf, double threshold = 1e-8, int order = 2);

struct DiracResidual {
    ResidualReport eq1;  // dpsi1/dzbar - U psi2
    ResidualReport eq2;  // dpsi2/dz   + U psi1
};

DiracResidual dirac_residual(const SpinorField3& sf, const Field<cplx>& U, int order = 2);

// f = Re int Z dz; f(base) = 0; exact tangents Re Z, -Im Z are attached to the result
Immersion immerse_r3(const SpinorField3& sf, ResidualReport* closedness = nullptr);

struct WeierstrassData {
    Field<cplx> g, h;
};

// psi1 = sqrt(h) (branch continued from the base point), conj(psi2) = g psi1
SpinorField3 spinor_from_weierstrass(const WeierstrassData& wd);

// per point: orthonormal frame -> unit quaternion a -> v = a u0 -> psi = sqrt(2 e^rho) (v+, v-);
// sign of a is smoothed to be continuous from the base point
SpinorField3 induced_spinor(const Immersion& f, double conformality_tol = 1e-2);

// data the abstract-side residuals consume; all shape coefficients are taken
// in the orthonormal frame (e1, e2) = e^-rho (f_x, f_y)
struct SurfaceData3 {
    Field<double> rho;
    Field<double> h11, h12, h22;
    Field<double> T1, T2, lambda;
    double tau = 0;
    bool has_exact_rho_derivs = false;
    Field<double> rho_x, rho_y;
};

// decomposes E3 = T + lambda nu against the vertical direction (R3 ambient)
SurfaceData3 surface_data_r3(const Immersion& f);

// the two right-hand-side multipliers of the constancy system; both are imaginary
struct ConstancyMultipliers {
    Quaternion Mx, My;
};
ConstancyMultipliers constancy_multipliers(double rho_x, double rho_y, double erho, double h11,
                                           double h12, double h22, double T1, double T2,
                                           double lambda, double tau);
std::pair<Quaternion, Quaternion> constancy_rhs(const ConstancyMultipliers& m, const Quaternion& v);

struct ConstancyResidual {
    ResidualReport vx, vy;
    ResidualReport norm;  // max | |v| - 1 |
};
ConstancyResidual constancy_residual(const SurfaceData3& sd, const Field<Quaternion>& v);

struct QInvariant {
    Field<Quaternion> q;          // conj(v) (T1 i + T2 j + lambda k) v
    Quaternion mean;
    double spread = 0;            // max |q - mean|
    double stddev = 0;
    double max_re = 0;            // max |Re q|
    ResidualReport vanishing;     // |lambda q - <conj(v) k v, q> q|
};
QInvariant q_invariant(const Field<Quaternion>& v, const SurfaceData3& sd);

// the four T equations and two lambda equations, reported together
ResidualReport daniel_residual(const SurfaceData3& sd);

// |dlambda + 2 Q(T) + B(T) + tau J T| in the orthonormal frame
ResidualReport em_tensor_residual(const Field<Quaternion>& v, const SurfaceData3& sd);

}  // namespace spinrep
