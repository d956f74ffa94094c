#pragma once

#include <optional>
#include <utility>

#include "spinrep/cliff.hpp"
#include "spinrep/grid.hpp"

namespace spinrep {

enum class Ambient { R3, Nil3, R4 };

// Discretized immersion. For R3/Nil3 the points live in p3, for R4 in p4.
// Generated immersions carry their exact first derivatives; for Nil3 the
// derivative fields hold left-invariant frame components of f^-1 f_x, f^-1 f_y.
struct Immersion {
    Ambient ambient = Ambient::R3;
    double tau = 0;
    Domain dom;
    Field<Vec3> p3;
    Field<Quaternion> p4;
    bool has_exact_derivs = false;
    Field<Vec3> fx3, fy3;
    Field<Quaternion> fx4, fy4;
};

// tangent fields; for Nil3 these are frame components of the Maurer-Cartan form
std::pair<Field<Vec3>, Field<Vec3>> tangent_fields3(const Immersion& f);
std::pair<Field<Quaternion>, Field<Quaternion>> tangent_fields4(const Immersion& f);

struct FirstForm {
    Field<double> E, F, G;
    ResidualReport conformality;  // max(|E-G|, |F|) / max(E, G) pointwise
};

FirstForm first_form(const Immersion& f);

struct CurvatureR3 {
    Field<double> H;
    Field<Vec3> nu;                  // unit normal f_x x f_y / |.|
    Field<double> h11, h12, h22;     // shape operator in the orthonormal frame
    Field<double> rho;               // log |f_x|
};

CurvatureR3 mean_curvature_r3(const Immersion& f);

struct CurvatureR4 {
    Field<double> H3, H4;  // mean curvature vector components in the given normal frame
    Field<double> cx, cy;  // normal connection coefficients
    Field<double> rho;
};

CurvatureR4 mean_curvature_r4(const Immersion& f, const Field<Quaternion>& e3,
                              const Field<Quaternion>& e4);

struct CongruenceResult {
    Mat4 R{};        // rotation (upper-left 3x3 used for R3)
    Vec4 t{};        // translation
    double rms = 0;  // RMS distance after alignment
    bool reflection_preferred = false;  // an improper fit would have been better
};

// best rigid motion g ~ R f + t by least squares over all grid points
CongruenceResult congruence(const Immersion& f, const Immersion& g);

}  // namespace spinrep
