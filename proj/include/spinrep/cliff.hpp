#pragma once

#include <array>
#include <complex>
#include <utility>

#include "spinrep/quaternion.hpp"

namespace spinrep {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Mat4 = std::array<std::array<double, 4>, 4>;

// Two coexisting splitting conventions for Sigma_2 = H.
//   R3: J = right multiplication by i, eigenbasis (1 +- j)/sqrt2, components in C = span(1,i)
//   R4: J = right multiplication by j, eigenbasis (1 -+ i)/sqrt2, components in C^ = span(1,j)
enum class SplitConv { R3, R4 };

struct SpinorValue2 {
    Quaternion value;
    SplitConv conv = SplitConv::R3;
};

// rotation action of a unit quaternion on Im H: x -> a x conj(a)
Quaternion rot3(const Quaternion& a, const Quaternion& x);
Vec3 rot3(const Quaternion& a, const Vec3& x);

struct SpinFrame4 {
    Quaternion p, q;
};

// Spin(4) action on H: x -> p x conj(q)
Quaternion rot4(const SpinFrame4& f, const Quaternion& x);

// Clifford multiplication of an imaginary vector on Sigma_2 = H (left multiplication).
Quaternion clifford3(const Quaternion& x, const Quaternion& v);

// Full Cl_3 action: the algebra element [[a,b],[b,a]] acts as left multiplication by a+b.
Quaternion chi3_full(const Quaternion& a, const Quaternion& b, const Quaternion& v);

// v = (1+j)/sqrt2 v+ + (1-j)/sqrt2 v-   (R3 tag, v+- in span(1,i))
// v = (1-i)/sqrt2 v+ + (1+i)/sqrt2 v-   (R4 tag, v+- in span(1,j), stored as complex (re, j-part))
std::pair<cplx, cplx> split2(const SpinorValue2& v);
SpinorValue2 unsplit2(cplx vplus, cplx vminus, SplitConv conv);

struct SpinorValue4 {
    Quaternion a, b;
};

// chi_4(x): (a,b) -> (x b, -conj(x) a)
SpinorValue4 chi4(const Quaternion& x, const SpinorValue4& s);

// element of Sigma_2 (x) Sigma_2', coefficients over C^ = span(1,j) against the
// unnormalized basis (1-i)(x)(1-i), (1+i)(x)(1+i), (1-i)(x)(1+i), (1+i)(x)(1-i)
struct Tensor22 {
    cplx cpp, cmm, cpm, cmp;
};

// gamma(u + v) = chi2(u) (x) chi2'(omega2^C) + Id (x) chi2'(v) on Sigma_2 (x) Sigma_2'
Tensor22 gamma4(const Vec2& u, const Vec2& v, const Tensor22& t);

// the intertwiner Sigma_2 (x) Sigma_2' -> Sigma_4 and its inverse
SpinorValue4 psi_iso(const Tensor22& t);
Tensor22 psi_iso_inv(const SpinorValue4& s);

// unit quaternion a with rot3(a, .) == R (columns of R are images of i, j, k);
// sign fixed so the first component of a exceeding 1e-9 in magnitude is positive.
Quaternion frame_from_rotation(const Mat3& R, double tol = 1e-8);

// SpinFrame4 (p, q) with rot4((p,q), .) == R on the basis (1, i, j, k)
SpinFrame4 frame_from_rotation(const Mat4& R, double tol = 1e-8);

Mat3 rotation_matrix(const Quaternion& a);
Mat4 rotation_matrix(const SpinFrame4& f);

}  // namespace spinrep
