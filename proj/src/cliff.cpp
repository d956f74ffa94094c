#include "spinrep/cliff.hpp"

#include <cmath>
#include <stdexcept>

namespace spinrep {

namespace {

constexpr double kUnitTol = 1e-12;
const double kSqrt2 = std::sqrt(2.0);

void require_unit(const Quaternion& a, const char* who) {
    if (std::abs(a.norm() - 1.0) > kUnitTol)
        throw std::invalid_argument(std::string(who) + ": quaternion is not unit");
}

void require_imag(const Quaternion& x, const char* who) {
    if (std::abs(x.w) > kUnitTol * (1.0 + x.norm()))
        throw std::invalid_argument(std::string(who) + ": quaternion has a real part");
}

// sign rule: first component with |c| > 1e-9 is made positive
Quaternion fix_sign(const Quaternion& a) {
    for (double c : {a.w, a.x, a.y, a.z}) {
        if (std::abs(c) > 1e-9) return c < 0 ? -a : a;
    }
    return a;
}

}  // namespace

Quaternion rot3(const Quaternion& a, const Quaternion& x) {
    require_unit(a, "rot3");
    require_imag(x, "rot3");
    return a * x * a.conj();
}

Vec3 rot3(const Quaternion& a, const Vec3& x) {
    return rot3(a, Quaternion::from_imag(x)).imag();
}

Quaternion rot4(const SpinFrame4& f, const Quaternion& x) {
    require_unit(f.p, "rot4");
    require_unit(f.q, "rot4");
    return f.p * x * f.q.conj();
}

Quaternion clifford3(const Quaternion& x, const Quaternion& v) {
    require_imag(x, "clifford3");
    return x * v;
}

Quaternion chi3_full(const Quaternion& a, const Quaternion& b, const Quaternion& v) {
    return (a + b) * v;
}

std::pair<cplx, cplx> split2(const SpinorValue2& v) {
    const Quaternion& q = v.value;
    if (v.conv == SplitConv::R3) {
        // v+ = ((w+y) + i(x-z))/sqrt2, v- = ((w-y) + i(x+z))/sqrt2
        return {cplx{(q.w + q.y) / kSqrt2, (q.x - q.z) / kSqrt2},
                cplx{(q.w - q.y) / kSqrt2, (q.x + q.z) / kSqrt2}};
    }
    // R4: components in C^ = span(1,j); stored as complex (real part, j part)
    return {cplx{(q.w - q.x) / kSqrt2, (q.y - q.z) / kSqrt2},
            cplx{(q.w + q.x) / kSqrt2, (q.y + q.z) / kSqrt2}};
}

SpinorValue2 unsplit2(cplx vp, cplx vm, SplitConv conv) {
    if (conv == SplitConv::R3) {
        Quaternion e_p{1, 0, 1, 0}, e_m{1, 0, -1, 0};  // 1 +- j
        Quaternion q = (e_p * Quaternion{vp.real(), vp.imag(), 0, 0} +
                        e_m * Quaternion{vm.real(), vm.imag(), 0, 0}) /
                       kSqrt2;
        return {q, conv};
    }
    Quaternion e_p{1, -1, 0, 0}, e_m{1, 1, 0, 0};  // 1 -+ i
    Quaternion q = (e_p * Quaternion{vp.real(), 0, vp.imag(), 0} +
                    e_m * Quaternion{vm.real(), 0, vm.imag(), 0}) /
                   kSqrt2;
    return {q, conv};
}

SpinorValue4 chi4(const Quaternion& x, const SpinorValue4& s) {
    return {x * s.b, -(x.conj() * s.a)};
}

namespace {

// C^ coefficient as a quaternion in span(1,j)
Quaternion chat(cplx c) { return {c.real(), 0, c.imag(), 0}; }

// split against the unnormalized R4 basis (1-i), (1+i)
std::pair<cplx, cplx> split_r4_raw(const Quaternion& q) {
    return {cplx{(q.w - q.x) / 2.0, (q.y - q.z) / 2.0},
            cplx{(q.w + q.x) / 2.0, (q.y + q.z) / 2.0}};
}

Quaternion unsplit_r4_raw(cplx cp, cplx cm) {
    return Quaternion{1, -1, 0, 0} * chat(cp) + Quaternion{1, 1, 0, 0} * chat(cm);
}

struct FactorOp {
    // 2x2 matrix over C^ against the basis (1-i), (1+i)
    cplx m[2][2];
};

template <class F>
FactorOp factor_matrix(F&& op) {
    FactorOp r;
    Quaternion b0{1, -1, 0, 0}, b1{1, 1, 0, 0};
    auto c0 = split_r4_raw(op(b0));
    auto c1 = split_r4_raw(op(b1));
    r.m[0][0] = c0.first;
    r.m[1][0] = c0.second;
    r.m[0][1] = c1.first;
    r.m[1][1] = c1.second;
    return r;
}

// apply A on the first factor and B on the second; coefficients in C^ commute
Tensor22 tensor_apply(const FactorOp& A, const FactorOp& B, const Tensor22& t) {
    // index coefficients as c[e][e'] with e,e' in {0(+),1(-)}
    cplx c[2][2] = {{t.cpp, t.cpm}, {t.cmp, t.cmm}};
    cplx r[2][2] = {{0, 0}, {0, 0}};
    for (int e = 0; e < 2; ++e)
        for (int ep = 0; ep < 2; ++ep)
            for (int m = 0; m < 2; ++m)
                for (int mp = 0; mp < 2; ++mp) r[e][ep] += A.m[e][m] * B.m[ep][mp] * c[m][mp];
    return {r[0][0], r[1][1], r[0][1], r[1][0]};
}

}  // namespace

Tensor22 gamma4(const Vec2& u, const Vec2& v, const Tensor22& t) {
    Quaternion xu{0, u[0], u[1], 0};
    Quaternion xv{0, v[0], v[1], 0};
    FactorOp chi_u = factor_matrix([&](const Quaternion& q) { return xu * q; });
    FactorOp chi_v = factor_matrix([&](const Quaternion& q) { return xv * q; });
    FactorOp omega = factor_matrix([](const Quaternion& q) { return Q_K * q * Q_J; });
    FactorOp id = factor_matrix([](const Quaternion& q) { return q; });
    Tensor22 t1 = tensor_apply(chi_u, omega, t);
    Tensor22 t2 = tensor_apply(id, chi_v, t);
    return {t1.cpp + t2.cpp, t1.cmm + t2.cmm, t1.cpm + t2.cpm, t1.cmp + t2.cmp};
}

SpinorValue4 psi_iso(const Tensor22& t) {
    Quaternion a = Quaternion{1, 0, 0, 1} * chat(t.cpp) - Quaternion{0, 1, 1, 0} * chat(t.cmm);
    Quaternion b = Quaternion{0, 1, 1, 0} * chat(t.cpm) - Quaternion{1, 0, 0, 1} * chat(t.cmp);
    return {a, b};
}

Tensor22 psi_iso_inv(const SpinorValue4& s) {
    const Quaternion& a = s.a;
    const Quaternion& b = s.b;
    Tensor22 t;
    t.cpp = cplx{(a.w + a.z) / 2.0, (a.y - a.x) / 2.0};
    t.cmm = cplx{-(a.x + a.y) / 2.0, (a.w - a.z) / 2.0};
    t.cpm = cplx{(b.x + b.y) / 2.0, (b.z - b.w) / 2.0};
    t.cmp = cplx{-(b.w + b.z) / 2.0, (b.x - b.y) / 2.0};
    return t;
}

namespace {

void require_rotation3(const Mat3& R, double tol) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0;
            for (int k = 0; k < 3; ++k) s += R[k][i] * R[k][j];
            if (std::abs(s - (i == j ? 1.0 : 0.0)) > tol)
                throw std::invalid_argument("frame_from_rotation: matrix is not orthogonal");
        }
    double det = R[0][0] * (R[1][1] * R[2][2] - R[1][2] * R[2][1]) -
                 R[0][1] * (R[1][0] * R[2][2] - R[1][2] * R[2][0]) +
                 R[0][2] * (R[1][0] * R[2][1] - R[1][1] * R[2][0]);
    if (det < 0) throw std::invalid_argument("frame_from_rotation: reflection (det < 0)");
}

}  // namespace

Quaternion frame_from_rotation(const Mat3& R, double tol) {
    require_rotation3(R, tol);
    // Shepperd's method: pick the largest of (trace, R00, R11, R22)
    double tr = R[0][0] + R[1][1] + R[2][2];
    Quaternion a;
    if (tr >= R[0][0] && tr >= R[1][1] && tr >= R[2][2]) {
        double s = std::sqrt(tr + 1.0) * 2.0;
        a = {0.25 * s, (R[2][1] - R[1][2]) / s, (R[0][2] - R[2][0]) / s, (R[1][0] - R[0][1]) / s};
    } else if (R[0][0] >= R[1][1] && R[0][0] >= R[2][2]) {
        double s = std::sqrt(1.0 + R[0][0] - R[1][1] - R[2][2]) * 2.0;
        a = {(R[2][1] - R[1][2]) / s, 0.25 * s, (R[0][1] + R[1][0]) / s, (R[0][2] + R[2][0]) / s};
    } else if (R[1][1] >= R[2][2]) {
        double s = std::sqrt(1.0 + R[1][1] - R[0][0] - R[2][2]) * 2.0;
        a = {(R[0][2] - R[2][0]) / s, (R[0][1] + R[1][0]) / s, 0.25 * s, (R[1][2] + R[2][1]) / s};
    } else {
        double s = std::sqrt(1.0 + R[2][2] - R[0][0] - R[1][1]) * 2.0;
        a = {(R[1][0] - R[0][1]) / s, (R[0][2] + R[2][0]) / s, (R[1][2] + R[2][1]) / s, 0.25 * s};
    }
    // rotation_matrix(a) realizes x -> a x conj(a); rot3 with this a gives R directly
    return fix_sign(a.normalized());
}

Mat3 rotation_matrix(const Quaternion& a) {
    Mat3 R;
    const Quaternion cols[3] = {rot3(a, Q_I), rot3(a, Q_J), rot3(a, Q_K)};
    for (int c = 0; c < 3; ++c) {
        Vec3 v = cols[c].imag();
        for (int r = 0; r < 3; ++r) R[r][c] = v[r];
    }
    return R;
}

SpinFrame4 frame_from_rotation(const Mat4& R, double tol) {
    // orthogonality + determinant check
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0;
            for (int k = 0; k < 4; ++k) s += R[k][i] * R[k][j];
            if (std::abs(s - (i == j ? 1.0 : 0.0)) > tol)
                throw std::invalid_argument("frame_from_rotation: matrix is not orthogonal");
        }
    Quaternion e[4];
    for (int c = 0; c < 4; ++c) e[c] = {R[0][c], R[1][c], R[2][c], R[3][c]};
    // det via the 3x3 reduction below failing on reflections; cheap explicit check:
    // columns (e1..e4) form a positively oriented frame iff the reduced matrix is a rotation.
    // Reduce: p x conj(p) realizes M~(x) = M(x) conj(e1) on Im H, then q = conj(e1) p.
    Mat3 Rt;
    for (int c = 0; c < 3; ++c) {
        Quaternion col = e[c + 1] * e[0].conj();
        Vec3 v = col.imag();
        if (std::abs(col.w) > tol)
            throw std::invalid_argument("frame_from_rotation: frame is not orthonormal");
        for (int r = 0; r < 3; ++r) Rt[r][c] = v[r];
    }
    Quaternion p = frame_from_rotation(Rt, tol);
    Quaternion q = e[0].conj() * p;
    return {p, q};
}

Mat4 rotation_matrix(const SpinFrame4& f) {
    Mat4 R;
    const Quaternion basis[4] = {Q_ONE, Q_I, Q_J, Q_K};
    for (int c = 0; c < 4; ++c) {
        Quaternion col = rot4(f, basis[c]);
        Vec4 v = col.real4();
        for (int r = 0; r < 4; ++r) R[r][c] = v[r];
    }
    return R;
}

}  // namespace spinrep
