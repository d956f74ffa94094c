#include <doctest.h>

#include <random>

#include "spinrep/cliff.hpp"

using namespace spinrep;

namespace {

std::mt19937_64 rng(42);

double gauss() {
    static std::normal_distribution<double> n(0.0, 1.0);
    return n(rng);
}

Quaternion random_quat() { return {gauss(), gauss(), gauss(), gauss()}; }
Quaternion random_unit() { return random_quat().normalized(); }
Quaternion random_imag() { return {0, gauss(), gauss(), gauss()}; }

const Quaternion u0{0.5, 0.5, -0.5, 0.5};  // (1 + i - j + k)/2

double qdist(const Quaternion& a, const Quaternion& b) { return (a - b).norm(); }

}  // namespace

TEST_CASE("quaternion algebra basics") {
    CHECK(qdist(Q_I * Q_J, Q_K) == 0);
    CHECK(qdist(Q_J * Q_K, Q_I) == 0);
    CHECK(qdist(Q_K * Q_I, Q_J) == 0);
    CHECK(qdist(Q_I * Q_I, -Q_ONE) == 0);
    for (int t = 0; t < 100; ++t) {
        Quaternion p = random_quat(), q = random_quat(), r = random_quat();
        CHECK(qdist((p * q) * r, p * (q * r)) < 1e-12 * (1 + p.norm() * q.norm() * r.norm()));
        CHECK(std::abs((p * q).norm() - p.norm() * q.norm()) < 1e-12 * (1 + p.norm() * q.norm()));
        CHECK(qdist((p * q).conj(), q.conj() * p.conj()) < 1e-13 * (1 + (p * q).norm()));
    }
}

TEST_CASE("rot3 examples and properties") {
    CHECK(qdist(rot3(Q_ONE, Q_I), Q_I) == 0);
    CHECK(qdist(rot3(u0, Q_K), -Q_J) < 1e-15);
    CHECK(qdist(rot3(u0, Q_J), -Q_I) < 1e-15);
    CHECK(qdist(rot3(u0, Q_I), Q_K) < 1e-15);

    Quaternion ek4 = exp_imag({0, 0, M_PI / 4});
    CHECK(qdist(rot3(ek4, Q_I), Q_J) < 1e-15);

    for (int t = 0; t < 100; ++t) {
        Quaternion a = random_unit(), b = random_unit(), x = random_imag();
        CHECK(std::abs(rot3(a, x).norm() - x.norm()) < 1e-12 * (1 + x.norm()));
        CHECK(std::abs(rot3(a, x).w) < 1e-12 * (1 + x.norm()));
        CHECK(qdist(rot3(a * b, x), rot3(a, rot3(b, x))) < 1e-12 * (1 + x.norm()));
    }

    CHECK_THROWS(rot3(Quaternion{1, 1, 0, 0}, Q_I));
}

TEST_CASE("rot4 examples and properties") {
    CHECK(qdist(rot4({Q_ONE, Q_ONE}, random_quat() * 0 + Q_I), Q_I) == 0);
    CHECK(qdist(rot4({Q_I, Q_I}, Q_ONE), Q_ONE) < 1e-15);
    for (int t = 0; t < 100; ++t) {
        SpinFrame4 f{random_unit(), random_unit()};
        Quaternion x = random_quat();
        CHECK(std::abs(rot4(f, x).norm() - x.norm()) < 1e-12 * (1 + x.norm()));
    }
    // restricted to Im H, (p, p) acts as rot3(p, .)
    for (int t = 0; t < 20; ++t) {
        Quaternion p = random_unit(), x = random_imag();
        CHECK(qdist(rot4({p, p}, x), rot3(p, x)) < 1e-13 * (1 + x.norm()));
    }
    CHECK_THROWS(rot4({Quaternion{2, 0, 0, 0}, Q_ONE}, Q_I));
}

TEST_CASE("clifford3 and the Clifford relation") {
    CHECK(qdist(clifford3(Q_I, Q_ONE), Q_I) == 0);
    Quaternion v = random_quat();
    CHECK(qdist(clifford3(Q_I, clifford3(Q_I, v)), -v) < 1e-14 * (1 + v.norm()));
    for (int t = 0; t < 100; ++t) {
        Quaternion x = random_imag(), y = random_imag(), w = random_quat();
        Quaternion lhs = clifford3(x, clifford3(y, w)) + clifford3(y, clifford3(x, w));
        Quaternion rhs = -2.0 * dot(x, y) * w;
        CHECK(qdist(lhs, rhs) < 1e-12 * (1 + lhs.norm() + rhs.norm()));
    }
}

TEST_CASE("split2 examples, both conventions") {
    const double s2 = std::sqrt(2.0);
    auto [vp, vm] = split2({Quaternion{1 / s2, 0, 1 / s2, 0}, SplitConv::R3});
    CHECK(std::abs(vp - cplx(1, 0)) < 1e-15);
    CHECK(std::abs(vm) < 1e-15);

    auto [up, um] = split2({Q_ONE, SplitConv::R3});
    CHECK(std::abs(up - cplx(1 / s2, 0)) < 1e-15);
    CHECK(std::abs(um - cplx(1 / s2, 0)) < 1e-15);

    for (auto conv : {SplitConv::R3, SplitConv::R4}) {
        for (int t = 0; t < 100; ++t) {
            Quaternion q = random_quat();
            auto [p, m] = split2({q, conv});
            CHECK(std::abs(q.norm2() - (std::norm(p) + std::norm(m))) < 1e-12 * (1 + q.norm2()));
            CHECK(qdist(unsplit2(p, m, conv).value, q) < 1e-13 * (1 + q.norm()));
        }
    }
}

TEST_CASE("psi isomorphism: pinned basis images and inverse") {
    SpinorValue4 s1 = psi_iso({1, 0, 0, 0});
    CHECK(qdist(s1.a, Quaternion{1, 0, 0, 1}) < 1e-15);
    CHECK(s1.b.norm() < 1e-15);

    SpinorValue4 s2 = psi_iso({0, 0, 0, 1});
    CHECK(s2.a.norm() < 1e-15);
    CHECK(qdist(s2.b, Quaternion{-1, 0, 0, -1}) < 1e-15);

    for (int t = 0; t < 100; ++t) {
        Tensor22 tt{cplx(gauss(), gauss()), cplx(gauss(), gauss()), cplx(gauss(), gauss()),
                    cplx(gauss(), gauss())};
        Tensor22 back = psi_iso_inv(psi_iso(tt));
        CHECK(std::abs(back.cpp - tt.cpp) < 1e-13);
        CHECK(std::abs(back.cmm - tt.cmm) < 1e-13);
        CHECK(std::abs(back.cpm - tt.cpm) < 1e-13);
        CHECK(std::abs(back.cmp - tt.cmp) < 1e-13);
    }
}

TEST_CASE("gamma4 squares to minus the norm") {
    Tensor22 basis[4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    // zero vector gives the zero map
    Tensor22 z = gamma4({0, 0}, {0, 0}, basis[0]);
    CHECK(std::abs(z.cpp) + std::abs(z.cmm) + std::abs(z.cpm) + std::abs(z.cmp) < 1e-15);

    for (auto& b : basis) {
        Tensor22 twice = gamma4({1, 0}, {0, 0}, gamma4({1, 0}, {0, 0}, b));
        CHECK(std::abs(twice.cpp + b.cpp) < 1e-14);
        CHECK(std::abs(twice.cmm + b.cmm) < 1e-14);
        CHECK(std::abs(twice.cpm + b.cpm) < 1e-14);
        CHECK(std::abs(twice.cmp + b.cmp) < 1e-14);
    }

    for (int t = 0; t < 100; ++t) {
        Vec2 u{gauss(), gauss()}, v{gauss(), gauss()};
        double n2 = u[0] * u[0] + u[1] * u[1] + v[0] * v[0] + v[1] * v[1];
        Tensor22 tt{cplx(gauss(), gauss()), cplx(gauss(), gauss()), cplx(gauss(), gauss()),
                    cplx(gauss(), gauss())};
        Tensor22 twice = gamma4(u, v, gamma4(u, v, tt));
        CHECK(std::abs(twice.cpp + n2 * tt.cpp) < 1e-12 * (1 + n2));
        CHECK(std::abs(twice.cmm + n2 * tt.cmm) < 1e-12 * (1 + n2));
        CHECK(std::abs(twice.cpm + n2 * tt.cpm) < 1e-12 * (1 + n2));
        CHECK(std::abs(twice.cmp + n2 * tt.cmp) < 1e-12 * (1 + n2));
    }
}

TEST_CASE("psi intertwines gamma with chi4") {
    auto check_intertwine = [&](const Quaternion& x, const Tensor22& t) {
        Vec2 u{x.w, x.x}, v{x.y, x.z};
        SpinorValue4 lhs = psi_iso(gamma4(u, v, t));
        SpinorValue4 rhs = chi4(x, psi_iso(t));
        CHECK(qdist(lhs.a, rhs.a) < 1e-12 * (1 + rhs.a.norm()));
        CHECK(qdist(lhs.b, rhs.b) < 1e-12 * (1 + rhs.b.norm()));
    };
    Tensor22 basis[4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    for (auto& x : {Q_ONE, Q_I, Q_J, Q_K})
        for (auto& t : basis) check_intertwine(x, t);
    for (int t = 0; t < 50; ++t)
        check_intertwine(random_quat(), Tensor22{cplx(gauss(), gauss()), cplx(gauss(), gauss()),
                                                 cplx(gauss(), gauss()), cplx(gauss(), gauss())});
}

TEST_CASE("chi4 squares to minus the norm") {
    for (int t = 0; t < 100; ++t) {
        Quaternion x = random_quat();
        SpinorValue4 s{random_quat(), random_quat()};
        SpinorValue4 twice = chi4(x, chi4(x, s));
        CHECK(qdist(twice.a, -x.norm2() * s.a) < 1e-12 * (1 + x.norm2() * s.a.norm()));
        CHECK(qdist(twice.b, -x.norm2() * s.b) < 1e-12 * (1 + x.norm2() * s.b.norm()));
    }
}

TEST_CASE("frame extraction from rotation matrices") {
    Mat3 eye{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    CHECK(qdist(frame_from_rotation(eye), Q_ONE) < 1e-15);

    // rotation by pi/2 about the k axis
    Mat3 Rk{{{0, -1, 0}, {1, 0, 0}, {0, 0, 1}}};
    Quaternion a = frame_from_rotation(Rk);
    Quaternion expect = exp_imag({0, 0, M_PI / 4});
    CHECK(std::min(qdist(a, expect), qdist(a, -expect)) < 1e-14);

    for (int t = 0; t < 100; ++t) {
        Quaternion q = random_unit();
        Mat3 R = rotation_matrix(q);
        Quaternion back = frame_from_rotation(R);
        CHECK(std::min(qdist(back, q), qdist(back, -q)) < 1e-10);
        Mat3 R2 = rotation_matrix(back);
        double err = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) err = std::max(err, std::abs(R[i][j] - R2[i][j]));
        CHECK(err < 1e-10);
    }

    Mat3 bad{{{1, 0, 0}, {0, 1, 0.5}, {0, 0, 1}}};
    CHECK_THROWS(frame_from_rotation(bad));
    Mat3 refl{{{1, 0, 0}, {0, 1, 0}, {0, 0, -1}}};
    CHECK_THROWS(frame_from_rotation(refl));
}

TEST_CASE("spin frame extraction in four dimensions") {
    for (int t = 0; t < 100; ++t) {
        SpinFrame4 f{random_unit(), random_unit()};
        Mat4 R = rotation_matrix(f);
        SpinFrame4 g = frame_from_rotation(R);
        Mat4 R2 = rotation_matrix(g);
        double err = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) err = std::max(err, std::abs(R[i][j] - R2[i][j]));
        CHECK(err < 1e-10);
    }

    Mat4 refl{{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, -1}}};
    CHECK_THROWS(frame_from_rotation(refl));
    Mat4 skew{{{1, 0, 0, 0.2}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}};
    CHECK_THROWS(frame_from_rotation(skew));
}

TEST_CASE("full Cl3 action restricted to vectors and Spin(3)") {
    for (int t = 0; t < 20; ++t) {
        Quaternion x = random_imag(), v = random_quat();
        CHECK(qdist(chi3_full(x * 0, x, v) * 0 + chi3_full({0, 0, 0, 0}, x, v), clifford3(x, v)) <
              1e-13 * (1 + v.norm()));
        Quaternion a = random_unit();
        CHECK(qdist(chi3_full(a, {0, 0, 0, 0}, v), a * v) < 1e-14 * (1 + v.norm()));
    }
}
