#include <doctest.h>

#include "spinrep/grid.hpp"

using namespace spinrep;

namespace {
const Domain dom101 = Domain::with_spacing(-1, 1, -1, 1, 0.02);
}

TEST_CASE("domain construction and validation") {
    Domain d = Domain::with_spacing(-1, 1, -1, 1, 0.01);
    CHECK(d.nx == 201);
    CHECK(d.ny == 201);
    CHECK(d.h == doctest::Approx(0.01));
    CHECK_THROWS(Domain(-1, 1, -1, 1, 3, 3));
    CHECK_THROWS(Domain(-1, 1, -2, 2, 11, 11));  // non-square cells
}

TEST_CASE("wirtinger derivatives on exact polynomials") {
    auto fz = Field<cplx>::sample(dom101, [](cplx z) { return z; });
    auto d1 = d_dz(fz);
    auto d2 = d_dzbar(fz);
    for (auto& v : d1.values) CHECK(std::abs(v - 1.0) < 1e-14);
    for (auto& v : d2.values) CHECK(std::abs(v) < 1e-14);

    auto fzb = Field<cplx>::sample(dom101, [](cplx z) { return std::conj(z); });
    CHECK(report_from_field(d_dz(fzb), "dz").max_abs < 1e-14);
    auto dzb = d_dzbar(fzb);
    for (auto& v : dzb.values) CHECK(std::abs(v - 1.0) < 1e-14);

    Domain fine = Domain::with_spacing(-1, 1, -1, 1, 0.01);
    auto fq = Field<cplx>::sample(fine, [](cplx z) { return z * z; });
    auto dq = d_dz(fq);
    double err = 0;
    for (int iy = 0; iy < fine.ny; ++iy)
        for (int ix = 0; ix < fine.nx; ++ix)
            err = std::max(err, std::abs(dq.at(ix, iy) - 2.0 * fine.z(ix, iy)));
    CHECK(err < 1e-10);
}

TEST_CASE("derivatives are linear and kill constants") {
    auto c = Field<cplx>::sample(dom101, [](cplx) { return cplx(2.5, -1.0); });
    CHECK(report_from_field(d_dx(c), "dx").max_abs == 0.0);
    CHECK(report_from_field(d_dy(c), "dy").max_abs == 0.0);

    auto f = Field<cplx>::sample(dom101, [](cplx z) { return std::exp(z); });
    auto g = Field<cplx>::sample(dom101, [](cplx z) { return z * z * std::conj(z); });
    auto sum = combine(f, g, [](cplx a, cplx b) { return 2.0 * a + 3.0 * b; });
    auto lhs = d_dz(sum);
    auto rhs = combine(d_dz(f), d_dz(g), [](cplx a, cplx b) { return 2.0 * a + 3.0 * b; });
    CHECK(report_from_field(combine(lhs, rhs, [](cplx a, cplx b) { return a - b; }), "lin").max_abs <
          1e-12);
}

TEST_CASE("antiholomorphic residual converges at second order") {
    auto run = [](double h) {
        Domain d = Domain::with_spacing(-1, 1, -1, 1, h);
        auto f = Field<cplx>::sample(d, [](cplx z) { return z * z * z * z; });
        return report_from_field(d_dzbar(f), "dzbar").interior_max;
    };
    double r1 = run(0.02), r2 = run(0.01);
    CHECK(r1 / r2 > 3.0);
}

TEST_CASE("closedness residual examples") {
    auto P = Field<double>::sample(dom101, [](cplx z) { return 2 * z.real(); });
    auto Q = Field<double>::sample(dom101, [](cplx z) { return 2 * z.imag(); });
    CHECK(closedness_residual(P, Q).max_abs < 1e-13);

    auto P2 = Field<double>::sample(dom101, [](cplx z) { return -z.imag(); });
    auto Q2 = Field<double>::sample(dom101, [](cplx z) { return z.real(); });
    auto rep = closedness_residual(P2, Q2);
    CHECK(rep.max_abs == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.mean_abs == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("path integration of exact forms") {
    int bx = dom101.base_ix(), by = dom101.base_iy();
    auto P = Field<double>::sample(dom101, [](cplx) { return 1.0; });
    auto Q = Field<double>::sample(dom101, [](cplx) { return 0.0; });
    auto F = integrate_form(P, Q, bx, by);
    for (int iy = 0; iy < dom101.ny; ++iy)
        for (int ix = 0; ix < dom101.nx; ++ix)
            CHECK(std::abs(F.at(ix, iy) - (dom101.x(ix) - dom101.x(bx))) < 1e-13);

    Domain fine = Domain::with_spacing(-1, 1, -1, 1, 0.01);
    auto P2 = Field<double>::sample(fine, [](cplx z) { return 2 * z.real(); });
    auto Q2 = Field<double>::sample(fine, [](cplx z) { return 2 * z.imag(); });
    auto F2 = integrate_form(P2, Q2, fine.base_ix(), fine.base_iy());
    double c0 = std::norm(fine.z(fine.base_ix(), fine.base_iy()));
    double err = 0;
    for (int iy = 0; iy < fine.ny; ++iy)
        for (int ix = 0; ix < fine.nx; ++ix)
            err = std::max(err, std::abs(F2.at(ix, iy) - (std::norm(fine.z(ix, iy)) - c0)));
    CHECK(err < 1e-6);
}

TEST_CASE("row-first and column-first integrals agree for closed forms") {
    auto run = [](double h) {
        Domain d = Domain::with_spacing(-1, 1, -1, 1, h);
        // P dx + Q dy = d(sin x cosh y)
        auto P = Field<double>::sample(d, [](cplx z) { return std::cos(z.real()) * std::cosh(z.imag()); });
        auto Q = Field<double>::sample(d, [](cplx z) { return std::sin(z.real()) * std::sinh(z.imag()); });
        return path_independence_residual(P, Q, d.base_ix(), d.base_iy()).max_abs;
    };
    double r1 = run(0.02), r2 = run(0.01);
    CHECK(r1 / r2 > 3.0);
    CHECK(r2 < 1e-4);
}

TEST_CASE("integration followed by differentiation recovers the form") {
    Domain d = Domain::with_spacing(-1, 1, -1, 1, 0.01);
    auto P = Field<double>::sample(d, [](cplx z) { return std::cos(z.real()) * std::cosh(z.imag()); });
    auto Q = Field<double>::sample(d, [](cplx z) { return std::sin(z.real()) * std::sinh(z.imag()); });
    auto F = integrate_form(P, Q, d.base_ix(), d.base_iy());
    auto Px = d_dx(F);
    auto Qy = d_dy(F);
    auto dp = report_from_field(combine(Px, P, [](double a, double b) { return a - b; }), "dP");
    auto dq = report_from_field(combine(Qy, Q, [](double a, double b) { return a - b; }), "dQ");
    CHECK(dp.interior_max < 5e-4);
    CHECK(dq.interior_max < 5e-4);
}

TEST_CASE("quaternionic derivative variants differ by side") {
    Domain d = Domain::with_spacing(-1, 1, -1, 1, 0.05);
    auto F = Field<Quaternion>::sample(d, [](cplx z) {
        return Quaternion{z.real(), z.imag(), z.real() * z.imag(), 1.0};
    });
    auto right = d_dz_right(F);
    auto left = d_dz_left(F);
    // they agree on complex-valued fields only; this one has a j component
    double diff = 0;
    for (std::size_t i = 0; i < right.values.size(); ++i)
        diff = std::max(diff, (right.values[i] - left.values[i]).norm());
    CHECK(diff > 0.1);
}
