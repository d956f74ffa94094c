#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinrep/quaternion.hpp"

namespace spinrep {

// componentwise arithmetic for array-valued fields
inline Vec3 operator+(const Vec3& a, const Vec3& b) { return add3(a, b); }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return sub3(a, b); }
inline Vec3 operator*(const Vec3& a, double s) { return scale3(a, s); }
inline Vec3 operator*(double s, const Vec3& a) { return scale3(a, s); }
inline Vec3 operator/(const Vec3& a, double s) { return scale3(a, 1.0 / s); }
inline Vec3 operator-(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }

inline CVec3 operator+(const CVec3& a, const CVec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline CVec3 operator-(const CVec3& a, const CVec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline CVec3 operator*(const CVec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
inline CVec3 operator*(double s, const CVec3& a) { return a * s; }
inline CVec3 operator/(const CVec3& a, double s) { return {a[0] / s, a[1] / s, a[2] / s}; }

inline double absval(double v) { return std::abs(v); }
inline double absval(const cplx& v) { return std::abs(v); }
inline double absval(const Quaternion& v) { return v.norm(); }
inline double absval(const Vec3& v) { return norm3(v); }
inline double absval(const Vec2& v) { return std::hypot(v[0], v[1]); }
inline double absval(const CVec3& v) {
    return std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
}

// uniform rectangular grid with square cells
struct Domain {
    double x_min = -1, x_max = 1, y_min = -1, y_max = 1;
    int nx = 0, ny = 0;
    double h = 0;

    Domain() = default;
    Domain(double x0, double x1, double y0, double y1, int nx_, int ny_)
        : x_min(x0), x_max(x1), y_min(y0), y_max(y1), nx(nx_), ny(ny_) {
        if (nx < 5 || ny < 5) throw std::invalid_argument("Domain: need at least 5x5 points");
        double hx = (x_max - x_min) / (nx - 1);
        double hy = (y_max - y_min) / (ny - 1);
        if (std::abs(hx - hy) > 1e-12 * std::max(std::abs(hx), std::abs(hy)))
            throw std::invalid_argument("Domain: cells must be square (hx == hy)");
        h = hx;
    }

    static Domain with_spacing(double x0, double x1, double y0, double y1, double spacing) {
        int nx_ = static_cast<int>(std::lround((x1 - x0) / spacing)) + 1;
        int ny_ = static_cast<int>(std::lround((y1 - y0) / spacing)) + 1;
        if (std::abs((x0 + spacing * (nx_ - 1)) - x1) > 1e-9 * std::max(1.0, std::abs(x1)) ||
            std::abs((y0 + spacing * (ny_ - 1)) - y1) > 1e-9 * std::max(1.0, std::abs(y1)))
            throw std::invalid_argument("Domain: extent is not a multiple of the spacing");
        return Domain(x0, x1, y0, y1, nx_, ny_);
    }

    double x(int ix) const { return x_min + h * ix; }
    double y(int iy) const { return y_min + h * iy; }
    cplx z(int ix, int iy) const { return {x(ix), y(iy)}; }
    int base_ix() const { return nx / 2; }
    int base_iy() const { return ny / 2; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
    bool same_shape(const Domain& o) const { return nx == o.nx && ny == o.ny; }
};

template <class V>
struct Field {
    Domain dom;
    std::vector<V> values;

    Field() = default;
    explicit Field(const Domain& d) : dom(d), values(d.size(), V{}) {}

    V& at(int ix, int iy) { return values[static_cast<std::size_t>(iy) * dom.nx + ix]; }
    const V& at(int ix, int iy) const {
        return values[static_cast<std::size_t>(iy) * dom.nx + ix];
    }

    template <class F>
    static Field sample(const Domain& d, F&& f) {
        Field out(d);
        for (int iy = 0; iy < d.ny; ++iy)
            for (int ix = 0; ix < d.nx; ++ix) out.at(ix, iy) = f(d.z(ix, iy));
        return out;
    }

    template <class F>
    Field<std::invoke_result_t<F, V>> map(F&& f) const {
        Field<std::invoke_result_t<F, V>> out(dom);
        for (std::size_t i = 0; i < values.size(); ++i) out.values[i] = f(values[i]);
        return out;
    }
};

template <class A, class B, class F>
auto combine(const Field<A>& a, const Field<B>& b, F&& f)
    -> Field<std::invoke_result_t<F, A, B>> {
    if (!a.dom.same_shape(b.dom)) throw std::invalid_argument("combine: shape mismatch");
    Field<std::invoke_result_t<F, A, B>> out(a.dom);
    for (std::size_t i = 0; i < a.values.size(); ++i) out.values[i] = f(a.values[i], b.values[i]);
    return out;
}

namespace detail {

// 1D derivative along a line of samples; centered 2nd order inside,
// one-sided 2nd order at the ends; order==4 upgrades interior points.
template <class V, class Get>
V line_derivative(Get&& g, int i, int n, double h, int order) {
    if (order == 4 && i >= 2 && i <= n - 3) {
        return (g(i - 2) - 8.0 * g(i - 1) + 8.0 * g(i + 1) - g(i + 2)) * (1.0 / (12.0 * h));
    }
    if (i == 0) return (g(0) * -3.0 + g(1) * 4.0 - g(2)) * (1.0 / (2.0 * h));
    if (i == n - 1) return (g(n - 1) * 3.0 - g(n - 2) * 4.0 + g(n - 3)) * (1.0 / (2.0 * h));
    return (g(i + 1) - g(i - 1)) * (1.0 / (2.0 * h));
}

}  // namespace detail

template <class V>
Field<V> d_dx(const Field<V>& f, int order = 2) {
    if (f.dom.nx < 3) throw std::invalid_argument("d_dx: degenerate domain");
    Field<V> out(f.dom);
    for (int iy = 0; iy < f.dom.ny; ++iy)
        for (int ix = 0; ix < f.dom.nx; ++ix)
            out.at(ix, iy) = detail::line_derivative<V>(
                [&](int i) { return f.at(i, iy); }, ix, f.dom.nx, f.dom.h, order);
    return out;
}

template <class V>
Field<V> d_dy(const Field<V>& f, int order = 2) {
    if (f.dom.ny < 3) throw std::invalid_argument("d_dy: degenerate domain");
    Field<V> out(f.dom);
    for (int iy = 0; iy < f.dom.ny; ++iy)
        for (int ix = 0; ix < f.dom.nx; ++ix)
            out.at(ix, iy) = detail::line_derivative<V>(
                [&](int i) { return f.at(ix, i); }, iy, f.dom.ny, f.dom.h, order);
    return out;
}

// Wirtinger derivatives of complex fields
inline Field<cplx> d_dz(const Field<cplx>& f, int order = 2) {
    auto fx = d_dx(f, order), fy = d_dy(f, order);
    return combine(fx, fy, [](cplx a, cplx b) { return 0.5 * (a - cplx(0, 1) * b); });
}
inline Field<cplx> d_dzbar(const Field<cplx>& f, int order = 2) {
    auto fx = d_dx(f, order), fy = d_dy(f, order);
    return combine(fx, fy, [](cplx a, cplx b) { return 0.5 * (a + cplx(0, 1) * b); });
}

inline Field<CVec3> d_dz(const Field<CVec3>& f, int order = 2) {
    auto fx = d_dx(f, order), fy = d_dy(f, order);
    return combine(fx, fy, [](const CVec3& a, const CVec3& b) {
        CVec3 r;
        for (int k = 0; k < 3; ++k) r[k] = 0.5 * (a[k] - cplx(0, 1) * b[k]);
        return r;
    });
}

// quaternionic derivatives: dz on the right (f_x - f_y i)/2, slash variants with i on the left
inline Field<Quaternion> d_dz_right(const Field<Quaternion>& f, int order = 2) {
    auto fx = d_dx(f, order), fy = d_dy(f, order);
    return combine(fx, fy,
                   [](const Quaternion& a, const Quaternion& b) { return (a - b * Q_I) * 0.5; });
}
inline Field<Quaternion> d_dzbar_right(const Field<Quaternion>& f, int order = 2) {
    auto fx = d_dx(f, order), fy = d_dy(f, order);
    return combine(fx, fy,
                   [](const Quaternion& a, const Quaternion& b) { return (a + b * Q_I) * 0.5; });
}
inline Field<Quaternion> d_dz_left(const Field<Quaternion>& f, int order = 2) {
    auto fx = d_dx(f, order), fy = d_dy(f, order);
    return combine(fx, fy,
                   [](const Quaternion& a, const Quaternion& b) { return (a - Q_I * b) * 0.5; });
}
inline Field<Quaternion> d_dzbar_left(const Field<Quaternion>& f, int order = 2) {
    auto fx = d_dx(f, order), fy = d_dy(f, order);
    return combine(fx, fy,
                   [](const Quaternion& a, const Quaternion& b) { return (a + Q_I * b) * 0.5; });
}

struct ResidualReport {
    std::string name;
    double max_abs = 0;
    double mean_abs = 0;
    double interior_max = 0;
    double h = 0;
};

template <class V>
double interior_max_ring(const Field<V>& f, int ring) {
    double m = 0;
    for (int iy = ring; iy < f.dom.ny - ring; ++iy)
        for (int ix = ring; ix < f.dom.nx - ring; ++ix) m = std::max(m, absval(f.at(ix, iy)));
    return m;
}

template <class V>
ResidualReport report_from_field(const Field<V>& f, const std::string& name) {
    ResidualReport r;
    r.name = name;
    r.h = f.dom.h;
    double sum = 0;
    for (int iy = 0; iy < f.dom.ny; ++iy)
        for (int ix = 0; ix < f.dom.nx; ++ix) {
            double a = absval(f.at(ix, iy));
            sum += a;
            r.max_abs = std::max(r.max_abs, a);
            bool interior = ix > 0 && iy > 0 && ix < f.dom.nx - 1 && iy < f.dom.ny - 1;
            if (interior) r.interior_max = std::max(r.interior_max, a);
        }
    r.mean_abs = sum / static_cast<double>(f.dom.size());
    return r;
}

// residual of d(P dx + Q dy) = (dQ/dx - dP/dy) dx ^ dy
template <class V>
Field<V> closedness_field(const Field<V>& P, const Field<V>& Q) {
    if (!P.dom.same_shape(Q.dom)) throw std::invalid_argument("closedness: shape mismatch");
    auto qx = d_dx(Q);
    auto py = d_dy(P);
    return combine(qx, py, [](const V& a, const V& b) { return a - b; });
}

template <class V>
ResidualReport closedness_residual(const Field<V>& P, const Field<V>& Q,
                                   const std::string& name = "closedness") {
    return report_from_field(closedness_field(P, Q), name);
}

// trapezoidal path integration of P dx + Q dy from the base index, along the
// base row first and then up/down each column; F(base) = 0
template <class V>
Field<V> integrate_form(const Field<V>& P, const Field<V>& Q, int base_ix, int base_iy) {
    if (!P.dom.same_shape(Q.dom)) throw std::invalid_argument("integrate_form: shape mismatch");
    const Domain& d = P.dom;
    const double h = d.h;
    Field<V> F(d);
    for (int ix = base_ix + 1; ix < d.nx; ++ix)
        F.at(ix, base_iy) = F.at(ix - 1, base_iy) + (P.at(ix - 1, base_iy) + P.at(ix, base_iy)) * (h / 2);
    for (int ix = base_ix - 1; ix >= 0; --ix)
        F.at(ix, base_iy) = F.at(ix + 1, base_iy) - (P.at(ix + 1, base_iy) + P.at(ix, base_iy)) * (h / 2);
    for (int ix = 0; ix < d.nx; ++ix) {
        for (int iy = base_iy + 1; iy < d.ny; ++iy)
            F.at(ix, iy) = F.at(ix, iy - 1) + (Q.at(ix, iy - 1) + Q.at(ix, iy)) * (h / 2);
        for (int iy = base_iy - 1; iy >= 0; --iy)
            F.at(ix, iy) = F.at(ix, iy + 1) - (Q.at(ix, iy + 1) + Q.at(ix, iy)) * (h / 2);
    }
    return F;
}

// columns first, then along each row; used for path-independence diagnostics
template <class V>
Field<V> integrate_form_colfirst(const Field<V>& P, const Field<V>& Q, int base_ix, int base_iy) {
    const Domain& d = P.dom;
    const double h = d.h;
    Field<V> F(d);
    for (int iy = base_iy + 1; iy < d.ny; ++iy)
        F.at(base_ix, iy) = F.at(base_ix, iy - 1) + (Q.at(base_ix, iy - 1) + Q.at(base_ix, iy)) * (h / 2);
    for (int iy = base_iy - 1; iy >= 0; --iy)
        F.at(base_ix, iy) = F.at(base_ix, iy + 1) - (Q.at(base_ix, iy + 1) + Q.at(base_ix, iy)) * (h / 2);
    for (int iy = 0; iy < d.ny; ++iy) {
        for (int ix = base_ix + 1; ix < d.nx; ++ix)
            F.at(ix, iy) = F.at(ix - 1, iy) + (P.at(ix - 1, iy) + P.at(ix, iy)) * (h / 2);
        for (int ix = base_ix - 1; ix >= 0; --ix)
            F.at(ix, iy) = F.at(ix + 1, iy) - (P.at(ix + 1, iy) + P.at(ix, iy)) * (h / 2);
    }
    return F;
}

template <class V>
ResidualReport path_independence_residual(const Field<V>& P, const Field<V>& Q, int base_ix,
                                          int base_iy, const std::string& name = "path_independence") {
    auto a = integrate_form(P, Q, base_ix, base_iy);
    auto b = integrate_form_colfirst(P, Q, base_ix, base_iy);
    return report_from_field(combine(a, b, [](const V& u, const V& v) { return u - v; }), name);
}

}  // namespace spinrep
