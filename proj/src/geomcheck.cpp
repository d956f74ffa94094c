#include "spinrep/geomcheck.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace spinrep {

namespace {

// left-invariant frame components of a coordinate vector w at the point p:
// beta^1 = w1, beta^2 = w2, beta^3 = w3 - tau (p1 w2 - p2 w1)
Vec3 nil3_frame_components(const Vec3& p, const Vec3& w, double tau) {
    return {w[0], w[1], w[2] - tau * (p[0] * w[1] - p[1] * w[0])};
}

}  // namespace

std::pair<Field<Vec3>, Field<Vec3>> tangent_fields3(const Immersion& f) {
    if (f.ambient == Ambient::R4) throw std::invalid_argument("tangent_fields3: R4 immersion");
    if (f.has_exact_derivs) return {f.fx3, f.fy3};
    Field<Vec3> fx = d_dx(f.p3), fy = d_dy(f.p3);
    if (f.ambient == Ambient::Nil3) {
        for (int iy = 0; iy < f.dom.ny; ++iy)
            for (int ix = 0; ix < f.dom.nx; ++ix) {
                const Vec3& p = f.p3.at(ix, iy);
                fx.at(ix, iy) = nil3_frame_components(p, fx.at(ix, iy), f.tau);
                fy.at(ix, iy) = nil3_frame_components(p, fy.at(ix, iy), f.tau);
            }
    }
    return {fx, fy};
}

std::pair<Field<Quaternion>, Field<Quaternion>> tangent_fields4(const Immersion& f) {
    if (f.ambient != Ambient::R4) throw std::invalid_argument("tangent_fields4: not an R4 immersion");
    if (f.has_exact_derivs) return {f.fx4, f.fy4};
    return {d_dx(f.p4), d_dy(f.p4)};
}

FirstForm first_form(const Immersion& f) {
    FirstForm out;
    out.E = Field<double>(f.dom);
    out.F = Field<double>(f.dom);
    out.G = Field<double>(f.dom);
    Field<double> conf(f.dom);
    auto fill = [&](auto&& dot_at) {
        for (int iy = 0; iy < f.dom.ny; ++iy)
            for (int ix = 0; ix < f.dom.nx; ++ix) {
                auto [E, F, G] = dot_at(ix, iy);
                if (!(std::max(E, G) > 0))
                    throw std::invalid_argument("first_form: degenerate metric");
                out.E.at(ix, iy) = E;
                out.F.at(ix, iy) = F;
                out.G.at(ix, iy) = G;
                conf.at(ix, iy) = std::max(std::abs(E - G), std::abs(F)) / std::max(E, G);
            }
    };
    if (f.ambient == Ambient::R4) {
        auto [fx, fy] = tangent_fields4(f);
        fill([&](int ix, int iy) {
            const Quaternion &a = fx.at(ix, iy), &b = fy.at(ix, iy);
            return std::array<double, 3>{a.norm2(), dot(a, b), b.norm2()};
        });
    } else {
        auto [fx, fy] = tangent_fields3(f);
        fill([&](int ix, int iy) {
            const Vec3 &a = fx.at(ix, iy), &b = fy.at(ix, iy);
            return std::array<double, 3>{dot3(a, a), dot3(a, b), dot3(b, b)};
        });
    }
    out.conformality = report_from_field(conf, "conformality");
    return out;
}

CurvatureR3 mean_curvature_r3(const Immersion& f) {
    if (f.ambient != Ambient::R3)
        throw std::invalid_argument("mean_curvature_r3: expects a euclidean R3 immersion");
    auto [fx, fy] = tangent_fields3(f);
    CurvatureR3 out;
    out.H = Field<double>(f.dom);
    out.nu = Field<Vec3>(f.dom);
    out.h11 = Field<double>(f.dom);
    out.h12 = Field<double>(f.dom);
    out.h22 = Field<double>(f.dom);
    out.rho = Field<double>(f.dom);

    for (int iy = 0; iy < f.dom.ny; ++iy)
        for (int ix = 0; ix < f.dom.nx; ++ix) {
            Vec3 n = cross3(fx.at(ix, iy), fy.at(ix, iy));
            double nn = norm3(n);
            if (!(nn > 0)) throw std::invalid_argument("mean_curvature_r3: degenerate frame");
            out.nu.at(ix, iy) = scale3(n, 1.0 / nn);
            out.rho.at(ix, iy) = std::log(norm3(fx.at(ix, iy)));
        }

    // second fundamental form from derivatives of the tangent fields
    auto fxx = d_dx(fx);
    auto fyy = d_dy(fy);
    auto fxy = combine(d_dy(fx), d_dx(fy),
                       [](const Vec3& a, const Vec3& b) { return (a + b) * 0.5; });
    for (int iy = 0; iy < f.dom.ny; ++iy)
        for (int ix = 0; ix < f.dom.nx; ++ix) {
            const Vec3& n = out.nu.at(ix, iy);
            double e2r = std::exp(2.0 * out.rho.at(ix, iy));
            double h11 = dot3(fxx.at(ix, iy), n) / e2r;
            double h12 = dot3(fxy.at(ix, iy), n) / e2r;
            double h22 = dot3(fyy.at(ix, iy), n) / e2r;
            out.h11.at(ix, iy) = h11;
            out.h12.at(ix, iy) = h12;
            out.h22.at(ix, iy) = h22;
            out.H.at(ix, iy) = 0.5 * (h11 + h22);
        }
    return out;
}

CurvatureR4 mean_curvature_r4(const Immersion& f, const Field<Quaternion>& e3,
                              const Field<Quaternion>& e4) {
    if (f.ambient != Ambient::R4) throw std::invalid_argument("mean_curvature_r4: not R4");
    for (int iy = 0; iy < f.dom.ny; ++iy)
        for (int ix = 0; ix < f.dom.nx; ++ix) {
            if (std::abs(e3.at(ix, iy).norm() - 1) > 1e-8 ||
                std::abs(e4.at(ix, iy).norm() - 1) > 1e-8 ||
                std::abs(dot(e3.at(ix, iy), e4.at(ix, iy))) > 1e-8)
                throw std::invalid_argument("mean_curvature_r4: normal frame not orthonormal");
        }
    auto [fx, fy] = tangent_fields4(f);
    CurvatureR4 out;
    out.H3 = Field<double>(f.dom);
    out.H4 = Field<double>(f.dom);
    out.cx = Field<double>(f.dom);
    out.cy = Field<double>(f.dom);
    out.rho = Field<double>(f.dom);

    auto fxx = d_dx(fx);
    auto fyy = d_dy(fy);
    auto e3x = d_dx(e3), e3y = d_dy(e3);
    for (int iy = 0; iy < f.dom.ny; ++iy)
        for (int ix = 0; ix < f.dom.nx; ++ix) {
            double e2r = fx.at(ix, iy).norm2();
            if (!(e2r > 0)) throw std::invalid_argument("mean_curvature_r4: degenerate frame");
            out.rho.at(ix, iy) = 0.5 * std::log(e2r);
            Quaternion lap = fxx.at(ix, iy) + fyy.at(ix, iy);
            out.H3.at(ix, iy) = 0.5 * dot(lap, e3.at(ix, iy)) / e2r;
            out.H4.at(ix, iy) = 0.5 * dot(lap, e4.at(ix, iy)) / e2r;
            out.cx.at(ix, iy) = dot(e3x.at(ix, iy), e4.at(ix, iy));
            out.cy.at(ix, iy) = dot(e3y.at(ix, iy), e4.at(ix, iy));
        }
    return out;
}

namespace {

CongruenceResult procrustes(const std::vector<Vec4>& ps, const std::vector<Vec4>& qs, int dim) {
    using Eigen::MatrixXd;
    using Eigen::VectorXd;
    const std::size_t n = ps.size();
    VectorXd pc = VectorXd::Zero(dim), qc = VectorXd::Zero(dim);
    for (std::size_t i = 0; i < n; ++i)
        for (int d = 0; d < dim; ++d) {
            pc[d] += ps[i][d];
            qc[d] += qs[i][d];
        }
    pc /= double(n);
    qc /= double(n);
    MatrixXd H = MatrixXd::Zero(dim, dim);
    for (std::size_t i = 0; i < n; ++i) {
        VectorXd a(dim), b(dim);
        for (int d = 0; d < dim; ++d) {
            a[d] = ps[i][d] - pc[d];
            b[d] = qs[i][d] - qc[d];
        }
        H += a * b.transpose();
    }
    Eigen::JacobiSVD<MatrixXd> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
    MatrixXd U = svd.matrixU(), V = svd.matrixV();
    MatrixXd Rfree = V * U.transpose();
    CongruenceResult res;
    res.reflection_preferred = Rfree.determinant() < 0;
    MatrixXd D = MatrixXd::Identity(dim, dim);
    if (res.reflection_preferred) D(dim - 1, dim - 1) = -1;
    MatrixXd R = V * D * U.transpose();  // proper rotation always
    VectorXd t = qc - R * pc;

    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        VectorXd a(dim), b(dim);
        for (int d = 0; d < dim; ++d) {
            a[d] = ps[i][d];
            b[d] = qs[i][d];
        }
        ss += (R * a + t - b).squaredNorm();
    }
    res.rms = std::sqrt(ss / double(n));
    for (int i = 0; i < dim; ++i) {
        res.t[i] = t[i];
        for (int j = 0; j < dim; ++j) res.R[i][j] = R(i, j);
    }
    if (dim == 3) res.R[3][3] = 1;
    return res;
}

}  // namespace

CongruenceResult congruence(const Immersion& f, const Immersion& g) {
    if (f.ambient != g.ambient || f.ambient == Ambient::Nil3)
        throw std::invalid_argument("congruence: needs two euclidean immersions of the same kind");
    if (!f.dom.same_shape(g.dom)) throw std::invalid_argument("congruence: domain mismatch");
    std::vector<Vec4> ps, qs;
    ps.reserve(f.dom.size());
    qs.reserve(f.dom.size());
    int dim = f.ambient == Ambient::R4 ? 4 : 3;
    for (int iy = 0; iy < f.dom.ny; ++iy)
        for (int ix = 0; ix < f.dom.nx; ++ix) {
            if (dim == 3) {
                const Vec3 &p = f.p3.at(ix, iy), &q = g.p3.at(ix, iy);
                ps.push_back({p[0], p[1], p[2], 0});
                qs.push_back({q[0], q[1], q[2], 0});
            } else {
                ps.push_back(f.p4.at(ix, iy).real4());
                qs.push_back(g.p4.at(ix, iy).real4());
            }
        }
    return procrustes(ps, qs, dim);
}

}  // namespace spinrep
