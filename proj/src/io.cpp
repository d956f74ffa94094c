#include "spinrep/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spinrep {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* ambient_name(Ambient a) {
    switch (a) {
        case Ambient::R3: return "r3";
        case Ambient::Nil3: return "nil3";
        case Ambient::R4: return "r4";
    }
    return "r3";
}

Ambient ambient_from(const std::string& s) {
    if (s == "r3") return Ambient::R3;
    if (s == "nil3") return Ambient::Nil3;
    if (s == "r4") return Ambient::R4;
    throw std::invalid_argument("unknown ambient tag: " + s);
}

struct CsvHeader {
    std::string kind;
    Ambient ambient;
    double tau;
    Domain dom;
};

void write_header(std::ofstream& out, const std::string& kind, Ambient ambient, double tau,
                  const Domain& d) {
    out << "# spinrep csv v1," << kind << "," << ambient_name(ambient) << "," << fmt(tau) << ","
        << fmt(d.x_min) << "," << fmt(d.x_max) << "," << fmt(d.y_min) << "," << fmt(d.y_max) << ","
        << d.nx << "," << d.ny << "\n";
}

CsvHeader read_header(std::ifstream& in, const std::string& path) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("# spinrep csv v1,", 0) != 0)
        throw std::runtime_error(path + ": not a spinrep csv file");
    std::stringstream ss(line.substr(std::strlen("# spinrep csv v1,")));
    std::string kind, amb, tau, x0, x1, y0, y1, nx, ny;
    for (std::string* f : {&kind, &amb, &tau, &x0, &x1, &y0, &y1, &nx, &ny})
        if (!std::getline(ss, *f, ',')) throw std::runtime_error(path + ": bad csv header");
    CsvHeader h;
    h.kind = kind;
    h.ambient = ambient_from(amb);
    h.tau = std::stod(tau);
    h.dom = Domain(std::stod(x0), std::stod(x1), std::stod(y0), std::stod(y1), std::stoi(nx),
                   std::stoi(ny));
    return h;
}

std::vector<double> split_row(const std::string& line) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return in;
}

}  // namespace

void write_spinor3_csv(const std::string& path, const SpinorField3& sf, Ambient ambient,
                       double tau) {
    std::ofstream out = open_out(path);
    write_header(out, "spinor3", ambient, tau, sf.psi1.dom);
    out << "ix,iy,re_psi1,im_psi1,re_psi2,im_psi2\n";
    for (int iy = 0; iy < sf.psi1.dom.ny; ++iy)
        for (int ix = 0; ix < sf.psi1.dom.nx; ++ix) {
            cplx p1 = sf.psi1.at(ix, iy), p2 = sf.psi2.at(ix, iy);
            out << ix << "," << iy << "," << fmt(p1.real()) << "," << fmt(p1.imag()) << ","
                << fmt(p2.real()) << "," << fmt(p2.imag()) << "\n";
        }
}

SpinorCsv read_spinor3_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    CsvHeader h = read_header(in, path);
    if (h.kind != "spinor3") throw std::runtime_error(path + ": expected a spinor3 csv");
    std::string line;
    std::getline(in, line);  // column names
    SpinorCsv out{{Field<cplx>(h.dom), Field<cplx>(h.dom)}, h.ambient, h.tau};
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto row = split_row(line);
        if (row.size() != 6) throw std::runtime_error(path + ": bad spinor3 row");
        int ix = static_cast<int>(row[0]), iy = static_cast<int>(row[1]);
        out.sf.psi1.at(ix, iy) = {row[2], row[3]};
        out.sf.psi2.at(ix, iy) = {row[4], row[5]};
    }
    return out;
}

void write_immersion_csv(const std::string& path, const Immersion& f) {
    std::ofstream out = open_out(path);
    write_header(out, "immersion", f.ambient, f.tau, f.dom);
    if (f.ambient == Ambient::R4) {
        out << "ix,iy,x,y,p1,p2,p3,p4\n";
        for (int iy = 0; iy < f.dom.ny; ++iy)
            for (int ix = 0; ix < f.dom.nx; ++ix) {
                Vec4 p = f.p4.at(ix, iy).real4();
                out << ix << "," << iy << "," << fmt(f.dom.x(ix)) << "," << fmt(f.dom.y(iy));
                for (double c : p) out << "," << fmt(c);
                out << "\n";
            }
    } else {
        out << "ix,iy,x,y,p1,p2,p3\n";
        for (int iy = 0; iy < f.dom.ny; ++iy)
            for (int ix = 0; ix < f.dom.nx; ++ix) {
                const Vec3& p = f.p3.at(ix, iy);
                out << ix << "," << iy << "," << fmt(f.dom.x(ix)) << "," << fmt(f.dom.y(iy)) << ","
                    << fmt(p[0]) << "," << fmt(p[1]) << "," << fmt(p[2]) << "\n";
            }
    }
}

Immersion read_immersion_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    CsvHeader h = read_header(in, path);
    if (h.kind != "immersion") throw std::runtime_error(path + ": expected an immersion csv");
    std::string line;
    std::getline(in, line);
    Immersion f;
    f.ambient = h.ambient;
    f.tau = h.tau;
    f.dom = h.dom;
    if (h.ambient == Ambient::R4) f.p4 = Field<Quaternion>(h.dom);
    else f.p3 = Field<Vec3>(h.dom);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto row = split_row(line);
        int ix = static_cast<int>(row[0]), iy = static_cast<int>(row[1]);
        if (h.ambient == Ambient::R4) {
            if (row.size() != 8) throw std::runtime_error(path + ": bad immersion row");
            f.p4.at(ix, iy) = {row[4], row[5], row[6], row[7]};
        } else {
            if (row.size() != 7) throw std::runtime_error(path + ": bad immersion row");
            f.p3.at(ix, iy) = {row[4], row[5], row[6]};
        }
    }
    return f;
}

void write_kt_csv(const std::string& path, const KTData& kt) {
    std::ofstream out = open_out(path);
    write_header(out, "kt", Ambient::R4, 0.0, kt.s1.dom);
    out << "ix,iy,re_s1,im_s1,re_s2,im_s2,re_t1,im_t1,re_t2,im_t2\n";
    for (int iy = 0; iy < kt.s1.dom.ny; ++iy)
        for (int ix = 0; ix < kt.s1.dom.nx; ++ix) {
            out << ix << "," << iy;
            for (cplx v : {kt.s1.at(ix, iy), kt.s2.at(ix, iy), kt.t1.at(ix, iy), kt.t2.at(ix, iy)})
                out << "," << fmt(v.real()) << "," << fmt(v.imag());
            out << "\n";
        }
}

KTData read_kt_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    CsvHeader h = read_header(in, path);
    if (h.kind != "kt") throw std::runtime_error(path + ": expected a kt csv");
    std::string line;
    std::getline(in, line);
    KTData kt;
    kt.s1 = Field<cplx>(h.dom);
    kt.s2 = Field<cplx>(h.dom);
    kt.t1 = Field<cplx>(h.dom);
    kt.t2 = Field<cplx>(h.dom);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto row = split_row(line);
        if (row.size() != 10) throw std::runtime_error(path + ": bad kt row");
        int ix = static_cast<int>(row[0]), iy = static_cast<int>(row[1]);
        kt.s1.at(ix, iy) = {row[2], row[3]};
        kt.s2.at(ix, iy) = {row[4], row[5]};
        kt.t1.at(ix, iy) = {row[6], row[7]};
        kt.t2.at(ix, iy) = {row[8], row[9]};
    }
    return kt;
}

void write_field_csv(const std::string& path, const Field<cplx>& f, const std::string& name) {
    std::ofstream out = open_out(path);
    write_header(out, "field:" + name, Ambient::R3, 0.0, f.dom);
    out << "ix,iy,x,y,re,im\n";
    for (int iy = 0; iy < f.dom.ny; ++iy)
        for (int ix = 0; ix < f.dom.nx; ++ix)
            out << ix << "," << iy << "," << fmt(f.dom.x(ix)) << "," << fmt(f.dom.y(iy)) << ","
                << fmt(f.at(ix, iy).real()) << "," << fmt(f.at(ix, iy).imag()) << "\n";
}

void write_residuals_csv(const std::string& path, const std::vector<ResidualReport>& reports) {
    std::ofstream out = open_out(path);
    out << "name,max_abs,mean_abs,interior_max,h\n";
    for (const auto& r : reports)
        out << r.name << "," << fmt(r.max_abs) << "," << fmt(r.mean_abs) << ","
            << fmt(r.interior_max) << "," << fmt(r.h) << "\n";
}

namespace {

Vec3 project_point(const Quaternion& q, const R4Projection& proj) {
    Vec4 p = q.real4();
    if (proj.kind == R4Projection::Kind::Orthogonal) {
        Vec3 out;
        int k = 0;
        for (int i = 0; i < 4; ++i)
            if (i != proj.drop_axis) out[k++] = p[i];
        return out;
    }
    // stereographic from the pole direction: coordinates in the pole's complement
    double pn = std::sqrt(proj.pole[0] * proj.pole[0] + proj.pole[1] * proj.pole[1] +
                          proj.pole[2] * proj.pole[2] + proj.pole[3] * proj.pole[3]);
    Vec4 n{proj.pole[0] / pn, proj.pole[1] / pn, proj.pole[2] / pn, proj.pole[3] / pn};
    double dp = p[0] * n[0] + p[1] * n[1] + p[2] * n[2] + p[3] * n[3];
    double denom = 1.0 - dp;
    if (std::abs(denom) < 1e-12) denom = denom < 0 ? -1e-12 : 1e-12;
    Vec4 t{p[0] - dp * n[0], p[1] - dp * n[1], p[2] - dp * n[2], p[3] - dp * n[3]};
    // basis of the complement: coordinate axes with the largest pole component removed
    int drop = 0;
    for (int i = 1; i < 4; ++i)
        if (std::abs(n[i]) > std::abs(n[drop])) drop = i;
    Vec3 out;
    int k = 0;
    for (int i = 0; i < 4; ++i)
        if (i != drop) out[k++] = t[i] / denom;
    return out;
}

}  // namespace

void write_obj(const std::string& path, const Immersion& f, const R4Projection& proj) {
    std::ofstream out = open_out(path);
    out << "# spinrep obj export, grid " << f.dom.nx << "x" << f.dom.ny << "\n";
    if (f.ambient == Ambient::Nil3)
        out << "# nil3 coordinates (x1, x2, x3); the ambient metric is the left-invariant one, "
               "tau = "
            << fmt(f.tau) << "\n";
    if (f.ambient == Ambient::R4)
        out << "# projected from R4 ("
            << (proj.kind == R4Projection::Kind::Orthogonal ? "orthogonal" : "stereographic")
            << ")\n";
    for (int iy = 0; iy < f.dom.ny; ++iy)
        for (int ix = 0; ix < f.dom.nx; ++ix) {
            Vec3 p = f.ambient == Ambient::R4 ? project_point(f.p4.at(ix, iy), proj)
                                              : f.p3.at(ix, iy);
            out << "v " << fmt(p[0]) << " " << fmt(p[1]) << " " << fmt(p[2]) << "\n";
        }
    auto vid = [&](int ix, int iy) { return iy * f.dom.nx + ix + 1; };
    for (int iy = 0; iy + 1 < f.dom.ny; ++iy)
        for (int ix = 0; ix + 1 < f.dom.nx; ++ix) {
            out << "f " << vid(ix, iy) << " " << vid(ix + 1, iy) << " " << vid(ix + 1, iy + 1)
                << "\n";
            out << "f " << vid(ix, iy) << " " << vid(ix + 1, iy + 1) << " " << vid(ix, iy + 1)
                << "\n";
        }
}

}  // namespace spinrep
