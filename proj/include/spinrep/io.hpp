#pragma once

#include <string>
#include <vector>

#include "spinrep/dirac3.hpp"
#include "spinrep/dirac4.hpp"
#include "spinrep/geomcheck.hpp"

namespace spinrep {

void write_spinor3_csv(const std::string& path, const SpinorField3& sf, Ambient ambient,
                       double tau);
struct SpinorCsv {
    SpinorField3 sf;
    Ambient ambient;
    double tau;
};
SpinorCsv read_spinor3_csv(const std::string& path);

void write_immersion_csv(const std::string& path, const Immersion& f);
Immersion read_immersion_csv(const std::string& path);

void write_kt_csv(const std::string& path, const KTData& kt);
KTData read_kt_csv(const std::string& path);

void write_field_csv(const std::string& path, const Field<cplx>& f, const std::string& name);

void write_residuals_csv(const std::string& path, const std::vector<ResidualReport>& reports);

// orthogonal projection drops one coordinate; stereographic projects from a
// pole direction (meaningful for data on the unit 3-sphere)
struct R4Projection {
    enum class Kind { Orthogonal, Stereographic } kind = Kind::Orthogonal;
    int drop_axis = 3;
    Vec4 pole{0, 0, 0, 1};
};

void write_obj(const std::string& path, const Immersion& f, const R4Projection& proj = {});

}  // namespace spinrep
