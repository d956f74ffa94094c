#pragma once

#include <map>
#include <string>

#include "spinrep/quaternion.hpp"

namespace spinrep {

struct JobConfig {
    std::string verb;          // gen | verify | roundtrip | convert | export
    std::string ambient = "";  // r3 | nil3 | r4 (defaults to the data source's)
    double tau = 0;            // required iff ambient is nil3
    bool domain_set = false;
    double x_min = -1, x_max = 1, y_min = -1, y_max = 1;
    double h = 0.01;
    std::string builtin;
    std::string csv_in;
    std::map<std::string, std::string> exprs;  // psi1, psi2, g, h, s1, s2, t1, t2
    std::string out_obj, out_csv, out_report;
    double tol_scale = 1.0;
    std::string convert_to;  // spinor | weierstrass | gauge | kt
    std::string projection = "orthogonal";
    int drop_axis = 3;
    Vec4 pole{0, 0, 0, 1};
    bool timings = false;
};

JobConfig config_from_json_file(const std::string& path);

// runs one job, writes the requested artifacts and the report;
// returns 0 iff every checked residual stayed below its threshold
int run_job(const JobConfig& cfg);

}  // namespace spinrep
