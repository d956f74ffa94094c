#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "spinrep/cli.hpp"

using spinrep::JobConfig;

namespace {

bool parse_domain(const std::string& s, JobConfig& cfg) {
    std::stringstream ss(s);
    std::string tok;
    double vals[4];
    for (double& v : vals) {
        if (!std::getline(ss, tok, ',')) return false;
        v = std::stod(tok);
    }
    cfg.x_min = vals[0];
    cfg.x_max = vals[1];
    cfg.y_min = vals[2];
    cfg.y_max = vals[3];
    cfg.domain_set = true;
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spinor representation toolkit"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);

    JobConfig cfg;
    std::string config_path, domain_str, pole_str;
    bool have_h = false;

    auto add_common = [&](CLI::App* sub) {
        sub->set_help_flag("--help", "print help");
        sub->add_option("--config", config_path, "JSON config file; flags override its fields");
        sub->add_option("--builtin", cfg.builtin, "builtin dataset name");
        sub->add_option("--in", cfg.csv_in, "input csv (spinor3, immersion, or kt)");
        sub->add_option("--psi1", cfg.exprs["psi1"], "expression for psi1 over z, zbar");
        sub->add_option("--psi2", cfg.exprs["psi2"], "expression for psi2");
        sub->add_option("--g", cfg.exprs["g"], "Weierstrass g expression");
        sub->add_option("--weier-h", cfg.exprs["h"], "Weierstrass h expression");
        sub->add_option("--s1", cfg.exprs["s1"], "KT s1 expression");
        sub->add_option("--s2", cfg.exprs["s2"], "KT s2 expression");
        sub->add_option("--t1", cfg.exprs["t1"], "KT t1 expression");
        sub->add_option("--t2", cfg.exprs["t2"], "KT t2 expression");
        sub->add_option("--ambient", cfg.ambient, "r3 | nil3 | r4");
        sub->add_option("--tau", cfg.tau, "bundle curvature for nil3");
        sub->add_option("--h", cfg.h, "grid spacing")->each([&](const std::string&) {
            have_h = true;
        });
        sub->add_option("--domain", domain_str, "x_min,x_max,y_min,y_max");
        sub->add_option("--tol-scale", cfg.tol_scale, "scales every residual threshold");
        sub->add_option("--obj", cfg.out_obj, "OBJ mesh output path");
        sub->add_option("--csv", cfg.out_csv, "CSV output path");
        sub->add_option("--report", cfg.out_report, "JSON report path (default: stdout)");
        sub->add_option("--projection", cfg.projection, "orthogonal | stereographic (r4 OBJ)");
        sub->add_option("--drop-axis", cfg.drop_axis, "coordinate dropped by the orthogonal projection");
        sub->add_option("--pole", pole_str, "stereographic pole, four comma-separated numbers");
        sub->add_flag("--timings", cfg.timings, "include wall-clock timings in the report");
    };

    CLI::App* gen = app.add_subcommand("gen", "generate an immersion from spinor data");
    CLI::App* verify = app.add_subcommand("verify", "run every applicable residual check");
    CLI::App* roundtrip = app.add_subcommand("roundtrip", "immersion -> spinor -> immersion");
    CLI::App* convert = app.add_subcommand("convert", "convert between data representations");
    CLI::App* exp = app.add_subcommand("export", "write OBJ / CSV for a dataset");
    for (CLI::App* sub : {gen, verify, roundtrip, convert, exp}) add_common(sub);
    convert->add_option("--to", cfg.convert_to, "spinor | weierstrass | gauge | kt");

    CLI11_PARSE(app, argc, argv);

    JobConfig base;
    if (!config_path.empty()) {
        try {
            base = spinrep::config_from_json_file(config_path);
        } catch (const std::exception& e) {
            std::cerr << "{\"error\": \"" << e.what() << "\"}\n";
            return 2;
        }
    }
    // flags override config fields
    JobConfig merged = base;
    merged.verb = app.get_subcommands().front()->get_name();
    if (!cfg.builtin.empty()) merged.builtin = cfg.builtin;
    if (!cfg.csv_in.empty()) merged.csv_in = cfg.csv_in;
    for (auto& [k, v] : cfg.exprs)
        if (!v.empty()) merged.exprs[k] = v;
    for (auto it = merged.exprs.begin(); it != merged.exprs.end();)
        it = it->second.empty() ? merged.exprs.erase(it) : std::next(it);
    if (!cfg.ambient.empty()) merged.ambient = cfg.ambient;
    if (cfg.tau != 0) merged.tau = cfg.tau;
    if (have_h) {
        merged.h = cfg.h;
        merged.domain_set = true;
        if (!base.domain_set && domain_str.empty()) {
            merged.x_min = cfg.x_min;
            merged.x_max = cfg.x_max;
            merged.y_min = cfg.y_min;
            merged.y_max = cfg.y_max;
        }
    }
    if (!domain_str.empty() && !parse_domain(domain_str, merged)) {
        std::cerr << "{\"error\": \"bad --domain, expected x_min,x_max,y_min,y_max\"}\n";
        return 2;
    }
    if (cfg.tol_scale != 1.0) merged.tol_scale = cfg.tol_scale;
    if (!cfg.out_obj.empty()) merged.out_obj = cfg.out_obj;
    if (!cfg.out_csv.empty()) merged.out_csv = cfg.out_csv;
    if (!cfg.out_report.empty()) merged.out_report = cfg.out_report;
    if (!cfg.convert_to.empty()) merged.convert_to = cfg.convert_to;
    if (cfg.projection != "orthogonal") merged.projection = cfg.projection;
    if (cfg.drop_axis != 3) merged.drop_axis = cfg.drop_axis;
    if (!pole_str.empty()) {
        std::stringstream ss(pole_str);
        std::string tok;
        for (double& v : merged.pole) {
            if (!std::getline(ss, tok, ',')) break;
            v = std::stod(tok);
        }
    }
    if (cfg.timings) merged.timings = true;

    return spinrep::run_job(merged);
}
