#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spinrep/dirac3.hpp"
#include "spinrep/dirac4.hpp"
#include "spinrep/nil3.hpp"

namespace spinrep {

// A named example dataset. Depending on the example it provides spinor data,
// an analytic immersion (with exact derivatives), KT data, or a combination.
struct Dataset {
    std::string name;
    Ambient ambient = Ambient::R3;
    double tau = 0;
    Domain dom;
    std::optional<SpinorField3> spinor;
    std::optional<WeierstrassData> weierstrass;
    std::optional<Immersion> immersion;
    std::optional<KTData> kt;
    std::optional<Nil3Generated> generated;
};

std::vector<std::string> builtin_names();

// h <= 0 picks the example's default spacing; tau <= 0 the example's default tau
Dataset make_builtin(const std::string& name, double h = 0, double tau = 0);

// analytic unit sphere (inverse stereographic projection) with exact derivatives
Immersion sphere_immersion(const Domain& dom);
SpinorField3 sphere_spinor(const Domain& dom);

}  // namespace spinrep
