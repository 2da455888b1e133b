#pragma once

#include <functional>
#include <vector>

#include "dimer/riemann/schottky.hpp"

namespace dimer::riemann {

// Adaptive Gauss-Legendre integral of f(z) dz along a polyline; each segment
// is bisected until the 15-point rule agrees with its two halves.
cplx integrate_adaptive(const std::function<cplx(cplx)>& f, const std::vector<cplx>& pts, double tol = 1e-11);

// Polyline from a to b in the circle domain, detouring around holes at
// distance margin from their boundary.
std::vector<cplx> route(const SchottkyGroup& group, cplx a, cplx b, double margin = -1.0);

}  // namespace dimer::riemann
