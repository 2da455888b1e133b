#pragma once

#include <vector>

#include "dimer/harnack/differentials.hpp"

namespace dimer::harnack {

struct AdmissifyResult {
    HarnackData data;
    double residual = 0.0;       // |f_3(0)| after the solve
    double displacement = 0.0;   // max angle change, radians
    int iterations = 0;
};

// Value of f_3 at the branch point 0 of a ramified cover.
cplx f3_at_branch(const HarnackData& S, riemann::SeriesOptions opt = {});

// Finite-difference Jacobian of (Re f_3(0), Im f_3(0)) with respect to the
// minus angles (plus angles follow antipodally), 2 x 3n.
std::vector<std::vector<double>> admissibility_jacobian(const HarnackData& S, double h = 1e-6);

// Damped minimum-norm Newton on the minus angles until |f_3(0)| < tol.
// Steps that break clustering are halved.  Throws NoConvergence.
AdmissifyResult optimize_ramified_admissibility(const HarnackData& S, double tol = 1e-10, int max_iter = 50);

struct UnramifiedCheck {
    bool admissible = false;
    std::vector<double> zeros;                 // zeros of ell in [0, 2 pi)
    std::vector<std::pair<cplx, cplx>> pairs;  // (R, -R) on the central circle
    int sign_changes = 0;
};

// ell(theta) = int_theta^{theta + pi} f~_3 on the central circle, z = r e^{-i theta}.
double ell(const StandardDifferentials& d, double theta);
UnramifiedCheck check_unramified_admissibility(const HarnackData& S, int samples = 720);

}  // namespace dimer::harnack
