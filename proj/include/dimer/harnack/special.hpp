#pragma once

#include "dimer/error.hpp"

namespace dimer::harnack {

// Euler dilogarithm, principal branch (cut [1, inf)).
cplx dilog(cplx z);
// Bloch-Wigner function Im Li2(z) + arg(1 - z) log|z|, zero at 0 and 1.
double bloch_wigner(cplx z);
// Lobachevsky function -int_0^theta log|2 sin t| dt.
double lobachevsky(double theta);

}  // namespace dimer::harnack
