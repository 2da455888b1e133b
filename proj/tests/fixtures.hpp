#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "dimer/harnack/data.hpp"
#include "dimer/riemann/schottky.hpp"

namespace fixtures {

using dimer::cplx;
using dimer::riemann::Circle;

inline std::vector<Circle> genus1_centered(double r = 0.3) { return {Circle{0.0, r}}; }

inline std::vector<Circle> genus1_offset() { return {Circle{cplx(0.25, -0.1), 0.2}}; }

inline std::vector<Circle> genus2() {
    return {Circle{cplx(0.4, 0.1), 0.1}, Circle{cplx(-0.3, -0.35), 0.08}};
}

// Square lattice, n = 1, one oval, generic clustered angles.
inline dimer::harnack::HarnackData square_genus1() {
    using namespace dimer::harnack;
    HarnackData S;
    S.n = 1;
    S.circles = {Circle{cplx(0.15, -0.1), 0.25}};
    S.points = {{3.3, Family::Alpha, -1, 0}, {0.3, Family::Alpha, 1, 0},
                {4.6, Family::Beta, -1, 0},  {1.8, Family::Beta, 1, 0}};
    return S;
}

// Square lattice, n = 2, genus 0, generic angles.
inline dimer::harnack::HarnackData square_n2() {
    using namespace dimer::harnack;
    HarnackData S;
    S.n = 2;
    S.points = {{2.9, Family::Alpha, -1, 0}, {3.5, Family::Alpha, -1, 1}, {0.2, Family::Alpha, 1, 0},
                {5.9, Family::Alpha, 1, 1},  {4.3, Family::Beta, -1, 0},  {5.0, Family::Beta, -1, 1},
                {1.2, Family::Beta, 1, 0},   {2.0, Family::Beta, 1, 1}};
    return S;
}

// Genus-0 square data with random clustered angles, period n.
inline dimer::harnack::HarnackData random_square_genus0(int n, unsigned seed) {
    using namespace dimer::harnack;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    HarnackData S;
    S.n = n;
    const std::pair<Family, int> groups[4] = {{Family::Alpha, 1}, {Family::Beta, 1}, {Family::Alpha, -1}, {Family::Beta, -1}};
    for (int q = 0; q < 4; ++q)
        for (int i = 0; i < n; ++i)
            S.points.push_back({(q + u(rng)) * M_PI / 2, groups[q].first, groups[q].second, i});
    return S;
}

// Hexagonal base data (no cover) of genus 1.
inline dimer::harnack::HarnackData hexagon_genus1() {
    using namespace dimer::harnack;
    HarnackData S;
    S.lattice = Lattice::Hexagonal;
    S.circles = {Circle{cplx(0.1, 0.05), 0.3}};
    S.points = {{0.3, Family::Alpha, 0, 0}, {2.4, Family::Beta, 0, 0}, {4.4, Family::Gamma, 0, 0}};
    return S;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace fixtures
