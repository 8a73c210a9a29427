#pragma once

#include <random>
#include <vector>

#include "tori/flows.hpp"

namespace tori::examples {

// g(y) = (1 + sin 2 pi y) / 2, the profile of the standard shear.
double shear_profile(double y);

TimeField translation(const Point& v, int dim = 2);
// X = (g(y), 0) with the standard profile.
TimeField standard_shear();
// X = (amp * sin(2 pi (y + phase)) + drift, 0).
TimeField x_shear(double amp, double phase = 0.0, double drift = 0.0);
// X = (0, amp * sin(2 pi (x + phase)) + drift).
TimeField y_shear(double amp, double phase = 0.0, double drift = 0.0);
// Hamiltonian field of H = cos(2 pi y) / (2 pi): X = (-sin 2 pi y, 0).
TimeField hamiltonian_shear(double scale = 1.0);
// H = amp sin(2 pi (x + px)) sin(2 pi (y + py)) / (2 pi).
TimeField hamiltonian_bump(double amp, double px = 0.0, double py = 0.0);
double hamiltonian_bump_value(double amp, double px, double py, const Point& x);
// Loop phi^h_{a sin(2 pi t)} for the bump Hamiltonian h; returns to the identity at t = 1.
TimeField hamiltonian_loop(double amp, double px = 0.0, double py = 0.0);
// Constant-in-space harmonic field cos(2 pi t) * c; its time integral vanishes.
TimeField harmonic_wiggle(const Point& c, int dim = 2);
// Translation (1, 0) plus a time-periodic Hamiltonian wiggle.
TimeField wiggle_loop(double amp);
// Not divergence free: X = (amp sin(2 pi x), 0).
TimeField compressible(double amp);
// Product shear on T^4: X = (g(y1), 0, h(y2), 0) with h = (1 + cos 2 pi y) / 4.
TimeField product_shear_t4();
TimeField hamiltonian_t4(double amp);
// Sum of two fields.
TimeField sum(const TimeField& a, const TimeField& b);
TimeField scaled(const TimeField& a, double s);

// Seeded conservative field on T^2: shears, translations and (unless `bumps` is false)
// Hamiltonian bumps, amplitude <= amp.
TimeField random_conservative(std::mt19937_64& rng, double amp = 0.5, bool bumps = true);

}  // namespace tori::examples
