#pragma once

#include <optional>

#include <nlohmann/json.hpp>

#include "sirf/model.hpp"

namespace sirf {

// Ready-made model families used throughout the tests and docs, named
// after the "kind" strings they use in model files.
//
// "example1" is the multistable family (n, k, f0): the threshold function
// plus a sinusoidal ripple between knots R*_i = i*(k-1)/(2nk), i=1..2n-1,
// producing 2n endemic equilibria that alternate saddle/stable.
// "example2" is the quadratic family f(R) = k*R^2 + 2k with a single
// endemic equilibrium and an unstable disease-free state.

struct Example1Params {
    int n = 1;                // half the number of endemic equilibria
    double k = 0.0;           // model parameter, > 1
    std::optional<double> f0; // f at R = 0, in (0, k); default k/2
};

/// Build the multistable model.  Throws SpecError for out-of-range
/// parameters and NumericError if the constructed curve fails its
/// dense-grid positivity self-check.
///
/// Piecewise definition (pole p = (k-1)/k, w = 2*n*pi*k/(k-1)):
///   [0, R*_1]          cubic Hermite from (0, f0) with slope 0 to the
///                      first knot, matching value and slope there (C^1)
///   [R*_1, R*_{2n-1}]  g(R) - sin(w*R), so f crosses g at every knot
///   [R*_{2n-1}, inf)   linear with the matching slope g'(R*_{2n-1}) + w;
///                      g blows up at the pole, giving one last stable
///                      crossing right of the last knot
Model example1_model(const Example1Params& p);

/// Quadratic rate f(R) = k*R^2 + 2k.  f(0) = 2k > k, so the disease-free
/// state is a saddle and a unique endemic equilibrium exists.
Model example2_model(double k);

/// Constant rate beta_tilde with parameter k.
Model constant_model(double beta_tilde, double k);

/// Build a model from a standalone scenario description:
///   {"kind":"example1","n":5,"k":5.0,"f0":2.5}
///   {"kind":"example2","k":5.0}
///   {"kind":"constant","beta_tilde":12.0,"k":4.0}
///   {"kind":"expr","text":"k*R^2 + 2*k","k":5.0}
Model scenario_model(const nlohmann::ordered_json& spec);

} // namespace sirf
