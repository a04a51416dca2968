#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "weldfactor/factorize.hpp"

namespace weldfactor {

struct FixtureSpec {
    int n = 2;
    std::uint64_t seed = 1;
    double hole_radius = 0.6;        // base hole radius
    double radius_jitter = 0.15;     // relative spread of radii
    double perturbation = 0.04;      // relative amplitude of extra harmonics
    double pole_strength = 0.12;     // |c| = strength * R^2 for z + c/(z - p)
    double reparam_amplitude = 0.2;  // boundary reparametrisation strength
    int order = 64;                  // Fourier order of emitted curves
    int interior_count = 200;
};

struct Fixture {
    FactorizationProblem problem;
    ConformalMap truth;                   // G as an evaluable composition
    std::vector<int> label_permutation;   // expected match_components output on shuffled_targets()
    std::string log;

    /// Target curves in shuffled order (per label_permutation), as a domain.
    DomainSpec shuffled_targets() const;

    /// Target curves in problem order, as a domain.
    DomainSpec targets() const;

private:
    friend Fixture make_fixture(const FixtureSpec&);
    PlanePoint target_base_;
};

/// Deterministic synthetic factorisation problem with known ground truth:
/// N perturbed-circle holes, G a composition of an affine map and one pole
/// perturbation per hole, each block certified injective on its region
/// (strength halved up to 6 times on failure).
Fixture make_fixture(const FixtureSpec& spec);

/// Curve traced by the unit circle under the given series together with the
/// generating map, which is the exact Riemann map of the relevant side.
/// k_min >= 0: power map (interior); k_min < 0: Laurent map (exterior, must
/// include the k = 1 term). Coefficients must satisfy the documented
/// injectivity bound sum_{k != 1} |k| |c_k| < |c_1|.
std::pair<AnalyticCurve, ConformalMap> exact_polynomial_curve(int k_min,
                                                              const std::vector<Complex>& coeffs);

}  // namespace weldfactor
