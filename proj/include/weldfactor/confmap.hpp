#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "weldfactor/curves.hpp"

namespace weldfactor {

class ConformalMap;

/// z -> (a z + b) / (c z + d), stored with ad - bc = 1.
struct MoebiusMap {
    Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

    MoebiusMap() = default;
    MoebiusMap(Complex a_, Complex b_, Complex c_, Complex d_);

    static MoebiusMap identity() { return MoebiusMap(); }
    static MoebiusMap affine(Complex scale, Complex shift) { return MoebiusMap(scale, shift, Complex(0.0), Complex(1.0)); }

    MoebiusMap inverse() const;
    PlanePoint apply(const PlanePoint& z) const;
    Complex derivative(Complex z) const;
};

/// f(zeta) = sum_{k>=0} a_k zeta^k on the closed unit disk.
struct PowerSeriesMap {
    std::vector<Complex> coeffs;  // a_0, a_1, ...

    PowerSeriesMap() : coeffs{Complex(0.0), Complex(1.0)} {}
    explicit PowerSeriesMap(std::vector<Complex> a) : coeffs(std::move(a)) {}

    Complex eval(Complex z) const;
    Complex derivative(Complex z) const;
    /// Boundary image f(e^{i theta}) as an AnalyticCurve (coefficients shared).
    AnalyticCurve boundary_curve(CurveSide domain_side = CurveSide::Left) const;
};

/// f(zeta) = lambda zeta + sum_{k<=0} c_k zeta^k on the closed exterior disk,
/// f(infinity) = infinity.
struct LaurentSeriesMap {
    Complex lambda{1.0};
    std::vector<Complex> coeffs;  // c_0, c_{-1}, ..., c_{-K}

    LaurentSeriesMap() : coeffs{Complex(0.0)} {}
    LaurentSeriesMap(Complex lam, std::vector<Complex> c) : lambda(lam), coeffs(std::move(c)) {}

    Complex coeff(int k) const {  // k <= 0
        int idx = -k;
        if (idx < 0 || idx >= static_cast<int>(coeffs.size())) return Complex(0.0);
        return coeffs[idx];
    }
    Complex eval(Complex z) const;
    Complex derivative(Complex z) const;
    AnalyticCurve boundary_curve(CurveSide domain_side = CurveSide::Left) const;
};

/// Ordered factors applied right-to-left; a factor may be marked inverted, in
/// which case its (closed-form or Newton) inverse is applied.
struct CompositeMap {
    struct Factor {
        std::shared_ptr<const ConformalMap> map;
        bool inverted = false;
    };
    std::vector<Factor> factors;
};

/// Monotone degree-1 circle map eta(theta) = theta + Re sum p_k e^{ik theta}.
class BoundaryCorrespondence {
public:
    BoundaryCorrespondence() : k_min_(0), periodic_{Complex(0.0)}, forward_(true) {}
    BoundaryCorrespondence(int k_min, std::vector<Complex> periodic, bool forward = true)
        : k_min_(k_min), periodic_(std::move(periodic)), forward_(forward) {
        if (periodic_.empty()) periodic_ = {Complex(0.0)};
    }

    static BoundaryCorrespondence identity() { return BoundaryCorrespondence(); }
    static BoundaryCorrespondence rotation(double alpha) {
        return BoundaryCorrespondence(0, {Complex(alpha, 0.0)});
    }
    /// Fit eta from samples eta(theta_j) = values[j] on uniform theta_j; values
    /// must already be a continuous monotone lift.
    static BoundaryCorrespondence from_samples(const std::vector<double>& values, int order);

    int k_min() const { return k_min_; }
    int k_max() const { return k_min_ + static_cast<int>(periodic_.size()) - 1; }
    int order() const { return std::max(std::abs(k_min()), std::abs(k_max())); }
    const std::vector<Complex>& periodic_coeffs() const { return periodic_; }
    bool forward() const { return forward_; }

    double eval(double theta) const;
    double derivative(double theta) const;
    /// Inverse of the monotone lift: theta with eval(theta) = y.
    double invert(double y) const;
    /// Monotonicity margin: min eta' over the sample grid.
    double monotonicity_margin() const;
    bool is_monotone() const { return monotonicity_margin() > 0.0; }

private:
    int k_min_;
    std::vector<Complex> periodic_;
    bool forward_;
};

/// Tagged union of evaluable conformal-map representations, with an optional
/// certified domain of conformality.
class ConformalMap {
public:
    using Rep = std::variant<MoebiusMap, PowerSeriesMap, LaurentSeriesMap, CompositeMap>;

    ConformalMap() : rep_(MoebiusMap::identity()) {}
    ConformalMap(MoebiusMap m) : rep_(std::move(m)) {}
    ConformalMap(PowerSeriesMap m) : rep_(std::move(m)) {}
    ConformalMap(LaurentSeriesMap m) : rep_(std::move(m)) {}
    ConformalMap(CompositeMap m) : rep_(std::move(m)) {}

    const Rep& rep() const { return rep_; }

    const std::optional<DomainSpec>& domain() const { return domain_; }
    ConformalMap with_domain(DomainSpec d) const {
        ConformalMap m(*this);
        m.domain_ = std::move(d);
        return m;
    }

    template <class T>
    const T* as() const {
        return std::get_if<T>(&rep_);
    }

private:
    Rep rep_;
    std::optional<DomainSpec> domain_;
};

PlanePoint eval_map(const ConformalMap& map, const PlanePoint& z);
Complex eval_map(const ConformalMap& map, Complex z);

/// Derivative of the map at a finite point (chain rule through composites;
/// inverted factors via 1/f'(f^{-1})).
Complex map_derivative(const ConformalMap& map, Complex z);

struct InvertOptions {
    double tol = 1e-12;   // relative to scale of w
    int max_iter = 50;
};

/// Damped-Newton inverse; Moebius is inverted in closed form.
PlanePoint invert_map(const ConformalMap& map, const PlanePoint& w, const PlanePoint& guess,
                      const InvertOptions& opts = {});

/// Composition g = factors[0] o factors[1] o ... (applied right-to-left).
/// Nested composites are flattened.
ConformalMap compose(const std::vector<ConformalMap>& factors);

/// Convenience: one inverted factor.
ConformalMap inverted(const ConformalMap& map);

/// Boundary correspondence eta with
///   eval_curve(target, eta(theta)) = eval_map(map, eval_curve(source, theta)).
BoundaryCorrespondence boundary_correspondence(const ConformalMap& map, const AnalyticCurve& source,
                                               const AnalyticCurve& target, int order = -1,
                                               double tol_rel = 1e-8);

struct InjectivityReport {
    bool pass = false;
    int probes = 0;
    int winding_failures = 0;
    double min_derivative = 0.0;
    double worst_winding_defect = 0.0;  // |total winding - 1| over probes
    std::string detail;
};

/// Argument-principle injectivity check of the map on the domain: the total
/// winding of the mapped boundary about each probe image equals 1, and the
/// derivative is bounded away from zero on interior samples.
InjectivityReport verify_injective(const ConformalMap& map, const DomainSpec& domain);

/// Interior sample points of a domain (rejection sampling on the winding
/// signature); deterministic in the domain.
std::vector<Complex> interior_samples(const DomainSpec& domain, int count);

}  // namespace weldfactor
