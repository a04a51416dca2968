#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "weldfactor/errors.hpp"

namespace weldfactor {

using Complex = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

/// Point of the Riemann sphere: a finite complex coordinate or infinity.
class PlanePoint {
public:
    PlanePoint() : z_(0.0, 0.0), infinite_(false) {}
    PlanePoint(Complex z) : z_(z), infinite_(false) {}
    PlanePoint(double x, double y) : z_(x, y), infinite_(false) {}

    static PlanePoint infinity() {
        PlanePoint p;
        p.infinite_ = true;
        return p;
    }

    bool is_infinite() const { return infinite_; }
    bool is_finite() const { return !infinite_; }

    Complex value() const {
        if (infinite_) throw Error(ErrorCode::OutOfChart, "finite value of the point at infinity");
        return z_;
    }

private:
    Complex z_;
    bool infinite_;
};

/// Side of an oriented curve, relative to increasing parameter.
enum class CurveSide { Left, Right };

inline CurveSide opposite(CurveSide s) { return s == CurveSide::Left ? CurveSide::Right : CurveSide::Left; }

/// Closed analytic Jordan curve given by a truncated Fourier series
///   gamma(theta) = sum_{k=k_min}^{k_max} c_k e^{i k theta}.
/// The orientation flag records which side of the trace is the domain side.
class AnalyticCurve {
public:
    AnalyticCurve() : k_min_(0), coeffs_{Complex(0.0)}, domain_side_(CurveSide::Left) {}

    AnalyticCurve(int k_min, std::vector<Complex> coeffs, CurveSide domain_side = CurveSide::Left)
        : k_min_(k_min), coeffs_(std::move(coeffs)), domain_side_(domain_side) {
        if (coeffs_.empty()) throw Error(ErrorCode::EmptyList, "curve needs at least one coefficient");
    }

    /// Circle of radius r about c, counter-clockwise.
    static AnalyticCurve circle(Complex center, double radius, CurveSide domain_side = CurveSide::Left);

    int k_min() const { return k_min_; }
    int k_max() const { return k_min_ + static_cast<int>(coeffs_.size()) - 1; }
    /// Truncation order K = max(|k_min|, |k_max|).
    int order() const;
    CurveSide domain_side() const { return domain_side_; }
    const std::vector<Complex>& coeffs() const { return coeffs_; }
    Complex coeff(int k) const;

    Complex point(double theta) const;
    Complex derivative(double theta) const;
    Complex second_derivative(double theta) const;

    /// Max pairwise distance over the geometric sample set (cached on first use is
    /// avoided; recomputed, values are small).
    double diameter() const;

    /// Sampling density for geometric predicates: max(8K, 256).
    int geometric_samples() const;

    /// Curve with coefficient order reversed (c_k -> c_{-k}); traverses the same
    /// trace in the opposite direction.
    AnalyticCurve reversed() const;

    AnalyticCurve with_domain_side(CurveSide s) const {
        AnalyticCurve c(*this);
        c.domain_side_ = s;
        return c;
    }

    /// Distance from a finite point to the sampled trace.
    double trace_distance(Complex z) const;

    /// Nearest curve parameter to z, refined by Newton from the closest sample.
    double nearest_parameter(Complex z) const;

    /// Injectivity margin: min over non-adjacent sample pairs of |gamma_i - gamma_j|,
    /// negative if a segment crossing between non-adjacent segments is detected.
    double injectivity_margin() const;

    /// min |gamma'| over the geometric sample set.
    double derivative_margin() const;

    bool is_valid(std::string* why = nullptr) const;

private:
    int k_min_;
    std::vector<Complex> coeffs_;
    CurveSide domain_side_;
};

/// Winding number of the curve about a finite point off the trace.
/// Throws PointOnCurve / QuadratureAmbiguous.
int winding_number(const AnalyticCurve& curve, const PlanePoint& point);

/// Winding number value seen from the given side of the curve (probed just off
/// the trace). For a Jordan curve this is 0 on the unbounded side and +-1 on
/// the bounded side.
int side_winding(const AnalyticCurve& curve, CurveSide side);

/// True when the finite point lies on the curve's domain side.
bool on_domain_side(const AnalyticCurve& curve, Complex z);

Complex eval_curve(const AnalyticCurve& curve, double theta);

/// n-tuply connected domain: n boundary curves with pairwise disjoint
/// complementary components, plus a certified interior base point.
struct DomainSpec {
    std::vector<AnalyticCurve> curves;
    PlanePoint base_point;
};

struct ValidationCheck {
    std::string name;
    bool pass = false;
    double margin = 0.0;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool accepted() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

ValidationReport validate_domain(const DomainSpec& domain);

namespace detail {

/// Uniform angles theta_j = 2 pi j / m, j = 0..m-1.
std::vector<double> uniform_angles(int m);

/// Trapezoidal (uniform-node) Fourier projection of periodic samples onto
/// modes k = -order..order. values.size() nodes, uniform on [0, 2pi).
std::vector<Complex> fourier_project(const std::vector<Complex>& values, int order);

}  // namespace detail

}  // namespace weldfactor
