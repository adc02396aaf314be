#pragma once

#include <span>
#include <string>
#include <vector>

namespace biharm {

/// Square convolution template of odd size 2*radius+1.
///
/// Coefficients are addressed by integer offsets (p, q) in
/// [-radius, radius]^2, p along x (columns) and q along y (rows). `lx` and
/// `ly` are the grid increments the coefficients were generated for.
/// Instances are immutable once built.
class Stencil {
public:
    /// `coeffs` is row-major with q = -radius first and p ascending within
    /// each row. Throws std::invalid_argument on a wrong element count,
    /// non-finite coefficients or non-positive increments.
    Stencil(int radius, std::vector<double> coeffs, double lx = 1.0, double ly = 1.0);

    int radius() const noexcept { return radius_; }
    int extent() const noexcept { return 2 * radius_ + 1; }
    double lx() const noexcept { return lx_; }
    double ly() const noexcept { return ly_; }

    double operator()(int p, int q) const;
    double center() const noexcept { return (*this)(0, 0); }
    std::span<const double> coefficients() const noexcept { return coeffs_; }

    friend bool operator==(const Stencil&, const Stencil&) = default;

private:
    int radius_;
    std::vector<double> coeffs_;
    double lx_;
    double ly_;
};

/// One Taylor term x^u * y^v.
struct Monomial {
    int u = 0;
    int v = 0;

    int degree() const noexcept { return u + v; }
};

inline constexpr int kMaxMonomialDegree = 7;

/// Discrete biharmonic operator for grid increments (lx, ly).
///
/// Closed form, radius 2:
///   (+-2, 0) = 1/lx^4                      (0, +-2) = 1/ly^4
///   (+-1,+-1) = 2/(lx^2 ly^2)
///   (+-1, 0) = -4 (lx^2+ly^2)/(lx^4 ly^2)  (0, +-1) = -4 (lx^2+ly^2)/(lx^2 ly^4)
///   (0, 0)   = 2 (3 lx^4 + 3 ly^4 + 4 lx^2 ly^2)/(lx^4 ly^4)
/// and zero at the remaining twelve offsets. At lx = ly = 1 this is the
/// integer template with centre 20.
Stencil biharmonic_stencil(double lx, double ly);

/// 3x3 high-pass Laplacian: centre 8, all eight neighbours -1.
Stencil laplacian_baseline();

/// Stencil applied to x^u y^v and evaluated at the origin:
/// sum over (p, q) of coeff(p,q) * (p*lx)^u * (q*ly)^v.
/// Throws std::invalid_argument if the degree exceeds kMaxMonomialDegree.
double monomial_response(const Stencil& s, Monomial m);

/// Sum of |term| over the same terms as monomial_response; the natural
/// magnitude to scale a response residual by.
double monomial_response_scale(const Stencil& s, Monomial m);

struct MonomialResponse {
    Monomial monomial;
    double value = 0.0;
};

struct ValidationReport {
    double zero_sum_residual = 0.0;
    double max_symmetry_violation = 0.0;
    /// Every monomial of degree <= 4, ordered by degree then by u descending.
    std::vector<MonomialResponse> responses;
    double max_cubic_response = 0.0;
    bool passed = false;
};

inline constexpr double kStructuralTolerance = 1e-12;
inline constexpr double kCubicTolerance = 1e-10;

/// Passes iff |sum| and the worst mirror-symmetry violation are below
/// kStructuralTolerance and every response of degree <= 3 is below
/// kCubicTolerance in absolute value.
ValidationReport validate_stencil(const Stencil& s);

/// One line per q from +radius down to -radius, coefficients separated by
/// commas, each printed with 17 significant digits.
std::string stencil_to_csv(const Stencil& s);

/// Same row order as the CSV, whitespace-aligned for terminals.
std::string stencil_to_text(const Stencil& s);

}  // namespace biharm
