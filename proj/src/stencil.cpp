#include "biharm/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace biharm {

namespace {

double ipow(double base, int exponent) {
    double result = 1.0;
    for (int k = 0; k < exponent; ++k) result *= base;
    return result;
}

void check_increment(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw std::invalid_argument(std::string("grid increment ") + name +
                                    " must be positive and finite");
}

}  // namespace

Stencil::Stencil(int radius, std::vector<double> coeffs, double lx, double ly)
    : radius_(radius), coeffs_(std::move(coeffs)), lx_(lx), ly_(ly) {
    if (radius < 0) throw std::invalid_argument("stencil radius must be non-negative");
    const auto n = static_cast<std::size_t>(extent());
    if (coeffs_.size() != n * n)
        throw std::invalid_argument("stencil of radius " + std::to_string(radius) + " needs " +
                                    std::to_string(n * n) + " coefficients, got " +
                                    std::to_string(coeffs_.size()));
    for (double c : coeffs_)
        if (!std::isfinite(c)) throw std::invalid_argument("stencil coefficients must be finite");
    check_increment(lx_, "lx");
    check_increment(ly_, "ly");
}

double Stencil::operator()(int p, int q) const {
    if (p < -radius_ || p > radius_ || q < -radius_ || q > radius_)
        throw std::out_of_range("stencil offset out of range");
    return coeffs_[static_cast<std::size_t>((q + radius_) * extent() + (p + radius_))];
}

Stencil biharmonic_stencil(double lx, double ly) {
    check_increment(lx, "lx");
    check_increment(ly, "ly");

    const double lx2 = lx * lx;
    const double ly2 = ly * ly;
    const double lx4 = lx2 * lx2;
    const double ly4 = ly2 * ly2;

    const double axis_x2 = 1.0 / lx4;
    const double axis_y2 = 1.0 / ly4;
    const double diagonal = 2.0 / (lx2 * ly2);
    const double axis_x1 = -4.0 * (lx2 + ly2) / (lx4 * ly2);
    const double axis_y1 = -4.0 * (lx2 + ly2) / (lx2 * ly4);
    const double centre = 2.0 * (3.0 * lx4 + 3.0 * ly4 + 4.0 * lx2 * ly2) / (lx4 * ly4);

    // rows q = -2..2, columns p = -2..2
    std::vector<double> c = {
        0.0,     0.0,      axis_y2, 0.0,      0.0,
        0.0,     diagonal, axis_y1, diagonal, 0.0,
        axis_x2, axis_x1,  centre,  axis_x1,  axis_x2,
        0.0,     diagonal, axis_y1, diagonal, 0.0,
        0.0,     0.0,      axis_y2, 0.0,      0.0,
    };
    return Stencil(2, std::move(c), lx, ly);
}

Stencil laplacian_baseline() {
    return Stencil(1, {-1, -1, -1, -1, 8, -1, -1, -1, -1}, 1.0, 1.0);
}

double monomial_response(const Stencil& s, Monomial m) {
    if (m.u < 0 || m.v < 0 || m.degree() > kMaxMonomialDegree)
        throw std::invalid_argument("monomial degree must be in [0, 7]");
    const int r = s.radius();
    double sum = 0.0;
    for (int q = -r; q <= r; ++q)
        for (int p = -r; p <= r; ++p)
            sum += s(p, q) * ipow(p * s.lx(), m.u) * ipow(q * s.ly(), m.v);
    return sum;
}

double monomial_response_scale(const Stencil& s, Monomial m) {
    if (m.u < 0 || m.v < 0 || m.degree() > kMaxMonomialDegree)
        throw std::invalid_argument("monomial degree must be in [0, 7]");
    const int r = s.radius();
    double sum = 0.0;
    for (int q = -r; q <= r; ++q)
        for (int p = -r; p <= r; ++p)
            sum += std::abs(s(p, q) * ipow(p * s.lx(), m.u) * ipow(q * s.ly(), m.v));
    return sum;
}

ValidationReport validate_stencil(const Stencil& s) {
    ValidationReport report;
    const int r = s.radius();

    double sum = 0.0;
    for (double c : s.coefficients()) sum += c;
    report.zero_sum_residual = std::abs(sum);

    for (int q = -r; q <= r; ++q) {
        for (int p = -r; p <= r; ++p) {
            const double c = s(p, q);
            report.max_symmetry_violation =
                std::max({report.max_symmetry_violation, std::abs(c - s(-p, q)),
                          std::abs(c - s(p, -q))});
        }
    }

    for (int degree = 0; degree <= 4; ++degree) {
        for (int u = degree; u >= 0; --u) {
            const Monomial m{u, degree - u};
            const double value = monomial_response(s, m);
            report.responses.push_back({m, value});
            if (degree <= 3)
                report.max_cubic_response = std::max(report.max_cubic_response, std::abs(value));
        }
    }

    report.passed = report.zero_sum_residual < kStructuralTolerance &&
                    report.max_symmetry_violation < kStructuralTolerance &&
                    report.max_cubic_response < kCubicTolerance;
    return report;
}

std::string stencil_to_csv(const Stencil& s) {
    std::string out;
    char buf[64];
    const int r = s.radius();
    for (int q = r; q >= -r; --q) {
        for (int p = -r; p <= r; ++p) {
            std::snprintf(buf, sizeof buf, "%.17g", s(p, q));
            if (p > -r) out += ',';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

std::string stencil_to_text(const Stencil& s) {
    const int r = s.radius();
    std::vector<std::string> cells;
    std::size_t width = 0;
    char buf[64];
    for (int q = r; q >= -r; --q) {
        for (int p = -r; p <= r; ++p) {
            // +0.0 keeps a stored -0 from printing as "-0"
            std::snprintf(buf, sizeof buf, "%.10g", s(p, q) + 0.0);
            cells.emplace_back(buf);
            width = std::max(width, cells.back().size());
        }
    }
    std::ostringstream os;
    std::size_t k = 0;
    for (int row = 0; row < s.extent(); ++row) {
        for (int col = 0; col < s.extent(); ++col, ++k) {
            if (col > 0) os << ' ';
            os << std::string(width - cells[k].size(), ' ') << cells[k];
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace biharm
