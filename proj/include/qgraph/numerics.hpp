#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/tools/toms748_solve.hpp>

namespace qgraph {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Raised when an iterative method fails to reach its tolerance.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Tolerances shared by the root finders and the band assembly.
struct ToleranceConfig {
    double root_abs = 1e-12;          // momentum units
    double residual_zero = 1e-9;      // dimensionless
    double degenerate_width = 1e-8;   // energy units
    int scan_density = 16;            // grid points per cosine oscillation

    void validate() const
    {
        if (!(root_abs > 0.0) || !(residual_zero > 0.0) || !(degenerate_width > 0.0))
            throw std::invalid_argument("tolerances must be strictly positive");
        if (scan_density < 4)
            throw std::invalid_argument("scan_density must be at least 4");
    }

    /// Defaults overridden by QGRAPH_ROOT_ABS, QGRAPH_RESIDUAL_ZERO,
    /// QGRAPH_DEGENERATE_WIDTH and QGRAPH_SCAN_DENSITY when set.
    static ToleranceConfig from_environment()
    {
        ToleranceConfig tol;
        auto read = [](const char* name, auto& field) {
            const char* raw = std::getenv(name);
            if (raw == nullptr || *raw == '\0')
                return;
            std::size_t used = 0;
            const std::string text(raw);
            try {
                if constexpr (std::is_same_v<std::decay_t<decltype(field)>, int>)
                    field = std::stoi(text, &used);
                else
                    field = std::stod(text, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != text.size())
                throw std::invalid_argument(std::string("malformed value in ") + name);
        };
        read("QGRAPH_ROOT_ABS", tol.root_abs);
        read("QGRAPH_RESIDUAL_ZERO", tol.residual_zero);
        read("QGRAPH_DEGENERATE_WIDTH", tol.degenerate_width);
        read("QGRAPH_SCAN_DENSITY", tol.scan_density);
        tol.validate();
        return tol;
    }
};

/// Interval [lo, hi] on which f changes sign, or touches zero at an endpoint.
struct Bracket {
    double lo;
    double hi;
    double f_lo;
    double f_hi;
};

/// Locates a zero of f inside the bracket to within tol.root_abs.
///
/// TOMS 748 (bracketing with inverse-cubic steps, never leaves the bracket)
/// drives the search; the termination test is on the bracket width, so the
/// result is within root_abs of a true sign change for any continuous f.
/// Endpoints with |f| below residual_zero are accepted as roots directly,
/// which is how tangential zeros reported by scan_sign_changes resolve.
template <class F>
double find_root(F&& f, const Bracket& bracket, const ToleranceConfig& tol = {})
{
    if (!(bracket.lo < bracket.hi))
        throw std::invalid_argument("find_root: bracket requires lo < hi");
    if (bracket.f_lo == 0.0)
        return bracket.lo;
    if (bracket.f_hi == 0.0)
        return bracket.hi;
    if (std::signbit(bracket.f_lo) == std::signbit(bracket.f_hi)) {
        if (std::abs(bracket.f_lo) < tol.residual_zero || std::abs(bracket.f_hi) < tol.residual_zero)
            return std::abs(bracket.f_lo) <= std::abs(bracket.f_hi) ? bracket.lo : bracket.hi;
        throw std::invalid_argument("find_root: no sign change in bracket");
    }

    const double eps = std::numeric_limits<double>::epsilon();
    auto done = [&](double a, double b) {
        const double width = b - a;
        return width <= 2.0 * tol.root_abs || width <= 8.0 * eps * std::max(std::abs(a), std::abs(b));
    };
    constexpr std::uintmax_t max_iterations = 400;
    std::uintmax_t iterations = max_iterations;
    auto g = [&f](double x) { return static_cast<double>(f(x)); };
    const auto [a, b] = boost::math::tools::toms748_solve(
        g, bracket.lo, bracket.hi, bracket.f_lo, bracket.f_hi, done, iterations);
    if (a != b && !done(a, b))
        throw NumericError("find_root: no convergence after " + std::to_string(iterations) + " iterations");
    return a == b ? a : 0.5 * (a + b);
}

/// Brackets around sign changes of f sampled on the given increasing nodes.
///
/// A run of nodes with |f| < residual_zero counts as one zero: if f changes
/// sign across the run the bracket spans it, otherwise (a tangency) the
/// bracket starts at the node of smallest |f| and find_root returns that node.
template <class F>
std::vector<Bracket> scan_sign_changes_on(F&& f, const std::vector<double>& nodes, const ToleranceConfig& tol = {})
{
    std::vector<Bracket> out;
    const std::size_t n = nodes.size();
    if (n < 2)
        return out;
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i)
        values[i] = f(nodes[i]);

    auto touches = [&](std::size_t i) { return std::abs(values[i]) < tol.residual_zero; };
    auto strict_change = [&](double a, double b) { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); };

    std::size_t i = 0;
    while (i + 1 < n || (i + 1 == n && touches(i))) {
        if (touches(i)) {
            std::size_t end = i;
            std::size_t best = i;
            while (end + 1 < n && touches(end + 1)) {
                ++end;
                if (std::abs(values[end]) < std::abs(values[best]))
                    best = end;
            }
            const std::size_t before = i;
            const std::size_t after = end;
            const bool has_left = before > 0;
            const bool has_right = after + 1 < n;
            if (has_left && has_right && strict_change(values[before - 1], values[after + 1])) {
                out.push_back({nodes[before - 1], nodes[after + 1], values[before - 1], values[after + 1]});
            } else if (best + 1 < n) {
                out.push_back({nodes[best], nodes[best + 1], values[best], values[best + 1]});
            } else {
                out.push_back({nodes[best - 1], nodes[best], values[best - 1], values[best]});
            }
            i = end + 1;
            continue;
        }
        if (i + 1 < n && !touches(i + 1) && strict_change(values[i], values[i + 1]))
            out.push_back({nodes[i], nodes[i + 1], values[i], values[i + 1]});
        ++i;
    }
    return out;
}

/// Sign-change brackets of f on n equally spaced points spanning [lo, hi].
template <class F>
std::vector<Bracket> scan_sign_changes(F&& f, double lo, double hi, int n, const ToleranceConfig& tol = {})
{
    if (!(lo < hi) || n < 2)
        throw std::invalid_argument("scan_sign_changes: requires lo < hi and n >= 2");
    std::vector<double> nodes(static_cast<std::size_t>(n));
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (int i = 0; i < n; ++i)
        nodes[static_cast<std::size_t>(i)] = lo + step * i;
    nodes.back() = hi;
    return scan_sign_changes_on(std::forward<F>(f), nodes, tol);
}

/// Determinant of a small dense complex matrix (dim <= 8) by Gaussian
/// elimination with partial pivoting; closed form for dim <= 2.
inline Complex det_complex(const ComplexMatrix& m)
{
    if (m.rows() != m.cols())
        throw std::invalid_argument("det_complex: matrix must be square");
    const Eigen::Index n = m.rows();
    if (n > 8)
        throw std::invalid_argument("det_complex: dimension above 8");
    if (n == 0)
        return {1.0, 0.0};
    if (n == 1)
        return m(0, 0);
    if (n == 2)
        return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);

    ComplexMatrix a = m;
    Complex det{1.0, 0.0};
    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::Index pivot = col;
        for (Eigen::Index r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(pivot, col)))
                pivot = r;
        if (a(pivot, col) == Complex{})
            return {0.0, 0.0};
        if (pivot != col) {
            a.row(pivot).swap(a.row(col));
            det = -det;
        }
        det *= a(col, col);
        for (Eigen::Index r = col + 1; r < n; ++r) {
            const Complex factor = a(r, col) / a(col, col);
            a.row(r).tail(n - col) -= factor * a.row(col).tail(n - col);
        }
    }
    return det;
}

/// Hadamard bound: product of row norms, an upper bound on |det m|.
inline double hadamard_bound(const ComplexMatrix& m)
{
    double bound = 1.0;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        bound *= m.row(r).norm();
    return bound;
}

inline double max_abs(const ComplexMatrix& m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

} // namespace qgraph
