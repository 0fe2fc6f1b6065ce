#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "qgraph/numerics.hpp"

namespace qgraph {

enum class LatticeKind { square, hexagonal };

inline std::string_view to_string(LatticeKind kind)
{
    return kind == LatticeKind::square ? "square" : "hexagonal";
}

/// Periodic lattice graph with the cyclic coupling at every vertex.
struct LatticeModel {
    LatticeKind kind = LatticeKind::square;
    double edge_length = 1.0;

    LatticeModel() = default;
    LatticeModel(LatticeKind k, double length) : kind(k), edge_length(length)
    {
        if (!(length > 0.0) || !std::isfinite(length))
            throw std::invalid_argument("edge length must be positive and finite");
    }
};

/// Bloch phases theta_j, with omega_j = exp(i theta_j).
struct BlochPoint {
    double theta1 = 0.0;
    double theta2 = 0.0;
};

enum class RangeMode { derived, paper };

inline std::string_view to_string(RangeMode mode)
{
    return mode == RangeMode::derived ? "derived" : "paper";
}

/// Interval swept by the Bloch parameter over the Brillouin torus.
struct ParamRange {
    double lo;
    double hi;
    RangeMode provenance;

    [[nodiscard]] bool contains(double value, double slack = 0.0) const
    {
        return value >= lo - slack && value <= hi + slack;
    }
};

/// Energy interval [lo, hi].
struct EnergyWindow {
    double lo;
    double hi;
};

/// Which half of the spectrum a momentum refers to: E = k^2 or E = -kappa^2.
enum class Branch { positive, negative };

inline double energy_of(Branch branch, double momentum)
{
    const double e = momentum * momentum;
    return branch == Branch::positive ? e : (e == 0.0 ? 0.0 : -e);
}

/// The scalar the spectral condition depends on: c_theta for the square
/// lattice, d_theta for the hexagonal one.
inline double bloch_param(LatticeKind kind, const BlochPoint& p)
{
    if (kind == LatticeKind::square)
        return std::cos(0.5 * (p.theta1 + p.theta2)) * std::cos(0.5 * (p.theta1 - p.theta2));
    return std::cos(p.theta1) + std::cos(p.theta1 - p.theta2) + std::cos(p.theta2);
}

inline double bloch_param(const LatticeModel& model, const BlochPoint& p)
{
    return bloch_param(model.kind, p);
}

/// Torus grid coordinate: theta_i = -pi + 2 pi (i + 1) / n, covering (-pi, pi].
inline double torus_coordinate(int i, int n)
{
    return -std::numbers::pi + 2.0 * std::numbers::pi * (i + 1) / n;
}

namespace detail {

// Newton iteration on the gradient of the Bloch parameter, started at a grid
// extremum; stays put if the Hessian is singular.
inline double refine_extremum(LatticeKind kind, BlochPoint p)
{
    for (int iter = 0; iter < 50; ++iter) {
        const double a = p.theta1;
        const double b = p.theta2;
        double g1;
        double g2;
        double h11;
        double h12;
        double h22;
        if (kind == LatticeKind::hexagonal) {
            g1 = -std::sin(a) - std::sin(a - b);
            g2 = -std::sin(b) + std::sin(a - b);
            h11 = -std::cos(a) - std::cos(a - b);
            h12 = std::cos(a - b);
            h22 = -std::cos(b) - std::cos(a - b);
        } else {
            g1 = -0.5 * std::sin(a);
            g2 = -0.5 * std::sin(b);
            h11 = -0.5 * std::cos(a);
            h12 = 0.0;
            h22 = -0.5 * std::cos(b);
        }
        const double det = h11 * h22 - h12 * h12;
        if (std::abs(det) < 1e-14)
            break;
        const double d1 = (h22 * g1 - h12 * g2) / det;
        const double d2 = (h11 * g2 - h12 * g1) / det;
        p.theta1 -= d1;
        p.theta2 -= d2;
        if (std::abs(d1) + std::abs(d2) < 1e-15)
            break;
    }
    return bloch_param(kind, p);
}

inline ParamRange sample_param_range(LatticeKind kind, int grid_n)
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    BlochPoint arg_lo;
    BlochPoint arg_hi;
    std::vector<double> cos_axis(static_cast<std::size_t>(grid_n));
    for (int i = 0; i < grid_n; ++i)
        cos_axis[static_cast<std::size_t>(i)] = std::cos(torus_coordinate(i, grid_n));
    for (int i = 0; i < grid_n; ++i) {
        const double t1 = torus_coordinate(i, grid_n);
        for (int j = 0; j < grid_n; ++j) {
            const double t2 = torus_coordinate(j, grid_n);
            const double v = kind == LatticeKind::square
                ? 0.5 * (cos_axis[static_cast<std::size_t>(i)] + cos_axis[static_cast<std::size_t>(j)])
                : cos_axis[static_cast<std::size_t>(i)] + cos_axis[static_cast<std::size_t>(j)] + std::cos(t1 - t2);
            if (v < lo) {
                lo = v;
                arg_lo = {t1, t2};
            }
            if (v > hi) {
                hi = v;
                arg_hi = {t1, t2};
            }
        }
    }
    lo = std::min(lo, refine_extremum(kind, arg_lo));
    hi = std::max(hi, refine_extremum(kind, arg_hi));
    return {lo, hi, RangeMode::derived};
}

} // namespace detail

/// Range of c_theta / d_theta over the torus.
///
/// The square range is [-1, 1] in either mode. For the hexagonal lattice the
/// derived mode samples a 2000 x 2000 torus grid and polishes the extrema by
/// Newton steps, which gives [-3/2, 3]; the paper mode returns the printed
/// [-1, 3] for comparison runs.
inline ParamRange param_range(LatticeKind kind, RangeMode mode)
{
    if (kind == LatticeKind::square)
        return {-1.0, 1.0, mode};
    if (mode == RangeMode::paper)
        return {-1.0, 3.0, RangeMode::paper};
    static const ParamRange derived = detail::sample_param_range(LatticeKind::hexagonal, 2000);
    return derived;
}

// ---------------------------------------------------------------------------
// Spectral conditions in cleared-denominator form
// ---------------------------------------------------------------------------

/// Spectral condition written as A(x) - B(x) p = 0 with x = k (positive
/// branch) or x = kappa (negative branch) and p the Bloch parameter.
struct ConditionTerms {
    double a;
    double b;
    double envelope; // bound on |A| with the oscillating factor replaced by its amplitude

    [[nodiscard]] double residual(double p) const { return a - b * p; }
    /// |A - B p| relative to the size its terms can reach at this momentum.
    [[nodiscard]] double relative_residual(double p) const
    {
        const double scale = envelope + std::abs(b * p);
        return scale > 0.0 ? std::abs(a - b * p) / scale : 0.0;
    }
};

/// square, E = k^2:       (1 + k^2) cos kl            - (1 - k^2) c = 0
/// square, E = -kappa^2:  (1 - kappa^2) cosh kappa l  - (1 + kappa^2) c = 0
/// hexagonal, E = k^2:    k^4 - 6k^2 - 3 - (k^2 + 3)^2 cos 2kl - 4(k^2 - 1) d = 0
/// hexagonal, E = -kappa^2: (kappa^2 - 3)^2 cosh 2 kappa l - kappa^4 - 6 kappa^2 + 3
///                          - 4(kappa^2 + 1) d = 0
inline ConditionTerms condition_terms(const LatticeModel& model, Branch branch, double x)
{
    const double l = model.edge_length;
    const double x2 = x * x;
    if (model.kind == LatticeKind::square) {
        if (branch == Branch::positive)
            return {(1.0 + x2) * std::cos(x * l), 1.0 - x2, 1.0 + x2};
        const double ch = std::cosh(x * l);
        return {(1.0 - x2) * ch, 1.0 + x2, std::abs(1.0 - x2) * ch};
    }
    if (branch == Branch::positive) {
        const double s = x2 + 3.0;
        return {x2 * x2 - 6.0 * x2 - 3.0 - s * s * std::cos(2.0 * x * l), 4.0 * (x2 - 1.0),
                x2 * x2 + 6.0 * x2 + 3.0 + s * s};
    }
    const double s = x2 - 3.0;
    const double ch = std::cosh(2.0 * x * l);
    return {s * s * ch - x2 * x2 - 6.0 * x2 + 3.0, 4.0 * (x2 + 1.0), s * s * ch + x2 * x2 + 6.0 * x2 + 3.0};
}

/// Outcome of solving the spectral condition for the Bloch parameter at a
/// fixed energy.
struct ParamRequirement {
    enum class Kind { value, all_pass, no_pass };
    Kind kind = Kind::no_pass;
    double value = 0.0;
};

/// Momentum at which the parameter coefficient B vanishes, if any.
inline bool is_singular_momentum(Branch branch, double x)
{
    return branch == Branch::positive && x == 1.0;
}

inline ParamRequirement required_param_at(const LatticeModel& model, Branch branch, double x,
                                          const ToleranceConfig& tol = {})
{
    const ConditionTerms t = condition_terms(model, branch, x);
    if (t.b == 0.0) {
        if (std::abs(t.a) < tol.residual_zero)
            return {ParamRequirement::Kind::all_pass, 0.0};
        return {ParamRequirement::Kind::no_pass, 0.0};
    }
    return {ParamRequirement::Kind::value, t.a / t.b};
}

/// The Bloch parameter value for which energy e lies on the spectral
/// condition. At k = 1 the parameter drops out; the result is all_pass when
/// the remaining identity holds (every Bloch point solves it) and no_pass
/// otherwise.
inline ParamRequirement required_param(const LatticeModel& model, double e, const ToleranceConfig& tol = {})
{
    if (e == 0.0 || !std::isfinite(e))
        throw std::invalid_argument("required_param: energy must be finite and nonzero");
    const Branch branch = e > 0.0 ? Branch::positive : Branch::negative;
    return required_param_at(model, branch, std::sqrt(std::abs(e)), tol);
}

/// True when k l is an integer multiple of pi, i.e. a flat-band momentum.
inline bool is_flat_momentum(const LatticeModel& model, double k)
{
    const double m = k * model.edge_length / std::numbers::pi;
    const double nearest = std::round(m);
    return std::abs(m - nearest) <= 1e-12 * std::max(1.0, nearest);
}

/// Slack applied when comparing a required parameter against its range.
inline double param_slack(const ToleranceConfig& tol)
{
    return tol.residual_zero;
}

inline bool member_at(const LatticeModel& model, Branch branch, double x, const ParamRange& range,
                      const ToleranceConfig& tol = {})
{
    if (x == 0.0)
        return true;
    const ParamRequirement r = required_param_at(model, branch, x, tol);
    switch (r.kind) {
    case ParamRequirement::Kind::all_pass:
        return true;
    case ParamRequirement::Kind::no_pass:
        return false;
    case ParamRequirement::Kind::value:
        return range.contains(r.value, param_slack(tol));
    }
    return false;
}

/// Spectrum membership of energy e: flat band, all_pass point, or a
/// required parameter inside the parameter range.
inline bool is_member(const LatticeModel& model, double e, RangeMode mode, const ToleranceConfig& tol = {})
{
    if (e == 0.0)
        return true;
    const Branch branch = e > 0.0 ? Branch::positive : Branch::negative;
    const double x = std::sqrt(std::abs(e));
    if (branch == Branch::positive && is_flat_momentum(model, x))
        return true;
    return member_at(model, branch, x, param_range(model.kind, mode), tol);
}

// ---------------------------------------------------------------------------
// Spectral segments and flat bands
// ---------------------------------------------------------------------------

enum class SegmentKind { flat, ac };

inline std::string_view to_string(SegmentKind kind)
{
    return kind == SegmentKind::flat ? "flat" : "ac";
}

/// Closed energy interval of the spectrum. For E < 0 the momenta are the
/// decay rates kappa with E = -kappa^2; momentum_lo belongs to e_lo.
struct SpectralSegment {
    double e_lo = 0.0;
    double e_hi = 0.0;
    SegmentKind kind = SegmentKind::ac;
    bool degenerate = false;
    double momentum_lo = 0.0;
    double momentum_hi = 0.0;

    [[nodiscard]] double width() const { return e_hi - e_lo; }
};

/// Flat bands at k_m = pi m / l, m = 0, 1, 2, ..., with energies k_m^2
/// inside the window. m = 0 gives the point E = 0.
inline std::vector<SpectralSegment> flat_bands(const LatticeModel& model, const EnergyWindow& window)
{
    if (!(window.lo < window.hi))
        throw std::invalid_argument("flat_bands: window must be non-degenerate");
    std::vector<SpectralSegment> out;
    if (window.hi < 0.0)
        return out;
    const double step = std::numbers::pi / model.edge_length;
    const double k_lo = std::sqrt(std::max(window.lo, 0.0));
    const double k_hi = std::sqrt(window.hi);
    for (long m = static_cast<long>(std::ceil(k_lo / step)); m * step <= k_hi; ++m) {
        const double k = m * step;
        const double e = k * k;
        if (e < window.lo || e > window.hi)
            continue;
        out.push_back({e, e, SegmentKind::flat, false, k, k});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Secular determinants
// ---------------------------------------------------------------------------

namespace detail {

using Row = Eigen::Matrix<Complex, 1, Eigen::Dynamic>;

// Rows of the cyclic matching conditions
// (psi_{j+1} - psi_j) + i (psi'_{j+1} + psi'_j) = 0 for j = 1..N (mod N),
// given each edge's boundary value and outward derivative as linear forms
// in the unknown amplitudes.
inline void append_vertex_rows(ComplexMatrix& m, Eigen::Index first_row, const std::vector<Row>& values,
                               const std::vector<Row>& derivatives)
{
    const std::size_t n = values.size();
    const Complex i{0.0, 1.0};
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t next = (j + 1) % n;
        m.row(first_row + static_cast<Eigen::Index>(j)) =
            values[next] - values[j] + i * (derivatives[next] + derivatives[j]);
    }
}

inline Row unit_row(Eigen::Index size, Eigen::Index pos)
{
    Row r = Row::Zero(size);
    r(pos) = 1.0;
    return r;
}

} // namespace detail

/// Linear system of the elementary cell at momentum k (k = i kappa for
/// negative energies), derived from the plane-wave Ansatz on each edge.
///
/// Square: unknowns (a1, b1, a2, b2) of psi_j = a_j e^{ikx} + b_j e^{-ikx} on
/// the right (j=1) and upper (j=2) edges; the left and lower edges carry
/// omega_j times the translated functions. Edges are numbered
/// counterclockwise around the vertex and derivatives point away from it.
///
/// Hexagonal: unknowns (a_j, b_j) for the three edges j = 1, 2, 3 leaving
/// vertex A at x = 0 and reaching B at x = l; at B the edge j arrives from a
/// neighbouring cell and carries the phase 1, conj(omega1), conj(omega2).
/// Both vertices use the same counterclockwise order 1 -> 2 -> 3.
inline ComplexMatrix secular_matrix(const LatticeModel& model, Complex k, const BlochPoint& p)
{
    const Complex i{0.0, 1.0};
    const double l = model.edge_length;
    const Complex shift = std::exp(i * k * l);
    const Complex back = 1.0 / shift;
    using detail::unit_row;

    if (model.kind == LatticeKind::square) {
        const Complex w1 = std::polar(1.0, p.theta1);
        const Complex w2 = std::polar(1.0, p.theta2);
        const auto a1 = unit_row(4, 0);
        const auto b1 = unit_row(4, 1);
        const auto a2 = unit_row(4, 2);
        const auto b2 = unit_row(4, 3);
        std::vector<detail::Row> values{a1 + b1, a2 + b2, w1 * (shift * a1 + back * b1),
                                        w2 * (shift * a2 + back * b2)};
        std::vector<detail::Row> derivatives{i * k * (a1 - b1), i * k * (a2 - b2),
                                             -i * k * w1 * (shift * a1 - back * b1),
                                             -i * k * w2 * (shift * a2 - back * b2)};
        ComplexMatrix m(4, 4);
        detail::append_vertex_rows(m, 0, values, derivatives);
        return m;
    }

    const std::array<Complex, 3> phase{Complex{1.0, 0.0}, std::polar(1.0, -p.theta1), std::polar(1.0, -p.theta2)};
    std::vector<detail::Row> values_a;
    std::vector<detail::Row> derivs_a;
    std::vector<detail::Row> values_b;
    std::vector<detail::Row> derivs_b;
    for (Eigen::Index j = 0; j < 3; ++j) {
        const auto a = unit_row(6, 2 * j);
        const auto b = unit_row(6, 2 * j + 1);
        values_a.push_back(a + b);
        derivs_a.push_back(i * k * (a - b));
        const Complex ph = phase[static_cast<std::size_t>(j)];
        values_b.push_back(ph * (shift * a + back * b));
        derivs_b.push_back(-i * k * ph * (shift * a - back * b));
    }
    ComplexMatrix m(6, 6);
    detail::append_vertex_rows(m, 0, values_a, derivs_a);
    detail::append_vertex_rows(m, 3, values_b, derivs_b);
    return m;
}

inline Complex secular_determinant(const LatticeModel& model, Complex k, const BlochPoint& p)
{
    return det_complex(secular_matrix(model, k, p));
}

/// Non-trivial factor of the secular determinant:
/// square     (k^2 - 1)(cos th1 + cos th2) + 2 (k^2 + 1) cos kl
/// hexagonal  3 + 6k^2 - k^4 + 4 d (k^2 - 1) + (k^2 + 3)^2 cos 2kl
inline Complex secular_factor(const LatticeModel& model, Complex k, const BlochPoint& p)
{
    const double l = model.edge_length;
    const Complex k2 = k * k;
    if (model.kind == LatticeKind::square)
        return (k2 - 1.0) * (std::cos(p.theta1) + std::cos(p.theta2)) + 2.0 * (k2 + 1.0) * std::cos(k * l);
    const double d = bloch_param(LatticeKind::hexagonal, p);
    return 3.0 + 6.0 * k2 - k2 * k2 + 4.0 * d * (k2 - 1.0) + (k2 + 3.0) * (k2 + 3.0) * std::cos(2.0 * k * l);
}

/// Factored closed form of the secular determinant:
/// square     16 i e^{i(th1+th2)} k sin(kl) * factor
/// hexagonal  16 i e^{-i(th1+th2)} k^2 sin(kl) * factor
/// With the conventions of secular_matrix the two agree identically.
inline Complex secular_determinant_factored(const LatticeModel& model, Complex k, const BlochPoint& p)
{
    const Complex i{0.0, 1.0};
    const double l = model.edge_length;
    const double phase = model.kind == LatticeKind::square ? p.theta1 + p.theta2 : -(p.theta1 + p.theta2);
    const Complex kpow = model.kind == LatticeKind::square ? k : k * k;
    return 16.0 * i * std::polar(1.0, phase) * kpow * std::sin(k * l) * secular_factor(model, k, p);
}

/// Momentum (complex) for an energy: k for E >= 0, i kappa for E < 0.
inline Complex momentum_of(double e)
{
    return e >= 0.0 ? Complex{std::sqrt(e), 0.0} : Complex{0.0, std::sqrt(-e)};
}

// ---------------------------------------------------------------------------
// Brute-force Brillouin membership oracle
// ---------------------------------------------------------------------------

/// Membership by sampling the non-trivial determinant factor over a
/// grid_n x grid_n torus grid: e is in the spectrum when the factor changes
/// sign on the grid, or comes within residual_zero (relative to its terms)
/// of zero, or when e is a flat-band energy. Independent of the Bloch
/// parameter reduction and of param_range.
inline bool brillouin_membership_oracle(const LatticeModel& model, double e, int grid_n,
                                        const ToleranceConfig& tol = {}, unsigned threads = 1)
{
    if (grid_n < 64)
        throw std::invalid_argument("brillouin_membership_oracle: grid_n must be >= 64");
    if (e == 0.0)
        return true;
    const double l = model.edge_length;
    if (e > 0.0 && is_flat_momentum(model, std::sqrt(e)))
        return true;

    // Real factor f(theta) = alpha * s(theta) + beta, with s the raw
    // trigonometric sum of the Bloch phases.
    double alpha;
    double beta;
    if (e > 0.0) {
        const double k = std::sqrt(e);
        const double k2 = e;
        if (model.kind == LatticeKind::square) {
            alpha = k2 - 1.0;
            beta = 2.0 * (k2 + 1.0) * std::cos(k * l);
        } else {
            alpha = 4.0 * (k2 - 1.0);
            beta = 3.0 + 6.0 * k2 - k2 * k2 + (k2 + 3.0) * (k2 + 3.0) * std::cos(2.0 * k * l);
        }
    } else {
        const double q = std::sqrt(-e);
        const double q2 = -e;
        if (model.kind == LatticeKind::square) {
            alpha = -q2 - 1.0;
            beta = 2.0 * (1.0 - q2) * std::cosh(q * l);
        } else {
            alpha = 4.0 * (-q2 - 1.0);
            beta = 3.0 - 6.0 * q2 - q2 * q2 + (3.0 - q2) * (3.0 - q2) * std::cosh(2.0 * q * l);
        }
    }

    const auto n = static_cast<std::size_t>(grid_n);
    std::vector<double> cos_axis(n);
    std::vector<double> cos_diff(n);  // cos(theta_i - theta_j) depends on (i - j) mod n
    for (std::size_t i = 0; i < n; ++i) {
        cos_axis[i] = std::cos(torus_coordinate(static_cast<int>(i), grid_n));
        cos_diff[i] = std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / grid_n);
    }

    struct RowStats {
        double min = std::numeric_limits<double>::infinity();
        double max = -std::numeric_limits<double>::infinity();
        bool near_zero = false;
    };
    std::vector<RowStats> rows(n);
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            RowStats st;
            for (std::size_t j = 0; j < n; ++j) {
                double s = cos_axis[i] + cos_axis[j];
                if (model.kind == LatticeKind::hexagonal)
                    s += cos_diff[(i + n - j) % n];
                const double f = alpha * s + beta;
                st.min = std::min(st.min, f);
                st.max = std::max(st.max, f);
                const double scale = std::abs(alpha * s) + std::abs(beta);
                if (std::abs(f) <= tol.residual_zero * scale)
                    st.near_zero = true;
            }
            rows[i] = st;
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (threads == 1) {
        work(0, n);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + threads - 1) / threads;
        for (std::size_t begin = 0; begin < n; begin += chunk)
            pool.emplace_back(work, begin, std::min(n, begin + chunk));
        for (auto& t : pool)
            t.join();
    }

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& st : rows) {
        if (st.near_zero)
            return true;
        lo = std::min(lo, st.min);
        hi = std::max(hi, st.max);
    }
    return lo <= 0.0 && hi >= 0.0;
}

} // namespace qgraph
