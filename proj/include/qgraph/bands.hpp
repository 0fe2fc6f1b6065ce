#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <vector>

#include "qgraph/lattice.hpp"
#include "qgraph/numerics.hpp"

namespace qgraph {

/// Spectrum of a lattice model inside an energy window.
struct BandStructure {
    LatticeModel model;
    EnergyWindow window;
    std::vector<SpectralSegment> segments;  // sorted by e_lo

    [[nodiscard]] std::vector<SpectralSegment> ac_segments() const
    {
        std::vector<SpectralSegment> out;
        for (const auto& s : segments)
            if (s.kind == SegmentKind::ac)
                out.push_back(s);
        return out;
    }
};

/// Scan nodes in momentum for one branch over [lo, hi].
///
/// The uniform step is pi / (scan_density * c * l), c = 1 (square) or 2
/// (hexagonal), capped at 1 / scan_density so the rational prefactors stay
/// resolved for short edges. Extra nodes sit at the features narrower than
/// any uniform step: every extremum k = pi m / (c l) of the oscillating
/// factor (roots come in pairs around them, and at high energy the pairs
/// close in like 1/m), the star bound-state rates kappa = 1 (square) and
/// kappa = sqrt 3 (hexagonal), around which negative bands become
/// exponentially narrow, and k = 1 where the parameter coefficient vanishes.
inline std::vector<double> momentum_nodes(const LatticeModel& model, Branch branch, double lo, double hi,
                                          const ToleranceConfig& tol = {})
{
    std::vector<double> nodes;
    if (!(lo < hi))
        return nodes;
    const double c = model.kind == LatticeKind::square ? 1.0 : 2.0;
    const double step =
        std::min(std::numbers::pi / (tol.scan_density * c * model.edge_length), 1.0 / tol.scan_density);
    const auto count = static_cast<long>(std::ceil((hi - lo) / step));
    nodes.reserve(static_cast<std::size_t>(count) + 8);
    for (long i = 0; i < count; ++i)
        nodes.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count));
    nodes.push_back(hi);

    auto add = [&](double x) {
        if (x > lo && x < hi)
            nodes.push_back(x);
    };
    if (branch == Branch::positive) {
        add(1.0);
        const double extremum = std::numbers::pi / (c * model.edge_length);
        for (long m = static_cast<long>(std::ceil(lo / extremum)); m * extremum < hi; ++m)
            add(m * extremum);
    } else {
        add(model.kind == LatticeKind::square ? 1.0 : std::sqrt(3.0));
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return nodes;
}

namespace detail {

struct MomentumInterval {
    double lo;
    double hi;
    bool degenerate;
};

// Spectral intervals (in momentum) of one branch inside [x_lo, x_hi]: every
// edge is a root of A(x) - B(x) p for p a range endpoint, so the candidate
// points are those roots plus the window ends and singular momenta; each gap
// between candidates is classified by its midpoint.
inline std::vector<MomentumInterval> branch_intervals(const LatticeModel& model, Branch branch, double x_lo,
                                                      double x_hi, const ParamRange& range,
                                                      const ToleranceConfig& tol)
{
    std::vector<MomentumInterval> out;
    if (!(x_lo < x_hi))
        return out;
    const auto nodes = momentum_nodes(model, branch, x_lo, x_hi, tol);

    std::vector<double> candidates{x_lo, x_hi};
    for (const double p : {range.lo, range.hi}) {
        auto f = [&](double x) { return condition_terms(model, branch, x).residual(p); };
        for (const auto& bracket : scan_sign_changes_on(f, nodes, tol))
            candidates.push_back(find_root(f, bracket, tol));
    }
    if (branch == Branch::positive && x_lo < 1.0 && 1.0 < x_hi)
        candidates.push_back(1.0);
    std::sort(candidates.begin(), candidates.end());
    // Roots closer than root_abs are the same edge; the window ends and the
    // exact singular momentum win over a nearby root.
    std::vector<double> merged;
    for (const double x : candidates) {
        if (!merged.empty() && x - merged.back() <= tol.root_abs) {
            const bool keep_new = x == x_hi || x == 1.0;
            if (keep_new && merged.back() != x_lo)
                merged.back() = x;
            continue;
        }
        merged.push_back(x);
    }
    candidates = std::move(merged);

    const std::size_t n = candidates.size();
    std::vector<bool> interval_member(n - 1, false);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double mid = 0.5 * (candidates[i] + candidates[i + 1]);
        interval_member[i] = member_at(model, branch, mid, range, tol);
    }

    std::optional<double> open;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (interval_member[i]) {
            if (!open)
                open = candidates[i];
        } else if (open) {
            out.push_back({*open, candidates[i], false});
            open.reset();
        }
    }
    if (open)
        out.push_back({*open, candidates[n - 1], false});

    // Isolated points of the spectrum: a candidate both of whose neighbouring
    // intervals are gaps, but which itself solves the condition.
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (interval_member[i - 1] || interval_member[i])
            continue;
        const double x = candidates[i];
        const ParamRequirement r = required_param_at(model, branch, x, tol);
        const bool point_member = r.kind == ParamRequirement::Kind::all_pass ||
            (r.kind == ParamRequirement::Kind::value &&
             range.contains(r.value, param_slack(tol) * (1.0 + std::abs(r.value))));
        if (point_member)
            out.push_back({x, x, true});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
    return out;
}

inline SpectralSegment to_segment(Branch branch, const MomentumInterval& iv)
{
    SpectralSegment s;
    s.kind = SegmentKind::ac;
    s.degenerate = iv.degenerate;
    if (branch == Branch::positive) {
        s.e_lo = energy_of(branch, iv.lo);
        s.e_hi = energy_of(branch, iv.hi);
        s.momentum_lo = iv.lo;
        s.momentum_hi = iv.hi;
    } else {
        s.e_lo = energy_of(branch, iv.hi);
        s.e_hi = energy_of(branch, iv.lo);
        s.momentum_lo = iv.hi;
        s.momentum_hi = iv.lo;
    }
    return s;
}

inline void sort_segments(std::vector<SpectralSegment>& segments)
{
    std::sort(segments.begin(), segments.end(), [](const SpectralSegment& a, const SpectralSegment& b) {
        return std::tie(a.e_lo, a.e_hi, a.kind) < std::tie(b.e_lo, b.e_hi, b.kind);
    });
}

} // namespace detail

/// Flat bands plus absolutely continuous segments in the window.
///
/// Negative energies are searched in kappa and positive ones in k; the
/// energy conversion happens only when segments are emitted. Band edges
/// clipped by the window end at the window boundary. Zero-width bands from
/// the k = 1 mechanism are ac segments flagged degenerate.
inline BandStructure band_structure(const LatticeModel& model, const EnergyWindow& window, RangeMode mode,
                                    const ToleranceConfig& tol = {})
{
    if (!(window.lo < window.hi) || !std::isfinite(window.lo) || !std::isfinite(window.hi))
        throw std::invalid_argument("band_structure: window must be bounded and non-degenerate");
    const ParamRange range = param_range(model.kind, mode);
    BandStructure bs{model, window, flat_bands(model, window)};

    if (window.hi > 0.0) {
        const double k_lo = std::sqrt(std::max(window.lo, 0.0));
        const double k_hi = std::sqrt(window.hi);
        for (const auto& iv : detail::branch_intervals(model, Branch::positive, k_lo, k_hi, range, tol))
            bs.segments.push_back(detail::to_segment(Branch::positive, iv));
    }
    if (window.lo < 0.0) {
        const double q_lo = std::sqrt(std::max(-window.hi, 0.0));
        const double q_hi = std::sqrt(-window.lo);
        for (const auto& iv : detail::branch_intervals(model, Branch::negative, q_lo, q_hi, range, tol))
            bs.segments.push_back(detail::to_segment(Branch::negative, iv));
    }
    // k^2 of a clipped momentum can land an ulp outside the window
    for (auto& s : bs.segments) {
        s.e_lo = std::clamp(s.e_lo, window.lo, window.hi);
        s.e_hi = std::clamp(s.e_hi, window.lo, window.hi);
    }
    detail::sort_segments(bs.segments);
    return bs;
}

/// Lowest edge of the lowest negative band. The kappa search window
/// [0, K] grows by decades until [K, 10 K] holds no spectrum.
inline double spectral_infimum(const LatticeModel& model, RangeMode mode, const ToleranceConfig& tol = {})
{
    const ParamRange range = param_range(model.kind, mode);
    double upper = 4.0;
    for (int decade = 0;; ++decade) {
        if (decade > 12)
            throw NumericError("spectral_infimum: no bounded search window found");
        if (detail::branch_intervals(model, Branch::negative, upper, 10.0 * upper, range, tol).empty())
            break;
        upper *= 10.0;
    }
    const auto intervals = detail::branch_intervals(model, Branch::negative, 0.0, upper, range, tol);
    if (intervals.empty())
        throw NumericError("spectral_infimum: no negative spectrum found");
    double kappa = 0.0;
    for (const auto& iv : intervals)
        kappa = std::max(kappa, iv.hi);
    return energy_of(Branch::negative, kappa);
}

// ---------------------------------------------------------------------------
// Zero-width bands
// ---------------------------------------------------------------------------

enum class LengthProvenance { mechanism, scan };

struct DegenerateLengths {
    std::vector<double> mechanism;  // k = 1 all_pass identity
    std::vector<double> scan;       // band-width minimisation over l
};

/// Edge lengths in (lo, hi) at which the identity left after the parameter
/// drops out at k = 1 holds: cos l = 0 (square), cos 2l = -1/2 (hexagonal).
inline std::vector<double> degenerate_lengths_by_mechanism(LatticeKind kind, double lo, double hi)
{
    std::vector<double> out;
    const double pi = std::numbers::pi;
    std::vector<double> offsets =
        kind == LatticeKind::square ? std::vector<double>{pi / 2.0} : std::vector<double>{pi / 3.0, 2.0 * pi / 3.0};
    for (long m = static_cast<long>(std::floor(lo / pi)) - 1; m * pi <= hi; ++m)
        for (const double off : offsets) {
            const double l = m * pi + off;
            if (l > lo && l < hi)
                out.push_back(l);
        }
    std::sort(out.begin(), out.end());
    return out;
}

/// Width of the narrowest positive ac band strictly inside (0, k_max^2);
/// bands attached to E = 0 or cut by the window are ignored, a degenerate
/// segment counts as zero.
inline double narrowest_band_width(const LatticeModel& model, double k_max, RangeMode mode,
                                   const ToleranceConfig& tol = {})
{
    const ParamRange range = param_range(model.kind, mode);
    double narrowest = std::numeric_limits<double>::infinity();
    for (const auto& iv : detail::branch_intervals(model, Branch::positive, 0.0, k_max, range, tol)) {
        if (iv.lo <= 0.0 || iv.hi >= k_max)
            continue;
        narrowest = std::min(narrowest, iv.degenerate ? 0.0 : iv.hi * iv.hi - iv.lo * iv.lo);
    }
    return narrowest;
}

/// Zero-width bands by both routes: the k = 1 mechanism, and a scan over l
/// of the narrowest band width whose local minima are polished by golden
/// section (the width is V-shaped around a degenerate length) and kept when
/// the polished width falls below degenerate_width.
inline DegenerateLengths degenerate_band_lengths(LatticeKind kind, double lo, double hi, RangeMode mode,
                                                 const ToleranceConfig& tol = {}, double k_max = 4.0,
                                                 int points_per_unit = 64)
{
    if (!(lo >= 0.0 && lo < hi) || !std::isfinite(hi))
        throw std::invalid_argument("degenerate_band_lengths: window must be bounded and positive");
    DegenerateLengths out;
    out.mechanism = degenerate_lengths_by_mechanism(kind, lo, hi);

    auto width = [&](double l) { return narrowest_band_width(LatticeModel(kind, l), k_max, mode, tol); };
    const int count = std::max(256, static_cast<int>(std::ceil((hi - lo) * points_per_unit)));
    const double step = (hi - lo) / count;
    std::vector<double> ls;
    std::vector<double> ws;
    for (int i = 1; i < count; ++i) {
        ls.push_back(lo + step * i);
        ws.push_back(width(ls.back()));
    }
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (std::size_t i = 1; i + 1 < ls.size(); ++i) {
        if (!(ws[i] <= ws[i - 1] && ws[i] <= ws[i + 1]) || !std::isfinite(ws[i]))
            continue;
        double a = ls[i - 1];
        double b = ls[i + 1];
        double c = b - inv_phi * (b - a);
        double d = a + inv_phi * (b - a);
        double wc = width(c);
        double wd = width(d);
        while (b - a > 1e-14 * b) {
            if (wc <= wd) {
                b = d;
                d = c;
                wd = wc;
                c = b - inv_phi * (b - a);
                wc = width(c);
            } else {
                a = c;
                c = d;
                wc = wd;
                d = a + inv_phi * (b - a);
                wd = width(d);
            }
        }
        const double l_min = wc <= wd ? c : d;
        const double w_min = std::min(wc, wd);
        if (w_min < tol.degenerate_width) {
            if (out.scan.empty() || l_min - out.scan.back() > 10.0 * step)
                out.scan.push_back(l_min);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dispersion sheets
// ---------------------------------------------------------------------------

struct DispersionPoint {
    BlochPoint point;
    int branch_index = 0;  // order of increasing energy at this Bloch point
    double momentum = 0.0; // k for E >= 0, kappa for E < 0
    double energy = 0.0;
    double residual = 0.0; // relative residual of the cleared condition
};

namespace detail {

inline std::vector<DispersionPoint> sheet_roots(const LatticeModel& model, const BlochPoint& point,
                                                const EnergyWindow& window, const ToleranceConfig& tol)
{
    const double p = bloch_param(model.kind, point);
    std::vector<std::pair<double, double>> roots;  // (energy, momentum)
    auto collect = [&](Branch branch, double x_lo, double x_hi) {
        if (!(x_lo < x_hi))
            return;
        auto f = [&](double x) { return condition_terms(model, branch, x).residual(p); };
        for (const auto& bracket : scan_sign_changes_on(f, momentum_nodes(model, branch, x_lo, x_hi, tol), tol)) {
            const double x = find_root(f, bracket, tol);
            if (x <= 0.0)
                continue;
            roots.emplace_back(energy_of(branch, x), x);
        }
    };
    if (window.hi > 0.0)
        collect(Branch::positive, std::sqrt(std::max(window.lo, 0.0)), std::sqrt(window.hi));
    if (window.lo < 0.0)
        collect(Branch::negative, std::sqrt(std::max(-window.hi, 0.0)), std::sqrt(-window.lo));
    std::sort(roots.begin(), roots.end());

    std::vector<DispersionPoint> out;
    int index = 0;
    for (const auto& [e, x] : roots) {
        const Branch branch = e >= 0.0 ? Branch::positive : Branch::negative;
        out.push_back({point, index++, x, e, condition_terms(model, branch, x).relative_residual(p)});
    }
    return out;
}

} // namespace detail

/// Momentum roots of the spectral condition at each point of a
/// grid_n x grid_n Bloch grid, ordered by (theta1, theta2, branch). Flat
/// momenta are not roots of the condition and never appear. The result does
/// not depend on the number of worker threads.
inline std::vector<DispersionPoint> dispersion_sheets(const LatticeModel& model, int grid_n,
                                                      const EnergyWindow& window, const ToleranceConfig& tol = {},
                                                      unsigned threads = 1)
{
    if (grid_n < 2)
        throw std::invalid_argument("dispersion_sheets: grid_n must be >= 2");
    if (!(window.lo < window.hi))
        throw std::invalid_argument("dispersion_sheets: window must be non-degenerate");
    const auto n = static_cast<std::size_t>(grid_n);
    std::vector<std::vector<DispersionPoint>> cells(n * n);
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            const BlochPoint point{torus_coordinate(static_cast<int>(idx / n), grid_n),
                                   torus_coordinate(static_cast<int>(idx % n), grid_n)};
            cells[idx] = detail::sheet_roots(model, point, window, tol);
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n * n)));
    if (threads == 1) {
        work(0, n * n);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(threads);
        const std::size_t chunk = (n * n + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t begin = t * chunk;
            if (begin >= n * n)
                break;
            pool.emplace_back([&, t, begin] {
                try {
                    work(begin, std::min(n * n, begin + chunk));
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool)
            th.join();
        for (const auto& err : errors)
            if (err)
                std::rethrow_exception(err);
    }
    std::vector<DispersionPoint> out;
    for (auto& cell : cells)
        out.insert(out.end(), cell.begin(), cell.end());
    return out;
}

} // namespace qgraph
