#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qgraph/bands.hpp"
#include "qgraph/lattice.hpp"
#include "qgraph/star.hpp"

namespace qgraph {

/// A claimed or computed quantity: one number, a closed interval, or a
/// finite set listed in increasing order.
struct ClaimValue {
    enum class Kind { scalar, interval, set };
    Kind kind = Kind::scalar;
    std::vector<double> values;

    static ClaimValue scalar(double v) { return {Kind::scalar, {v}}; }
    static ClaimValue interval(double lo, double hi) { return {Kind::interval, {lo, hi}}; }
    static ClaimValue set(std::vector<double> v)
    {
        std::sort(v.begin(), v.end());
        return {Kind::set, std::move(v)};
    }
};

/// How the computed value is compared with the claimed one.
enum class Relation { approx_equal, less_than, greater_than, set_equal };

enum class ClaimStatus { pass, deviation, informational };

inline std::string_view to_string(Relation r)
{
    switch (r) {
    case Relation::approx_equal:
        return "approx_equal";
    case Relation::less_than:
        return "less_than";
    case Relation::greater_than:
        return "greater_than";
    case Relation::set_equal:
        return "set_equal";
    }
    return "";
}

inline std::string_view to_string(ClaimStatus s)
{
    switch (s) {
    case ClaimStatus::pass:
        return "pass";
    case ClaimStatus::deviation:
        return "deviation";
    case ClaimStatus::informational:
        return "informational";
    }
    return "";
}

inline std::string_view to_string(ClaimValue::Kind k)
{
    switch (k) {
    case ClaimValue::Kind::scalar:
        return "scalar";
    case ClaimValue::Kind::interval:
        return "interval";
    case ClaimValue::Kind::set:
        return "set";
    }
    return "";
}

struct ClaimRecord {
    std::string claim_id;
    std::string paper_ref;
    ClaimValue paper_value;
    ClaimValue computed_value;
    double tolerance = 0.0;
    Relation relation = Relation::approx_equal;
    ClaimStatus status = ClaimStatus::pass;
    std::string note;
};

/// True when computed stands in the given relation to claimed. Intervals and
/// sets are compared element by element; sets must have equal size.
inline bool relation_holds(Relation r, const ClaimValue& claimed, const ClaimValue& computed, double tolerance)
{
    const auto& p = claimed.values;
    const auto& c = computed.values;
    switch (r) {
    case Relation::less_than:
        return c.size() == 1 && p.size() == 1 && c[0] < p[0] + tolerance;
    case Relation::greater_than:
        return c.size() == 1 && p.size() == 1 && c[0] > p[0] - tolerance;
    case Relation::approx_equal:
    case Relation::set_equal:
        if (c.size() != p.size())
            return false;
        for (std::size_t i = 0; i < c.size(); ++i)
            if (!(std::abs(c[i] - p[i]) <= tolerance))
                return false;
        return true;
    }
    return false;
}

/// A registered paper statement; every record id starts with one of these.
struct RegisteredClaim {
    std::string_view id;
    LatticeKind lattice;
    std::string_view paper_ref;
};

inline const std::vector<RegisteredClaim>& claim_registry()
{
    using K = LatticeKind;
    static const std::vector<RegisteredClaim> registry{
        {"hex.degenerate_lengths", K::hexagonal, "l = {pi/3, 2pi/3} (mod pi)"},
        {"hex.first_positive_band", K::hexagonal,
         "the number of open gaps is always infinite; the first positive band starts at zero if l <= 2/sqrt3, "
         "otherwise a gap between it and the second negative band opens"},
        {"hex.narrow_negative_bands", K::hexagonal,
         "bands centered around -3 of the size ~ 8 e^{-l sqrt3}, separated by a gap of the same size"},
        {"hex.negative_nonempty", K::hexagonal, "inf sigma(H) < -3"},
        {"hex.pair_structure", K::hexagonal,
         "bands appear in pairs centered around pi m / l; widths 4(sqrt3 - 1)/l, the gap between them 8/l"},
        {"hex.second_band_position", K::hexagonal,
         "for l > 2/sqrt3 ~ 1.155 the second band is strictly negative; for l <= 2/sqrt3 it extends to zero"},
        {"hex.threshold_asymptotics", K::hexagonal, "the first band is (-2/l, -2 sqrt3/l) up to O(l^{-1/2})"},
        {"hex.two_negative_bands", K::hexagonal, "the negative spectrum consists of two bands below and above -3"},
        {"square.degenerate_lengths", K::square, "a positive band degenerates to a point for l = (pi/2)(m - 1/2)"},
        {"square.first_positive_band", K::square,
         "for l >= 2 the first positive band starts at zero, for l < 2 it is separated from zero"},
        {"square.gap_width_asymptotics", K::square, "gap width 4/(pi m) + O(m^-2) in momentum, 8/l + O(m^-1) in energy"},
        {"square.negative_extends_to_zero", K::square, "for l <= 2 the negative band extends to zero"},
        {"square.negative_narrow_band", K::square,
         "for large l the negative band is approximately [-1 - 2e^{-l}, -1 + 2e^{-l}] up to O(e^{-2l})"},
        {"square.negative_nonempty", K::square, "negative spectrum is never empty; -1 belongs to the spectrum for any l"},
        {"square.negative_strictly_negative", K::square, "for l > 2 the band is strictly negative"},
        {"square.open_gaps", K::square,
         "the number of open gaps is always infinite; the gaps are centered around the points pi m / l"},
        {"square.threshold_asymptotics", K::square, "inf sigma(H) < -1; inf sigma(H) = -2/l + O(l^{-1/2}) as l -> 0"},
    };
    return registry;
}

inline const RegisteredClaim& registered_claim(std::string_view id)
{
    for (const auto& c : claim_registry())
        if (c.id == id)
            return c;
    throw std::invalid_argument("unregistered claim: " + std::string(id));
}

/// Shortest round-trip text of a double, used in record ids.
inline std::string format_number(double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace detail {

// Constant of the O(.) error terms when they become tolerances.
inline constexpr double asymptotic_constant = 10.0;
inline constexpr int gap_orders[] = {20, 50};
inline constexpr int open_gap_count = 50;
// Edge-length thresholds at which the small- and large-l statements are tested.
inline constexpr double small_length = 0.1;
inline constexpr double large_length = 5.0;

inline ClaimRecord make_record(std::string_view claim, const std::string& suffix, ClaimValue paper,
                               ClaimValue computed, double tolerance, Relation relation, std::string note = {})
{
    ClaimRecord r;
    r.claim_id = std::string(claim) + suffix;
    r.paper_ref = std::string(registered_claim(claim).paper_ref);
    r.paper_value = std::move(paper);
    r.computed_value = std::move(computed);
    r.tolerance = tolerance;
    r.relation = relation;
    r.status = relation_holds(relation, r.paper_value, r.computed_value, tolerance) ? ClaimStatus::pass
                                                                                   : ClaimStatus::deviation;
    r.note = std::move(note);
    return r;
}

inline std::string length_suffix(double l)
{
    return "@l=" + format_number(l);
}

// Records computed once per d-range. When the two computed values differ
// beyond the tolerance the question of the range decides the outcome, so
// both records become informational.
inline void push_range_pair(std::vector<ClaimRecord>& out, ClaimRecord derived, ClaimRecord paper)
{
    derived.claim_id += "/derived";
    paper.claim_id += "/paper";
    if (!relation_holds(Relation::approx_equal, derived.computed_value, paper.computed_value,
                        std::max(derived.tolerance, paper.tolerance))) {
        derived.status = ClaimStatus::informational;
        paper.status = ClaimStatus::informational;
        derived.note += (derived.note.empty() ? "" : "; ") + std::string("differs from the paper d-range result");
        paper.note += (paper.note.empty() ? "" : "; ") + std::string("differs from the derived d-range result");
    }
    out.push_back(std::move(derived));
    out.push_back(std::move(paper));
}

inline std::vector<SpectralSegment> negative_bands(const LatticeModel& model, RangeMode mode,
                                                   const ToleranceConfig& tol)
{
    const double inf = spectral_infimum(model, mode, tol);
    const BandStructure bs = band_structure(model, {2.0 * inf - 1.0, 0.0}, mode, tol);
    std::vector<SpectralSegment> out;
    for (const auto& s : bs.ac_segments())
        if (s.e_lo < 0.0)
            out.push_back(s);
    return out;
}

inline double top_negative_edge(const std::vector<SpectralSegment>& bands)
{
    double edge = -std::numeric_limits<double>::infinity();
    for (const auto& s : bands)
        edge = std::max(edge, s.e_hi);
    return edge;
}

// Lowest positive ac band (non-degenerate), as an energy interval.
inline std::optional<SpectralSegment> first_positive_band(const LatticeModel& model, RangeMode mode,
                                                          const ToleranceConfig& tol)
{
    const double k_hi = 4.0 * std::numbers::pi / model.edge_length + 4.0;
    const BandStructure bs = band_structure(model, {0.0, k_hi * k_hi}, mode, tol);
    for (const auto& s : bs.ac_segments())
        if (!s.degenerate && s.e_hi > 0.0)
            return s;
    return std::nullopt;
}

// Positive ac bands in momentum with k in [k_lo, k_hi].
inline std::vector<MomentumInterval> positive_intervals(const LatticeModel& model, double k_lo, double k_hi,
                                                        RangeMode mode, const ToleranceConfig& tol)
{
    return branch_intervals(model, Branch::positive, k_lo, k_hi, param_range(model.kind, mode), tol);
}

// Momentum gap containing k = pi m / l, bounded by the nearest bands within
// half a period on either side.
inline std::optional<MomentumInterval> gap_at_order(const LatticeModel& model, int m, RangeMode mode,
                                                    const ToleranceConfig& tol)
{
    const double period = std::numbers::pi / model.edge_length;
    const double k = m * period;
    const auto bands = positive_intervals(model, k - 0.5 * period, k + 0.5 * period, mode, tol);
    std::optional<double> below;
    std::optional<double> above;
    for (const auto& iv : bands) {
        if (iv.hi < k)
            below = iv.hi;
        if (iv.lo > k && !above)
            above = iv.lo;
        if (iv.lo <= k && iv.hi >= k)
            return std::nullopt;
    }
    if (!below || !above)
        return std::nullopt;
    return MomentumInterval{*below, *above, false};
}

// Bands within half a period around k = pi m / l.
inline std::vector<MomentumInterval> bands_at_order(const LatticeModel& model, int m, RangeMode mode,
                                                    const ToleranceConfig& tol)
{
    const double period = std::numbers::pi / model.edge_length;
    const double k = m * period;
    std::vector<MomentumInterval> out;
    for (const auto& iv : positive_intervals(model, k - 0.5 * period, k + 0.5 * period, mode, tol))
        if (iv.lo > k - 0.5 * period && iv.hi < k + 0.5 * period)
            out.push_back(iv);
    return out;
}

// Number of orders m = 1..count whose flat momentum pi m / l lies in an open
// gap of the ac spectrum.
inline int open_gaps_up_to(const LatticeModel& model, int count, RangeMode mode, const ToleranceConfig& tol)
{
    const double period = std::numbers::pi / model.edge_length;
    const auto bands = positive_intervals(model, 0.0, (count + 0.5) * period, mode, tol);
    int open = 0;
    for (int m = 1; m <= count; ++m) {
        const double k = m * period;
        bool below = false;
        bool above = false;
        bool inside = false;
        for (const auto& iv : bands) {
            if (iv.degenerate)
                continue;
            below = below || iv.hi < k;
            above = above || iv.lo > k;
            inside = inside || (iv.lo <= k && k <= iv.hi);
        }
        if (below && above && !inside)
            ++open;
    }
    return open;
}

inline std::vector<double> paper_square_degenerate_lengths(double lo, double hi)
{
    std::vector<double> out;
    for (int m = 1;; ++m) {
        const double l = 0.5 * std::numbers::pi * (m - 0.5);
        if (l >= hi)
            break;
        if (l > lo)
            out.push_back(l);
    }
    return out;
}

inline constexpr double degenerate_window = 2.0 * std::numbers::pi;
inline constexpr double degenerate_set_tolerance = 1e-6;

inline void sort_records(std::vector<ClaimRecord>& records)
{
    std::stable_sort(records.begin(), records.end(),
                     [](const ClaimRecord& a, const ClaimRecord& b) { return a.claim_id < b.claim_id; });
}

} // namespace detail

/// Records for the square-lattice statements at each edge length, plus one
/// record for the zero-width band lengths in (0, 2 pi).
inline std::vector<ClaimRecord> verify_square(const std::vector<double>& l_set, const ToleranceConfig& tol = {})
{
    using detail::make_record;
    using V = ClaimValue;
    const double C = detail::asymptotic_constant;
    std::vector<ClaimRecord> out;

    for (const double l : l_set) {
        const LatticeModel model(LatticeKind::square, l);
        const std::string at = detail::length_suffix(l);
        const RangeMode mode = RangeMode::derived;

        const auto negative = detail::negative_bands(model, mode, tol);
        const double upper = detail::top_negative_edge(negative);
        const double inf = spectral_infimum(model, mode, tol);

        out.push_back(make_record("square.negative_nonempty", at, V::scalar(1.0),
                                  V::scalar(is_member(model, -1.0, mode, tol) ? 1.0 : 0.0), 0.0,
                                  Relation::approx_equal,
                                  "1 when E = -1 is in the spectrum; negative bands found: " +
                                      std::to_string(negative.size())));

        if (l > 2.0) {
            out.push_back(make_record("square.negative_strictly_negative", at, V::scalar(0.0), V::scalar(upper), 0.0,
                                      Relation::less_than, "upper edge of the negative band"));
        } else {
            out.push_back(make_record("square.negative_extends_to_zero", at, V::scalar(0.0), V::scalar(upper),
                                      tol.residual_zero, Relation::approx_equal, "upper edge of the negative band"));
        }

        if (l >= detail::large_length) {
            const double lo = negative.empty() ? std::nan("") : negative.front().e_lo;
            const double hi = negative.empty() ? std::nan("") : negative.back().e_hi;
            out.push_back(make_record("square.negative_narrow_band", at,
                                      V::interval(-1.0 - 2.0 * std::exp(-l), -1.0 + 2.0 * std::exp(-l)),
                                      V::interval(lo, hi), C * std::exp(-2.0 * l), Relation::approx_equal,
                                      "energy interval of the negative spectrum"));
        }

        out.push_back(make_record("square.threshold_asymptotics", at + "/bound", V::scalar(-1.0), V::scalar(inf), 0.0,
                                  Relation::less_than, "inf of the spectrum"));
        if (l <= detail::small_length) {
            out.push_back(make_record("square.threshold_asymptotics", at + "/small_l", V::scalar(-2.0 / l),
                                      V::scalar(inf), C / std::sqrt(l), Relation::approx_equal,
                                      "inf of the spectrum against -2/l"));
        }

        const int open = detail::open_gaps_up_to(model, detail::open_gap_count, mode, tol);
        out.push_back(make_record("square.open_gaps", at + "/count", V::scalar(detail::open_gap_count),
                                  V::scalar(open), 0.0, Relation::approx_equal,
                                  "orders m <= 50 whose flat momentum pi m / l sits in an open gap"));
        for (const int m : detail::gap_orders) {
            const auto gap = detail::gap_at_order(model, m, mode, tol);
            const double k_m = m * std::numbers::pi / l;
            const double offset = gap ? 0.5 * (gap->lo + gap->hi) - k_m : std::nan("");
            out.push_back(make_record("square.open_gaps", at + "/centering/m=" + std::to_string(m), V::scalar(0.0),
                                      V::scalar(offset), C / m, Relation::approx_equal,
                                      "gap midpoint minus pi m / l, in momentum"));
            const double dk = gap ? gap->hi - gap->lo : std::nan("");
            const double de = gap ? gap->hi * gap->hi - gap->lo * gap->lo : std::nan("");
            out.push_back(make_record("square.gap_width_asymptotics", at + "/momentum/m=" + std::to_string(m),
                                      V::scalar(4.0 / (std::numbers::pi * m)), V::scalar(dk), C / (m * m),
                                      Relation::approx_equal, "gap width in momentum"));
            out.push_back(make_record("square.gap_width_asymptotics", at + "/energy/m=" + std::to_string(m),
                                      V::scalar(8.0 / l), V::scalar(de), C / m, Relation::approx_equal,
                                      "gap width in energy"));
        }

        const auto first = detail::first_positive_band(model, mode, tol);
        const double start = first ? first->e_lo : std::nan("");
        if (l >= 2.0) {
            out.push_back(make_record("square.first_positive_band", at, V::scalar(0.0), V::scalar(start),
                                      tol.residual_zero, Relation::approx_equal, "lower edge of the first positive band"));
        } else {
            out.push_back(make_record("square.first_positive_band", at, V::scalar(0.0), V::scalar(start), 0.0,
                                      Relation::greater_than, "lower edge of the first positive band"));
        }
    }

    const auto lengths = degenerate_band_lengths(LatticeKind::square, 0.0, detail::degenerate_window,
                                                 RangeMode::derived, tol);
    ClaimRecord deg = make_record("square.degenerate_lengths", "/scan",
                                  V::set(detail::paper_square_degenerate_lengths(0.0, detail::degenerate_window)),
                                  V::set(lengths.scan), detail::degenerate_set_tolerance, Relation::set_equal,
                                  "zero-width band lengths in (0, 2 pi) by band-width scan");
    deg.status = ClaimStatus::informational;
    deg.note += "; the k = 1 mechanism (cos l = 0) gives the scanned set";
    out.push_back(std::move(deg));
    out.push_back(make_record("square.degenerate_lengths", "/mechanism", V::set(lengths.mechanism),
                              V::set(lengths.scan), detail::degenerate_set_tolerance, Relation::set_equal,
                              "scan against the k = 1 mechanism cos l = 0"));

    detail::sort_records(out);
    return out;
}

/// Records for the hexagonal-lattice statements. Statements that depend on
/// the lower end of the d-range are evaluated under both ranges.
inline std::vector<ClaimRecord> verify_hexagonal(const std::vector<double>& l_set, const ToleranceConfig& tol = {})
{
    using detail::make_record;
    using V = ClaimValue;
    const double C = detail::asymptotic_constant;
    const double sqrt3 = std::numbers::sqrt3;
    const double critical = 2.0 / sqrt3;
    std::vector<ClaimRecord> out;

    for (const double l : l_set) {
        const LatticeModel model(LatticeKind::hexagonal, l);
        const std::string at = detail::length_suffix(l);
        const RangeMode derived = RangeMode::derived;

        const double inf = spectral_infimum(model, derived, tol);
        out.push_back(make_record("hex.negative_nonempty", at, V::scalar(-3.0), V::scalar(inf), 0.0,
                                  Relation::less_than, "inf of the spectrum"));

        const auto negative = detail::negative_bands(model, derived, tol);
        const double upper = detail::top_negative_edge(negative);
        if (l > critical) {
            out.push_back(make_record("hex.second_band_position", at, V::scalar(0.0), V::scalar(upper), 0.0,
                                      Relation::less_than, "upper edge of the negative spectrum"));
        } else {
            out.push_back(make_record("hex.second_band_position", at, V::scalar(0.0), V::scalar(upper),
                                      tol.residual_zero, Relation::approx_equal,
                                      "upper edge of the negative spectrum"));
        }

        const auto first = detail::first_positive_band(model, derived, tol);
        const double start = first ? first->e_lo : std::nan("");
        if (l <= critical) {
            out.push_back(make_record("hex.first_positive_band", at, V::scalar(0.0), V::scalar(start),
                                      tol.residual_zero, Relation::approx_equal, "lower edge of the first positive band"));
        } else {
            out.push_back(make_record("hex.first_positive_band", at, V::scalar(0.0), V::scalar(start - upper), 0.0,
                                      Relation::greater_than,
                                      "gap between the negative spectrum and the first positive band"));
        }

        auto per_range = [&](RangeMode mode) {
            std::vector<ClaimRecord> recs;
            const std::string tag = std::string(to_string(mode)) + " d-range";
            const auto neg = detail::negative_bands(model, mode, tol);

            int sides = 0;
            bool below = false;
            bool above = false;
            for (const auto& s : neg) {
                below = below || s.e_lo < -3.0;
                above = above || s.e_hi > -3.0;
            }
            sides = (below ? 1 : 0) + (above ? 1 : 0);
            recs.push_back(make_record("hex.two_negative_bands", at + "/sides", V::scalar(2.0), V::scalar(sides), 0.0,
                                       Relation::approx_equal,
                                       "how many of (-inf, -3) and (-3, 0) meet the spectrum, " + tag));
            recs.push_back(make_record("hex.two_negative_bands", at + "/minus3", V::scalar(0.0),
                                       V::scalar(is_member(model, -3.0, mode, tol) ? 1.0 : 0.0), 0.0,
                                       Relation::approx_equal, "1 when E = -3 is in the spectrum, " + tag));

            if (l >= detail::large_length) {
                const double size = 8.0 * std::exp(-l * sqrt3);
                std::vector<SpectralSegment> near;
                for (const auto& s : neg)
                    if (std::abs(s.e_lo + 3.0) < 1.0 && std::abs(s.e_hi + 3.0) < 1.0)
                        near.push_back(s);
                double widest = 0.0;
                for (const auto& s : near)
                    widest = std::max(widest, s.width());
                const double err = C * std::exp(-2.0 * l * sqrt3);
                recs.push_back(make_record("hex.narrow_negative_bands", at + "/count", V::scalar(2.0),
                                           V::scalar(static_cast<double>(near.size())), 0.0, Relation::approx_equal,
                                           "bands near -3, " + tag));
                recs.push_back(make_record("hex.narrow_negative_bands", at + "/width", V::scalar(size),
                                           V::scalar(widest), err, Relation::approx_equal,
                                           "widest band near -3, " + tag));
                const double gap = near.size() == 2 ? near[1].e_lo - near[0].e_hi : 0.0;
                recs.push_back(make_record("hex.narrow_negative_bands", at + "/gap", V::scalar(size), V::scalar(gap),
                                           err, Relation::approx_equal, "gap between the bands near -3, " + tag));
            }

            if (l <= detail::small_length && !neg.empty()) {
                recs.push_back(make_record("hex.threshold_asymptotics", at,
                                           V::interval(-2.0 * sqrt3 / l, -2.0 / l),
                                           V::interval(neg.front().e_lo, neg.front().e_hi), C / std::sqrt(l),
                                           Relation::approx_equal, "lowest negative band, " + tag));
            }

            recs.push_back(make_record("hex.first_positive_band", at + "/open_gaps",
                                       V::scalar(detail::open_gap_count),
                                       V::scalar(detail::open_gaps_up_to(model, detail::open_gap_count, mode, tol)),
                                       0.0, Relation::approx_equal,
                                       "orders m <= 50 whose flat momentum pi m / l sits in an open gap, " + tag));

            for (const int m : detail::gap_orders) {
                const std::string order = "/m=" + std::to_string(m);
                const auto pair = detail::bands_at_order(model, m, mode, tol);
                recs.push_back(make_record("hex.pair_structure", at + "/count" + order, V::scalar(2.0),
                                           V::scalar(static_cast<double>(pair.size())), 0.0, Relation::approx_equal,
                                           "bands within half a period of pi m / l, " + tag));
                const bool ok = pair.size() == 2;
                const double w_lo = ok ? pair[0].hi * pair[0].hi - pair[0].lo * pair[0].lo : std::nan("");
                const double w_hi = ok ? pair[1].hi * pair[1].hi - pair[1].lo * pair[1].lo : std::nan("");
                const double gap = ok ? pair[1].lo * pair[1].lo - pair[0].hi * pair[0].hi : std::nan("");
                const double width = 4.0 * (sqrt3 - 1.0) / l;
                recs.push_back(make_record("hex.pair_structure", at + "/widths" + order, V::interval(width, width),
                                           V::interval(w_lo, w_hi), C / m, Relation::approx_equal,
                                           "energy widths of the lower and upper band of the pair, " + tag));
                recs.push_back(make_record("hex.pair_structure", at + "/gap" + order, V::scalar(8.0 / l),
                                           V::scalar(gap), C / m, Relation::approx_equal,
                                           "energy gap inside the pair, " + tag));
            }
            return recs;
        };

        auto with_derived = per_range(RangeMode::derived);
        auto with_paper = per_range(RangeMode::paper);
        for (std::size_t i = 0; i < with_derived.size(); ++i)
            detail::push_range_pair(out, std::move(with_derived[i]), std::move(with_paper[i]));
    }

    const auto lengths = degenerate_band_lengths(LatticeKind::hexagonal, 0.0, detail::degenerate_window,
                                                 RangeMode::derived, tol);
    const double pi = std::numbers::pi;
    out.push_back(make_record("hex.degenerate_lengths", "/scan",
                              V::set({pi / 3.0, 2.0 * pi / 3.0, 4.0 * pi / 3.0, 5.0 * pi / 3.0}), V::set(lengths.scan),
                              detail::degenerate_set_tolerance, Relation::set_equal,
                              "zero-width band lengths in (0, 2 pi) by band-width scan"));
    out.push_back(make_record("hex.degenerate_lengths", "/mechanism", V::set(lengths.mechanism), V::set(lengths.scan),
                              detail::degenerate_set_tolerance, Relation::set_equal,
                              "scan against the k = 1 mechanism cos 2l = -1/2"));

    detail::sort_records(out);
    return out;
}

/// The three statements of the paper that disagree with direct computation.
/// All records are informational.
inline std::vector<ClaimRecord> verify_inconsistencies(const ToleranceConfig& tol = {})
{
    using V = ClaimValue;
    std::vector<ClaimRecord> out;

    const StarSpectrum n3 = bound_states(3, tol);
    const StarSpectrum n4 = bound_states(4, tol);
    ClaimRecord star;
    star.claim_id = "inconsistency.star_single_eigenvalue";
    star.paper_ref = "a single negative eigenvalue for N = 3, 4 which is equal to -1 and -3, respectively";
    star.paper_value = V::scalar(-1.0);
    star.computed_value = V::scalar(n3.energies.empty() ? std::nan("") : n3.energies.front());
    star.tolerance = 1e-10;
    star.note = "N = 3; for N = 4 the computed eigenvalue is " +
        format_number(n4.energies.empty() ? std::nan("") : n4.energies.front()) +
        "; the square lattice (N = 4) negative band sits at -1 and the hexagonal (N = 3) bands at -3, as "
        "kappa = tan(pi m / N) gives";
    out.push_back(star);

    const ParamRange derived = param_range(LatticeKind::hexagonal, RangeMode::derived);
    ClaimRecord range;
    range.claim_id = "inconsistency.d_theta_minimum";
    range.paper_ref = "d_theta in [-1, 3]";
    range.paper_value = V::scalar(-1.0);
    range.computed_value = V::scalar(derived.lo);
    range.tolerance = 1e-9;
    range.note = "minimum of cos t1 + cos(t1 - t2) + cos t2 by grid search and Newton polishing, attained at "
                 "(2pi/3, -2pi/3); maximum " +
        format_number(derived.hi) + "; with the derived minimum E = -3 lies in the spectrum and the gap at -3 closes";
    out.push_back(range);

    const auto lengths = degenerate_band_lengths(LatticeKind::square, 0.0, detail::degenerate_window,
                                                 RangeMode::derived, tol);
    ClaimRecord deg;
    deg.claim_id = "inconsistency.square_degenerate_lengths";
    deg.paper_ref = "l = (pi/2)(m - 1/2)";
    deg.paper_value = V::set(detail::paper_square_degenerate_lengths(0.0, detail::degenerate_window));
    deg.computed_value = V::set(lengths.scan);
    deg.tolerance = detail::degenerate_set_tolerance;
    deg.relation = Relation::set_equal;
    deg.note = "band-width scan over (0, 2 pi); matches cos l = 0 from the k = 1 reduction, i.e. l = pi/2 (mod pi)";
    out.push_back(deg);

    for (auto& r : out)
        r.status = ClaimStatus::informational;
    detail::sort_records(out);
    return out;
}

} // namespace qgraph
