#include <catch_amalgamated.hpp>

#include <numbers>

#include "oracles.hpp"
#include "qgraph/bands.hpp"

using namespace qgraph;

namespace {

double top_negative_edge(const BandStructure& bs)
{
    double edge = -std::numeric_limits<double>::infinity();
    for (const auto& s : bs.ac_segments())
        if (s.e_lo < 0.0)
            edge = std::max(edge, s.e_hi);
    return edge;
}

void check_structure_invariants(const BandStructure& bs)
{
    for (std::size_t i = 0; i < bs.segments.size(); ++i) {
        const auto& s = bs.segments[i];
        CHECK(s.e_lo <= s.e_hi);
        CHECK(s.e_lo >= bs.window.lo);
        CHECK(s.e_hi <= bs.window.hi);
        if (i > 0)
            CHECK(bs.segments[i - 1].e_lo <= s.e_lo);
        if (s.degenerate)
            CHECK(s.e_lo == s.e_hi);
    }
    // ac segments do not overlap
    const auto ac = bs.ac_segments();
    for (std::size_t i = 1; i < ac.size(); ++i)
        CHECK(ac[i - 1].e_hi <= ac[i].e_lo);
}

} // namespace

TEST_CASE("square negative band reaches zero for l <= 2 and stays below for l > 2", "[bands]")
{
    const auto bs15 = band_structure(LatticeModel(LatticeKind::square, 1.5), {-5.0, 0.0}, RangeMode::derived);
    check_structure_invariants(bs15);
    CHECK(std::abs(top_negative_edge(bs15)) <= 1e-9);

    const auto bs3 = band_structure(LatticeModel(LatticeKind::square, 3.0), {-5.0, 0.0}, RangeMode::derived);
    CHECK(top_negative_edge(bs3) < 0.0);
}

TEST_CASE("square l = 10 negative band hugs -1 with half-width 4 e^-l", "[bands]")
{
    const LatticeModel model(LatticeKind::square, 10.0);
    const auto bs = band_structure(model, {-2.0, -0.5}, RangeMode::derived);
    const auto ac = bs.ac_segments();
    REQUIRE(ac.size() == 1);
    // (1 - kappa^2) cosh(kappa l) = +-(1 + kappa^2) near kappa = 1 gives
    // kappa = 1 -+ 2 e^-l, hence E = -1 -+ 4 e^-l to first order
    const double half = 4.0 * std::exp(-10.0);
    CHECK(std::abs(ac[0].e_lo - (-1.0 - half)) < 1e-6);
    CHECK(std::abs(ac[0].e_hi - (-1.0 + half)) < 1e-6);
    // exact edges by bisection on the two sign choices
    auto edge = [](double sign, double lo, double hi) {
        auto g = [sign](double q) { return (1.0 - q * q) * std::cosh(10.0 * q) - sign * (1.0 + q * q); };
        const bool g_lo = g(lo) > 0.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            ((g(mid) > 0.0) == g_lo ? lo : hi) = mid;
        }
        return -0.25 * (lo + hi) * (lo + hi);
    };
    CHECK(std::abs(ac[0].e_lo - edge(-1.0, 1.0, 1.01)) < 1e-12);
    CHECK(std::abs(ac[0].e_hi - edge(1.0, 0.99, 1.0)) < 1e-12);
    // the oracle confirms both edges from the inside and the outside
    const double eps = 1e-6 * half;
    CHECK(brillouin_membership_oracle(model, ac[0].e_lo + eps, 256));
    CHECK(brillouin_membership_oracle(model, ac[0].e_hi - eps, 256));
    CHECK_FALSE(brillouin_membership_oracle(model, ac[0].e_lo - 0.01 * half, 256));
    CHECK_FALSE(brillouin_membership_oracle(model, ac[0].e_hi + 0.01 * half, 256));
}

TEST_CASE("band edges solve the condition at a range endpoint", "[bands]")
{
    const ToleranceConfig tol;
    for (const auto kind : {LatticeKind::square, LatticeKind::hexagonal}) {
        for (const double l : {0.7, 1.5, 3.0}) {
            const LatticeModel model(kind, l);
            const ParamRange range = param_range(kind, RangeMode::derived);
            const EnergyWindow window{-20.0, 60.0};
            const auto bs = band_structure(model, window, RangeMode::derived, tol);
            check_structure_invariants(bs);
            for (const auto& s : bs.ac_segments()) {
                if (s.degenerate)
                    continue;
                for (const double e : {s.e_lo, s.e_hi}) {
                    if (e == window.lo || e == window.hi || e == 0.0 || e == 1.0)
                        continue;
                    const auto r = required_param(model, e, tol);
                    REQUIRE(r.kind == ParamRequirement::Kind::value);
                    const double to_edge = std::min(std::abs(r.value - range.lo), std::abs(r.value - range.hi));
                    CHECK(to_edge <= 1e-9 * std::max(1.0, std::abs(r.value)));
                }
            }
        }
    }
}

TEST_CASE("band structure agrees with the Brillouin oracle at segment midpoints and gap midpoints", "[bands]")
{
    for (const auto kind : {LatticeKind::square, LatticeKind::hexagonal}) {
        for (const double l : {0.5, 1.0, 2.5}) {
            const LatticeModel model(kind, l);
            const auto bs = band_structure(model, {-15.0, 40.0}, RangeMode::derived);
            const auto ac = bs.ac_segments();
            for (std::size_t i = 0; i < ac.size(); ++i) {
                if (ac[i].width() > 1e-6)
                    CHECK(brillouin_membership_oracle(model, 0.5 * (ac[i].e_lo + ac[i].e_hi), 256));
                if (i + 1 < ac.size() && ac[i + 1].e_lo - ac[i].e_hi > 1e-6) {
                    const double mid = 0.5 * (ac[i].e_hi + ac[i + 1].e_lo);
                    if (mid != 0.0 && !is_flat_momentum(model, std::sqrt(std::abs(mid))))
                        CHECK_FALSE(brillouin_membership_oracle(model, mid, 256));
                }
            }
        }
    }
}

TEST_CASE("hexagonal first positive band leaves zero below l = 2/sqrt3", "[bands]")
{
    // Near k = 0 the positive condition needs d = 3 + k^2 (6 - 9 l^2 / 2) + O(k^4),
    // inside the range d <= 3 only when l >= 2/sqrt3.
    const LatticeModel short_edge(LatticeKind::hexagonal, 1.0);
    const auto bs = band_structure(short_edge, {0.0, 4.0}, RangeMode::derived);
    const auto ac = bs.ac_segments();
    REQUIRE_FALSE(ac.empty());
    CHECK(ac.front().e_lo > 1.0);
    for (const double e : {0.05, 0.3, 0.9})
        CHECK_FALSE(brillouin_membership_oracle(short_edge, e, 256));

    const LatticeModel long_edge(LatticeKind::hexagonal, 1.3);
    const auto bs2 = band_structure(long_edge, {0.0, 4.0}, RangeMode::derived);
    REQUIRE_FALSE(bs2.ac_segments().empty());
    CHECK(bs2.ac_segments().front().e_lo == 0.0);
    for (const double e : {1e-3, 0.05, 0.3})
        CHECK(brillouin_membership_oracle(long_edge, e, 256));
}

TEST_CASE("hexagonal negative spectrum sits on both sides of -3", "[bands]")
{
    for (const double l : {2.0, 5.0, 10.0}) {
        const LatticeModel model(LatticeKind::hexagonal, l);
        for (const auto mode : {RangeMode::derived, RangeMode::paper}) {
            const auto bs = band_structure(model, {-10.0, -1e-6}, mode);
            bool below = false;
            bool above = false;
            for (const auto& s : bs.ac_segments()) {
                below = below || s.e_lo < -3.0;
                above = above || s.e_hi > -3.0;
            }
            CHECK(below);
            CHECK(above);
        }
    }
}

TEST_CASE("spectral infimum", "[bands]")
{
    for (const double l : {0.3, 1.0, 2.0, 5.0}) {
        CHECK(spectral_infimum(LatticeModel(LatticeKind::square, l), RangeMode::derived) < -1.0);
        CHECK(spectral_infimum(LatticeModel(LatticeKind::hexagonal, l), RangeMode::derived) < -3.0);
    }
    const double inf = spectral_infimum(LatticeModel(LatticeKind::square, 0.01), RangeMode::derived);
    CHECK(std::abs(inf + 200.0) < 20.0);
    // just below the infimum nothing, just above something
    const LatticeModel model(LatticeKind::square, 0.7);
    const double i7 = spectral_infimum(model, RangeMode::derived);
    CHECK_FALSE(brillouin_membership_oracle(model, i7 - 1e-6, 256));
    CHECK(brillouin_membership_oracle(model, i7 + 1e-6, 256));
}

TEST_CASE("square gaps are centred on the flat momenta", "[bands]")
{
    const double l = 2.0;
    const LatticeModel model(LatticeKind::square, l);
    for (const int m : {5, 10, 20, 40}) {
        const double k = m * std::numbers::pi / l;
        const auto bs = band_structure(model, {std::pow(k - 0.5 * std::numbers::pi / l, 2),
                                               std::pow(k + 0.5 * std::numbers::pi / l, 2)},
                                       RangeMode::derived);
        double below = 0.0;
        double above = 0.0;
        for (const auto& s : bs.ac_segments()) {
            if (s.momentum_hi < k)
                below = s.momentum_hi;
            if (s.momentum_lo > k && above == 0.0)
                above = s.momentum_lo;
        }
        REQUIRE(below > 0.0);
        REQUIRE(above > 0.0);
        CHECK(std::abs(0.5 * (below + above) - k) < 1.0 / m);
    }
}

TEST_CASE("degenerate lengths", "[bands]")
{
    const double pi = std::numbers::pi;
    const auto sq = degenerate_band_lengths(LatticeKind::square, 0.0, 2.0 * pi, RangeMode::derived);
    REQUIRE(sq.mechanism.size() == 2);
    CHECK(sq.mechanism[0] == Catch::Approx(pi / 2.0));
    CHECK(sq.mechanism[1] == Catch::Approx(3.0 * pi / 2.0));
    REQUIRE(sq.scan.size() == 2);
    CHECK(std::abs(sq.scan[0] - pi / 2.0) < 1e-6);
    CHECK(std::abs(sq.scan[1] - 3.0 * pi / 2.0) < 1e-6);

    const auto hx = degenerate_band_lengths(LatticeKind::hexagonal, 0.0, 2.0 * pi, RangeMode::derived);
    const std::vector<double> expected{pi / 3.0, 2.0 * pi / 3.0, 4.0 * pi / 3.0, 5.0 * pi / 3.0};
    REQUIRE(hx.mechanism.size() == 4);
    REQUIRE(hx.scan.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(hx.mechanism[i] == Catch::Approx(expected[i]));
        CHECK(std::abs(hx.scan[i] - expected[i]) < 1e-6);
    }
}

TEST_CASE("zero-width bands appear as degenerate ac segments at E = 1", "[bands]")
{
    const double pi = std::numbers::pi;
    for (const auto& [kind, l] : {std::pair{LatticeKind::hexagonal, pi / 3.0}, std::pair{LatticeKind::hexagonal, 2.0 * pi / 3.0},
                                  std::pair{LatticeKind::square, pi / 2.0}}) {
        const auto bs = band_structure(LatticeModel(kind, l), {0.0, 2.0}, RangeMode::derived);
        bool found = false;
        for (const auto& s : bs.segments)
            found = found || (s.kind == SegmentKind::ac && s.degenerate && std::abs(s.e_lo - 1.0) < 1e-12);
        CHECK(found);
    }
    // away from those lengths E = 1 is not in the spectrum
    CHECK_FALSE(is_member(LatticeModel(LatticeKind::hexagonal, 1.2), 1.0, RangeMode::derived));
}

TEST_CASE("dispersion sheets", "[bands]")
{
    const LatticeModel model(LatticeKind::square, std::numbers::pi);
    const auto pts = dispersion_sheets(model, 2, {0.0, 16.0});
    REQUIRE_FALSE(pts.empty());
    for (const auto& p : pts) {
        CHECK(p.residual < 1e-10);
        CHECK_FALSE(is_flat_momentum(model, p.momentum));
    }

    // root counts at each Bloch point against a 100x denser sign-change scan
    for (const auto kind : {LatticeKind::square, LatticeKind::hexagonal}) {
        const LatticeModel m(kind, 1.3);
        const auto sheets = dispersion_sheets(m, 4, {0.0, 36.0});
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                const BlochPoint bp{torus_coordinate(i, 4), torus_coordinate(j, 4)};
                const double p = bloch_param(kind, bp);
                auto f = [&](double x) { return condition_terms(m, Branch::positive, x).residual(p); };
                const int dense = oracle::dense_sign_changes(f, 1e-9, 6.0, 100000);
                int got = 0;
                for (const auto& s : sheets)
                    if (s.point.theta1 == bp.theta1 && s.point.theta2 == bp.theta2)
                        ++got;
                CHECK(got == dense);
            }
        }
    }
}

TEST_CASE("dispersion output does not depend on the thread count", "[bands]")
{
    const LatticeModel model(LatticeKind::hexagonal, 1.1);
    const auto one = dispersion_sheets(model, 9, {-8.0, 30.0}, {}, 1);
    const auto four = dispersion_sheets(model, 9, {-8.0, 30.0}, {}, 4);
    REQUIRE(one.size() == four.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].energy == four[i].energy);
        CHECK(one[i].point.theta1 == four[i].point.theta1);
        CHECK(one[i].branch_index == four[i].branch_index);
    }
    CHECK_THROWS_AS(dispersion_sheets(model, 1, {0.0, 1.0}), std::invalid_argument);
}
