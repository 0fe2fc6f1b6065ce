#include <catch_amalgamated.hpp>

#include <numbers>

#include "oracles.hpp"
#include "qgraph/lattice.hpp"

using namespace qgraph;

TEST_CASE("edge length is validated", "[lattice]")
{
    CHECK_THROWS_AS(LatticeModel(LatticeKind::square, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(LatticeModel(LatticeKind::hexagonal, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(LatticeModel(LatticeKind::square, std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
}

TEST_CASE("Bloch parameter ranges", "[lattice]")
{
    const ParamRange sq = param_range(LatticeKind::square, RangeMode::derived);
    CHECK(sq.lo == -1.0);
    CHECK(sq.hi == 1.0);

    const ParamRange hex = param_range(LatticeKind::hexagonal, RangeMode::derived);
    const auto [lo, hi] = oracle::hex_param_extrema(999);
    CHECK(std::abs(hex.lo + 1.5) < 1e-12);
    CHECK(std::abs(hex.hi - 3.0) < 1e-12);
    CHECK(hex.lo <= lo + 1e-12);
    CHECK(hex.hi >= hi - 1e-12);
    CHECK(std::abs(lo + 1.5) < 1e-4);
    CHECK(bloch_param(LatticeKind::hexagonal, {2.0 * std::numbers::pi / 3.0, -2.0 * std::numbers::pi / 3.0}) ==
          Catch::Approx(-1.5).margin(1e-14));

    const ParamRange paper = param_range(LatticeKind::hexagonal, RangeMode::paper);
    CHECK(paper.lo == -1.0);
    CHECK(paper.hi == 3.0);
}

TEST_CASE("square Bloch parameter is the half sum of cosines", "[lattice]")
{
    oracle::Gen gen(17);
    for (int rep = 0; rep < 100; ++rep) {
        const BlochPoint p{gen.uniform(-3.2, 3.2), gen.uniform(-3.2, 3.2)};
        CHECK(std::abs(bloch_param(LatticeKind::square, p) - 0.5 * (std::cos(p.theta1) + std::cos(p.theta2))) <
              1e-14);
    }
}

TEST_CASE("cleared conditions match the fractional forms away from singular points", "[lattice]")
{
    oracle::Gen gen(19);
    for (int rep = 0; rep < 200; ++rep) {
        const double l = gen.uniform(0.2, 4.0);
        const double x = gen.uniform(0.05, 6.0);
        if (std::abs(x - 1.0) < 1e-3 || std::abs(x - std::sqrt(3.0)) < 1e-3)
            continue;
        const LatticeModel sq(LatticeKind::square, l);
        const LatticeModel hx(LatticeKind::hexagonal, l);
        // cos kl = c (1 - k^2)/(1 + k^2)  =>  c = cos kl (1 + k^2)/(1 - k^2)
        const auto p_sq = required_param(sq, x * x);
        REQUIRE(p_sq.kind == ParamRequirement::Kind::value);
        CHECK(p_sq.value == Catch::Approx(std::cos(x * l) * (1 + x * x) / (1 - x * x)).epsilon(1e-12));
        // cosh kappa l = c (1 + kappa^2)/(1 - kappa^2)
        const auto n_sq = required_param(sq, -x * x);
        CHECK(n_sq.value == Catch::Approx(std::cosh(x * l) * (1 - x * x) / (1 + x * x)).epsilon(1e-12));
        // hexagonal: d = (k^4 - 6k^2 - 3 - (k^2 + 3)^2 cos 2kl) / (4 (k^2 - 1))
        const double k2 = x * x;
        const auto p_hx = required_param(hx, k2);
        CHECK(p_hx.value == Catch::Approx((k2 * k2 - 6 * k2 - 3 - (k2 + 3) * (k2 + 3) * std::cos(2 * x * l)) /
                                          (4 * (k2 - 1)))
                                .epsilon(1e-12));
    }
    CHECK_THROWS_AS(required_param(LatticeModel(LatticeKind::square, 1.0), 0.0), std::invalid_argument);
}

TEST_CASE("the parameter drops out at k = 1", "[lattice]")
{
    const LatticeModel sq(LatticeKind::square, std::numbers::pi / 2.0);
    CHECK(required_param(sq, 1.0).kind == ParamRequirement::Kind::all_pass);
    const LatticeModel sq2(LatticeKind::square, 1.0);
    CHECK(required_param(sq2, 1.0).kind == ParamRequirement::Kind::no_pass);
    const LatticeModel hx(LatticeKind::hexagonal, std::numbers::pi / 3.0);
    CHECK(required_param(hx, 1.0).kind == ParamRequirement::Kind::all_pass);
    // kappa = 1 on the square lattice is regular in cleared form: c = 0
    const auto r = required_param(LatticeModel(LatticeKind::square, 3.0), -1.0);
    CHECK(r.kind == ParamRequirement::Kind::value);
    CHECK(r.value == 0.0);
}

TEST_CASE("membership examples", "[lattice]")
{
    for (const double l : {0.25, 1.0, 2.0, 5.0, 10.0})
        CHECK(is_member(LatticeModel(LatticeKind::square, l), -1.0, RangeMode::derived));
    const LatticeModel sq10(LatticeKind::square, 10.0);
    CHECK_FALSE(is_member(sq10, -0.5, RangeMode::derived));
    CHECK_FALSE(brillouin_membership_oracle(sq10, -0.5, 128));
    CHECK(brillouin_membership_oracle(sq10, -1.0, 128));

    const LatticeModel hx(LatticeKind::hexagonal, 2.0);
    CHECK(is_member(hx, -3.0, RangeMode::derived));
    CHECK_FALSE(is_member(hx, -3.0, RangeMode::paper));
    // the minimum d = -3/2 sits at theta = (2pi/3, -2pi/3), on the grid only when 6 | n
    CHECK(brillouin_membership_oracle(hx, -3.0, 510));
    CHECK_FALSE(brillouin_membership_oracle(hx, -3.0, 512));
}

TEST_CASE("flat bands", "[lattice]")
{
    const LatticeModel sq(LatticeKind::square, std::numbers::pi);
    const auto flats = flat_bands(sq, {0.0, 10.0});
    REQUIRE(flats.size() == 4);
    for (int m = 0; m < 4; ++m) {
        CHECK(flats[static_cast<std::size_t>(m)].kind == SegmentKind::flat);
        CHECK(flats[static_cast<std::size_t>(m)].e_lo == Catch::Approx(m * m).margin(1e-12));
    }
    const LatticeModel hx(LatticeKind::hexagonal, 2.0);
    const auto hf = flat_bands(hx, {1e-9, 25.0});
    REQUIRE(hf.size() == 3);
    CHECK(hf[0].momentum_lo == Catch::Approx(std::numbers::pi / 2.0));
    CHECK(hf[2].momentum_lo == Catch::Approx(3.0 * std::numbers::pi / 2.0));
    for (const double l : {0.3, 1.0, 7.0}) {
        const auto f = flat_bands(LatticeModel(LatticeKind::square, l), {-1.0, 1.0});
        REQUIRE_FALSE(f.empty());
        CHECK(f.front().e_lo == 0.0);
        CHECK(brillouin_membership_oracle(LatticeModel(LatticeKind::hexagonal, l),
                                          std::pow(std::numbers::pi / l, 2), 64));
    }
}

TEST_CASE("assembled determinant agrees with cofactor expansion and the factored form", "[lattice]")
{
    oracle::Gen gen(23);
    for (const auto kind : {LatticeKind::square, LatticeKind::hexagonal}) {
        for (int rep = 0; rep < 40; ++rep) {
            const LatticeModel model(kind, gen.uniform(0.3, 4.0));
            const BlochPoint p{gen.uniform(-3.1, 3.1), gen.uniform(-3.1, 3.1)};
            const Complex k = rep % 3 == 0 ? Complex{0.0, gen.uniform(0.1, 3.0)} : Complex{gen.uniform(0.1, 6.0), 0.0};
            const ComplexMatrix m = secular_matrix(model, k, p);
            const double scale = std::max(1.0, hadamard_bound(m));
            const Complex assembled = secular_determinant(model, k, p);
            CHECK(std::abs(assembled - oracle::cofactor_det(m)) <= 1e-11 * scale);
            CHECK(std::abs(assembled - secular_determinant_factored(model, k, p)) <= 1e-10 * scale);
        }
    }
}

TEST_CASE("determinant vanishes at flat momenta for every Bloch point", "[lattice]")
{
    oracle::Gen gen(29);
    for (const auto kind : {LatticeKind::square, LatticeKind::hexagonal}) {
        const LatticeModel model(kind, 1.7);
        for (int m = 1; m <= 4; ++m) {
            const Complex k{m * std::numbers::pi / model.edge_length, 0.0};
            const BlochPoint p{gen.uniform(-3, 3), gen.uniform(-3, 3)};
            const ComplexMatrix mat = secular_matrix(model, k, p);
            CHECK(std::abs(secular_determinant(model, k, p)) < 1e-10 * hadamard_bound(mat));
        }
    }
}

TEST_CASE("oracle argument validation", "[lattice]")
{
    CHECK_THROWS_AS(brillouin_membership_oracle(LatticeModel(LatticeKind::square, 1.0), 1.0, 32),
                    std::invalid_argument);
}
