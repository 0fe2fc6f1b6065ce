#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qgraph/qgraph.hpp"

namespace qgraph::cli {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_numeric = 2, exit_deviation = 3 };

/// Locale-independent text with 17 significant digits.
inline std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline nlohmann::json value_to_json(const ClaimValue& v)
{
    auto number = [](double x) -> nlohmann::json {
        if (std::isfinite(x))
            return x;
        return nullptr;
    };
    if (v.kind == ClaimValue::Kind::scalar && v.values.size() == 1)
        return number(v.values.front());
    nlohmann::json arr = nlohmann::json::array();
    for (const double x : v.values)
        arr.push_back(number(x));
    return arr;
}

inline nlohmann::json record_to_json(const ClaimRecord& r)
{
    nlohmann::json j;
    j["claim_id"] = r.claim_id;
    j["paper_ref"] = r.paper_ref;
    j["value_kind"] = std::string(to_string(r.paper_value.kind));
    j["paper_value"] = value_to_json(r.paper_value);
    j["computed_value"] = value_to_json(r.computed_value);
    j["tolerance"] = r.tolerance;
    j["relation"] = std::string(to_string(r.relation));
    j["status"] = std::string(to_string(r.status));
    j["note"] = r.note;
    return j;
}

/// Report object: {"model": ..., "claims": [...]}; claims in the given order.
inline nlohmann::json report_to_json(const nlohmann::json& model, const std::vector<ClaimRecord>& records)
{
    nlohmann::json j;
    j["model"] = model;
    j["claims"] = nlohmann::json::array();
    for (const auto& r : records)
        j["claims"].push_back(record_to_json(r));
    return j;
}

namespace detail {

struct Output {
    std::string format = "csv";
    std::string path;
};

inline void add_output_options(CLI::App* sub, Output& o, bool csv_allowed = true)
{
    if (csv_allowed)
        sub->add_option("--format", o.format, "Output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
    sub->add_option("--output,-o", o.path, "Write to this file instead of standard output");
}

inline void emit(const Output& o, std::ostream& out, const std::string& text)
{
    if (o.path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(o.path, std::ios::binary);
    if (!file)
        throw UsageError("cannot open output file: " + o.path);
    file << text;
}

inline std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows)
{
    std::string text;
    for (std::size_t i = 0; i < header.size(); ++i)
        text += (i ? "," : "") + header[i];
    text += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            text += (i ? "," : "") + row[i];
        text += '\n';
    }
    return text;
}

inline const std::map<std::string, LatticeKind>& lattice_names()
{
    static const std::map<std::string, LatticeKind> names{
        {"square", LatticeKind::square}, {"hex", LatticeKind::hexagonal}, {"hexagonal", LatticeKind::hexagonal}};
    return names;
}

inline const std::map<std::string, RangeMode>& range_names()
{
    static const std::map<std::string, RangeMode> names{{"derived", RangeMode::derived}, {"paper", RangeMode::paper}};
    return names;
}

inline std::string lower(std::string text)
{
    std::transform(text.begin(), text.end(), text.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return text;
}

inline std::vector<double> parse_lengths(const std::string& text)
{
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string item = text.substr(pos, comma - pos);
        double v = 0.0;
        const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || res.ec != std::errc{} || res.ptr != item.data() + item.size())
            throw UsageError("malformed length list: " + text);
        if (!(v > 0.0) || !std::isfinite(v))
            throw UsageError("lengths must be positive: " + item);
        out.push_back(v);
        pos = comma + 1;
    }
    return out;
}

} // namespace detail

/// Runs one command line. args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Spectra of quantum graphs with the cyclic (orientation-preferring) vertex coupling"};
    app.name("qgraph");
    app.require_subcommand(1);
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    app.add_option("--threads", threads, "Worker threads for grid evaluations")->check(CLI::Range(1u, 1024u));

    // star
    int star_degree = 0;
    detail::Output star_out;
    auto* star = app.add_subcommand("star", "Bound states of the star graph");
    star->add_option("--degree,-n", star_degree, "Vertex degree N (>= 3)")->required();
    detail::add_output_options(star, star_out);

    // smatrix
    int sm_degree = 0;
    double sm_k = 0.0;
    detail::Output sm_out;
    auto* smatrix = app.add_subcommand("smatrix", "On-shell scattering matrix S(k)");
    smatrix->add_option("--degree,-n", sm_degree, "Vertex degree N (>= 3)")->required();
    smatrix->add_option("--k", sm_k, "Momentum k (> 0)")->required();
    detail::add_output_options(smatrix, sm_out);

    // bands
    std::string bands_lattice_name;
    double bands_length = 0.0;
    double emin = -5.0;
    double emax = 10.0;
    std::string bands_range_name = "derived";
    detail::Output bands_out;
    auto* bands = app.add_subcommand("bands", "Band structure in an energy window");
    bands->add_option("--lattice", bands_lattice_name, "square or hex")
        ->required()
        ->check(CLI::IsMember(detail::lattice_names(), CLI::ignore_case));
    bands->add_option("--length,-l", bands_length, "Edge length")->required();
    bands->add_option("--emin", emin, "Lower energy")->capture_default_str();
    bands->add_option("--emax", emax, "Upper energy")->capture_default_str();
    bands->add_option("--range", bands_range_name, "Bloch parameter range: derived or paper")
        ->check(CLI::IsMember(detail::range_names(), CLI::ignore_case))
        ->capture_default_str();
    detail::add_output_options(bands, bands_out);

    // dispersion
    std::string disp_lattice_name;
    double disp_length = 0.0;
    int grid = 16;
    double disp_emin = std::nan("");
    double disp_emax = 10.0;
    detail::Output disp_out;
    auto* dispersion = app.add_subcommand("dispersion", "Momentum roots of the spectral condition on a Bloch grid");
    dispersion->add_option("--lattice", disp_lattice_name, "square or hex")
        ->required()
        ->check(CLI::IsMember(detail::lattice_names(), CLI::ignore_case));
    dispersion->add_option("--length,-l", disp_length, "Edge length")->required();
    dispersion->add_option("--grid", grid, "Grid points per torus direction (>= 2)")->capture_default_str();
    dispersion->add_option("--emin", disp_emin, "Lower energy (default: just below the spectral infimum)");
    dispersion->add_option("--emax", disp_emax, "Upper energy")->capture_default_str();
    detail::add_output_options(dispersion, disp_out);

    // verify
    std::string verify_lattice = "square";
    std::string lengths_text;
    bool strict = false;
    detail::Output verify_out;
    auto* verify = app.add_subcommand("verify", "Check the band-spectrum statements against computation");
    verify->add_option("--lattice", verify_lattice, "square, hex or all")
        ->check(CLI::IsMember({"square", "hex", "hexagonal", "all"}))
        ->capture_default_str();
    verify->add_option("--lengths", lengths_text, "Comma-separated edge lengths");
    verify->add_flag("--strict", strict, "Exit 3 when any record is a deviation");
    detail::add_output_options(verify, verify_out, false);

    // detcheck
    std::string det_lattice_name;
    double det_length = 0.0;
    int samples = 100;
    std::uint64_t seed = 1;
    detail::Output det_out;
    auto* detcheck = app.add_subcommand("detcheck", "Assembled secular determinant against its factored form");
    detcheck->add_option("--lattice", det_lattice_name, "square or hex")
        ->required()
        ->check(CLI::IsMember(detail::lattice_names(), CLI::ignore_case));
    detcheck->add_option("--length,-l", det_length, "Edge length")->required();
    detcheck->add_option("--samples", samples, "Number of random samples (>= 1)")->capture_default_str();
    detcheck->add_option("--seed", seed, "Random seed")->capture_default_str();
    detail::add_output_options(detcheck, det_out);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "qgraph: " << e.what() << '\n' << app.help();
        return exit_usage;
    }

    auto lattice_of = [](const std::string& name) { return detail::lattice_names().at(detail::lower(name)); };
    try {
        const ToleranceConfig tol = ToleranceConfig::from_environment();

        if (star->parsed()) {
            if (star_degree < 3)
                throw UsageError("--degree must be at least 3");
            const StarSpectrum s = bound_states(star_degree, tol);
            if (star_out.format == "json") {
                nlohmann::json j = nlohmann::json::array();
                for (std::size_t m = 0; m < s.kappas.size(); ++m)
                    j.push_back({{"m", m + 1}, {"kappa", s.kappas[m]}, {"energy", s.energies[m]}});
                detail::emit(star_out, out, j.dump(2) + "\n");
            } else {
                std::vector<std::vector<std::string>> rows;
                for (std::size_t m = 0; m < s.kappas.size(); ++m)
                    rows.push_back({std::to_string(m + 1), format_double(s.kappas[m]), format_double(s.energies[m])});
                detail::emit(star_out, out, detail::csv({"m", "kappa", "energy"}, rows));
            }
            return exit_ok;
        }

        if (smatrix->parsed()) {
            if (sm_degree < 3)
                throw UsageError("--degree must be at least 3");
            if (!(sm_k > 0.0) || !std::isfinite(sm_k))
                throw UsageError("--k must be positive");
            const ScatteringMatrix s = s_matrix(cyclic_coupling(sm_degree), sm_k);
            const double residual = unitarity_residual(s.s);
            if (sm_out.format == "json") {
                nlohmann::json entries = nlohmann::json::array();
                for (Eigen::Index i = 0; i < s.s.rows(); ++i)
                    for (Eigen::Index jj = 0; jj < s.s.cols(); ++jj)
                        entries.push_back({{"i", i}, {"j", jj}, {"re", s.s(i, jj).real()}, {"im", s.s(i, jj).imag()}});
                nlohmann::json j{{"degree", sm_degree}, {"k", sm_k}, {"unitarity_residual", residual},
                                 {"entries", entries}};
                detail::emit(sm_out, out, j.dump(2) + "\n");
            } else {
                std::vector<std::vector<std::string>> rows;
                for (Eigen::Index i = 0; i < s.s.rows(); ++i)
                    for (Eigen::Index jj = 0; jj < s.s.cols(); ++jj)
                        rows.push_back({std::to_string(i), std::to_string(jj), format_double(s.s(i, jj).real()),
                                        format_double(s.s(i, jj).imag()), format_double(residual)});
                detail::emit(sm_out, out, detail::csv({"i", "j", "re", "im", "unitarity_residual"}, rows));
            }
            return exit_ok;
        }

        if (bands->parsed()) {
            const LatticeKind bands_lattice = lattice_of(bands_lattice_name);
            const RangeMode bands_range = detail::range_names().at(detail::lower(bands_range_name));
            if (!(bands_length > 0.0) || !std::isfinite(bands_length))
                throw UsageError("--length must be positive");
            if (!(emin < emax) || !std::isfinite(emin) || !std::isfinite(emax))
                throw UsageError("--emin must be below --emax");
            const BandStructure bs =
                band_structure(LatticeModel(bands_lattice, bands_length), {emin, emax}, bands_range, tol);
            if (bands_out.format == "json") {
                nlohmann::json segs = nlohmann::json::array();
                for (std::size_t i = 0; i < bs.segments.size(); ++i) {
                    const auto& s = bs.segments[i];
                    segs.push_back({{"index", i}, {"kind", std::string(to_string(s.kind))},
                                    {"degenerate", s.degenerate}, {"e_lo", s.e_lo}, {"e_hi", s.e_hi}});
                }
                nlohmann::json j{{"lattice", std::string(to_string(bands_lattice))},
                                 {"length", bands_length},
                                 {"range", std::string(to_string(bands_range))},
                                 {"segments", segs}};
                detail::emit(bands_out, out, j.dump(2) + "\n");
            } else {
                std::vector<std::vector<std::string>> rows;
                for (std::size_t i = 0; i < bs.segments.size(); ++i) {
                    const auto& s = bs.segments[i];
                    rows.push_back({std::to_string(i), std::string(to_string(s.kind)), s.degenerate ? "1" : "0",
                                    format_double(s.e_lo), format_double(s.e_hi)});
                }
                detail::emit(bands_out, out, detail::csv({"index", "kind", "degenerate", "e_lo", "e_hi"}, rows));
            }
            return exit_ok;
        }

        if (dispersion->parsed()) {
            const LatticeKind disp_lattice = lattice_of(disp_lattice_name);
            if (!(disp_length > 0.0) || !std::isfinite(disp_length))
                throw UsageError("--length must be positive");
            if (grid < 2)
                throw UsageError("--grid must be at least 2");
            const LatticeModel model(disp_lattice, disp_length);
            double lo = disp_emin;
            if (std::isnan(lo))
                lo = 1.1 * spectral_infimum(model, RangeMode::derived, tol);
            if (!(lo < disp_emax) || !std::isfinite(disp_emax))
                throw UsageError("--emin must be below --emax");
            const auto points = dispersion_sheets(model, grid, {lo, disp_emax}, tol, threads);
            if (disp_out.format == "json") {
                nlohmann::json j = nlohmann::json::array();
                for (const auto& p : points)
                    j.push_back({{"theta1", p.point.theta1}, {"theta2", p.point.theta2}, {"branch", p.branch_index},
                                 {"momentum", p.momentum}, {"energy", p.energy}, {"residual", p.residual}});
                detail::emit(disp_out, out, j.dump(2) + "\n");
            } else {
                std::vector<std::vector<std::string>> rows;
                rows.reserve(points.size());
                for (const auto& p : points)
                    rows.push_back({format_double(p.point.theta1), format_double(p.point.theta2),
                                    std::to_string(p.branch_index), format_double(p.momentum),
                                    format_double(p.energy), format_double(p.residual)});
                detail::emit(disp_out, out,
                             detail::csv({"theta1", "theta2", "branch", "momentum", "energy", "residual"}, rows));
            }
            return exit_ok;
        }

        if (verify->parsed()) {
            const bool square = verify_lattice == "square" || verify_lattice == "all";
            const bool hex = verify_lattice == "hex" || verify_lattice == "hexagonal" || verify_lattice == "all";
            std::vector<double> square_lengths{1.5, 3.0, 10.0};
            std::vector<double> hex_lengths{2.0};
            if (!lengths_text.empty())
                square_lengths = hex_lengths = detail::parse_lengths(lengths_text);

            std::vector<ClaimRecord> records;
            nlohmann::json model;
            model["lattice"] = verify_lattice == "hexagonal" ? "hex" : verify_lattice;
            if (square) {
                auto r = verify_square(square_lengths, tol);
                records.insert(records.end(), r.begin(), r.end());
                model["square_lengths"] = square_lengths;
            }
            if (hex) {
                auto r = verify_hexagonal(hex_lengths, tol);
                records.insert(records.end(), r.begin(), r.end());
                model["hex_lengths"] = hex_lengths;
                model["d_range"] = {{"derived", {param_range(LatticeKind::hexagonal, RangeMode::derived).lo,
                                                 param_range(LatticeKind::hexagonal, RangeMode::derived).hi}},
                                    {"paper", {-1.0, 3.0}}};
            }
            auto inconsistencies = verify_inconsistencies(tol);
            records.insert(records.end(), inconsistencies.begin(), inconsistencies.end());
            std::stable_sort(records.begin(), records.end(),
                             [](const ClaimRecord& a, const ClaimRecord& b) { return a.claim_id < b.claim_id; });
            model["strict"] = strict;

            detail::emit(verify_out, out, report_to_json(model, records).dump(2) + "\n");
            const bool deviates = std::any_of(records.begin(), records.end(),
                                              [](const ClaimRecord& r) { return r.status == ClaimStatus::deviation; });
            return strict && deviates ? exit_deviation : exit_ok;
        }

        if (detcheck->parsed()) {
            const LatticeKind det_lattice = lattice_of(det_lattice_name);
            if (!(det_length > 0.0) || !std::isfinite(det_length))
                throw UsageError("--length must be positive");
            if (samples < 1)
                throw UsageError("--samples must be at least 1");
            const LatticeModel model(det_lattice, det_length);
            const BlochPoint reference{0.3, -0.4};
            const Complex k_ref{0.7, 0.0};
            const Complex calibration =
                secular_determinant(model, k_ref, reference) / secular_determinant_factored(model, k_ref, reference);

            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> theta(-std::numbers::pi, std::numbers::pi);
            std::uniform_real_distribution<double> momentum(0.05, 10.0);
            std::uniform_real_distribution<double> rate(0.05, 4.0);
            double worst = 0.0;
            for (int s = 0; s < samples; ++s) {
                const BlochPoint p{theta(rng), theta(rng)};
                // every fourth sample on the imaginary axis, i.e. at a negative energy
                const Complex k = s % 4 == 3 ? Complex{0.0, rate(rng)} : Complex{momentum(rng), 0.0};
                const ComplexMatrix m = secular_matrix(model, k, p);
                const Complex diff = det_complex(m) - calibration * secular_determinant_factored(model, k, p);
                worst = std::max(worst, std::abs(diff) / std::max(1.0, hadamard_bound(m)));
            }
            const bool pass = worst < 1e-8;
            if (det_out.format == "json") {
                nlohmann::json j{{"lattice", std::string(to_string(det_lattice))},
                                 {"length", det_length},
                                 {"samples", samples},
                                 {"seed", seed},
                                 {"calibration_re", calibration.real()},
                                 {"calibration_im", calibration.imag()},
                                 {"max_scaled_difference", worst},
                                 {"pass", pass}};
                detail::emit(det_out, out, j.dump(2) + "\n");
            } else {
                detail::emit(det_out, out,
                             detail::csv({"lattice", "length", "samples", "seed", "calibration_re", "calibration_im",
                                          "max_scaled_difference", "pass"},
                                         {{std::string(to_string(det_lattice)), format_double(det_length),
                                           std::to_string(samples), std::to_string(seed),
                                           format_double(calibration.real()), format_double(calibration.imag()),
                                           format_double(worst), pass ? "1" : "0"}}));
            }
            return pass ? exit_ok : exit_numeric;
        }
    } catch (const UsageError& e) {
        err << "qgraph: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        err << "qgraph: " << e.what() << '\n';
        return exit_usage;
    } catch (const NumericError& e) {
        err << "qgraph: numeric failure: " << e.what() << '\n';
        return exit_numeric;
    }
    return exit_usage;
}

} // namespace qgraph::cli
