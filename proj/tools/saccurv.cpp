// saccurv — curvature tables, identity verification and screen changes for
// half-lightlike submanifold fixtures.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "saccurv/fixture_io.hpp"
#include "saccurv/report.hpp"
#include "saccurv/verify.hpp"

namespace {

using namespace saccurv;

struct CommonOpts {
    std::string fixture;
    std::string mode = "exact";
    std::string format = "json";
    std::string convention = "screen";
    double tol = 1e-9;
    std::size_t r_max = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_convention,
                const std::string& default_convention) {
    cmd->add_option("--fixture", opts.fixture, "fixture file path or bundled name")->required();
    cmd->add_option("--mode", opts.mode, "arithmetic mode")
        ->check(CLI::IsMember({"exact", "float"}))
        ->capture_default_str();
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "markdown"}))
        ->capture_default_str();
    cmd->add_option("--tol", opts.tol, "residual tolerance (float mode only)")
        ->capture_default_str();
    cmd->add_option("--r-max", opts.r_max, "largest order r to report (0 = all)")
        ->capture_default_str();
    if (with_convention) {
        opts.convention = default_convention;
        cmd->add_option("--convention", opts.convention, "spectrum convention for A_N")
            ->check(CLI::IsMember(default_convention == "both"
                                      ? std::vector<std::string>{"full", "screen", "both"}
                                      : std::vector<std::string>{"full", "screen"}))
            ->capture_default_str();
    }
}

template <class S>
S tolerance_of(const CommonOpts& opts) {
    if constexpr (scalar_traits<S>::is_exact)
        return S(0);
    else
        return opts.tol;
}

template <class S>
int run_curv(const CommonOpts& opts) {
    auto fx = framecalc::convert_fixture<S>(framecalc::load_fixture(opts.fixture));
    sacrel::Convention conv = opts.convention == "full" ? sacrel::Convention::Full
                                                        : sacrel::Convention::ScreenOnly;
    auto rep = report::curvature_report(fx, conv, opts.r_max, tolerance_of<S>(opts));
    std::cout << report::serialize(rep, report::format_from_string(opts.format));
    return 0;
}

template <class S>
int run_verify(const CommonOpts& opts) {
    auto fx = framecalc::convert_fixture<S>(framecalc::load_fixture(opts.fixture));
    verify::ConventionChoice choice = opts.convention == "full" ? verify::ConventionChoice::Full
                                      : opts.convention == "screen"
                                          ? verify::ConventionChoice::Screen
                                          : verify::ConventionChoice::Both;
    verify::VerifyReport rep = verify::run_verify(fx, choice, tolerance_of<S>(opts));
    std::cout << report::serialize(rep, report::format_from_string(opts.format));
    if (!rep.ok) {
        for (const auto& row : rep.rows)
            if (!row.pass)
                std::cerr << "FAIL " << row.section << "/" << row.id << " (" << row.convention
                          << ") at " << row.scope << ": residual " << row.residual << "\n";
        return 1;
    }
    return 0;
}

template <class S>
int run_screen_change(const CommonOpts& opts, const std::vector<std::string>& coeff_text) {
    auto fx = framecalc::convert_fixture<S>(framecalc::load_fixture(opts.fixture));
    std::vector<S> coeffs;
    for (const auto& c : coeff_text) coeffs.push_back(scalar_traits<S>::from_rat(parse_rat(c)));
    auto rep = report::screen_change_report(fx, coeffs, opts.r_max, tolerance_of<S>(opts));
    std::cout << report::serialize(rep, report::format_from_string(opts.format));
    return 0;
}

int run_fixture_list() {
    for (const auto& b : framecalc::bundled_fixtures()) {
        auto fx = framecalc::parse_fixture(b.json);
        std::cout << b.name << "  (ambient dim " << fx.dim_total << ", screen dim "
                  << fx.screen_indices().size() << ")\n    " << fx.description << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"higher-order mean curvatures and Newton transformations of "
                 "half-lightlike submanifold fixtures"};
    app.require_subcommand(1);

    CommonOpts curv_opts, verify_opts, change_opts;
    std::vector<std::string> coeff_text;

    CLI::App* curv = app.add_subcommand("curv", "per-order curvature table of a fixture");
    add_common(curv, curv_opts, true, "screen");

    CLI::App* ver = app.add_subcommand("verify", "run every identity suite and the convention audit");
    add_common(ver, verify_opts, true, "both");

    CLI::App* change = app.add_subcommand("screen-change",
                                          "transform the screen distribution and decompose the "
                                          "Newton-transform difference");
    add_common(change, change_opts, false, "");
    change->add_option("coefficients", coeff_text,
                       "characteristic-field coefficients, one per screen direction (p/q)")
        ->required();

    CLI::App* fixtures = app.add_subcommand("fixtures", "bundled fixture operations");
    CLI::App* list = fixtures->add_subcommand("list", "list bundled fixtures");
    fixtures->require_subcommand(1);

    try {
        app.parse(argc, argv);
        if (curv->parsed())
            return curv_opts.mode == "exact" ? run_curv<Rat>(curv_opts)
                                             : run_curv<double>(curv_opts);
        if (ver->parsed())
            return verify_opts.mode == "exact" ? run_verify<Rat>(verify_opts)
                                               : run_verify<double>(verify_opts);
        if (change->parsed())
            return change_opts.mode == "exact"
                       ? run_screen_change<Rat>(change_opts, coeff_text)
                       : run_screen_change<double>(change_opts, coeff_text);
        if (list->parsed()) return run_fixture_list();
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const framecalc::FixtureError& e) {
        std::cerr << "fixture error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
