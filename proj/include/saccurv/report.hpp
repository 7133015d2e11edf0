#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "saccurv/framecalc.hpp"
#include "saccurv/newton.hpp"
#include "saccurv/sacrel.hpp"
#include "saccurv/scalar.hpp"
#include "saccurv/verify.hpp"

namespace saccurv::report {

enum class Format { Json, Csv, Markdown };

inline Format format_from_string(const std::string& s) {
    if (s == "json") return Format::Json;
    if (s == "csv") return Format::Csv;
    if (s == "markdown") return Format::Markdown;
    throw std::invalid_argument("unknown format '" + s + "'");
}

/// Per-order curvature table of one fixture: S_r*, the binomially
/// normalized H_r*, S_r of the transversal operator, the conformal defect
/// J_r* when a conformal pair was detected, and the classification flags.
template <class S>
struct CurvRow {
    std::size_t r;
    S s_star;
    S h_star;
    S s_n;
    std::optional<S> j;
    std::optional<bool> umbilical;
    bool maximal = false;
};

template <class S>
struct CurvatureReport {
    std::string fixture;
    std::string convention;
    std::size_t n = 0;
    std::optional<S> phi, a;
    std::string sac_form; // "", "lambda-xi" or "phiA-aI"
    std::vector<CurvRow<S>> rows;
    std::vector<std::string> notices;
};

template <class S>
CurvatureReport<S> curvature_report(const framecalc::FrameFixture<S>& fx,
                                    sacrel::Convention conv, std::size_t r_max, const S& tol) {
    framecalc::InducedGeometry<S> geom = framecalc::derive_geometry(fx, tol);
    CurvatureReport<S> rep;
    rep.fixture = fx.name;
    rep.convention = sacrel::to_string(conv);
    rep.n = geom.n;
    for (const auto& d : geom.diagnostics)
        rep.notices.push_back("residual " + d.id + " at (" + d.where + "): " +
                              to_string(d.magnitude));

    auto det = framecalc::detect_sac(geom, tol);
    if (det) {
        rep.phi = det->phi;
        rep.a = det->a;
        rep.sac_form =
            det->form == framecalc::SACDetection<S>::Form::MinusAI ? "phiA-aI" : "lambda-xi";
        for (const auto& n : det->notes) rep.notices.push_back(n);
        if (!(det->radical_gap == S(0)))
            rep.notices.push_back("conformal relation residual on E: " +
                                  to_string(det->radical_gap));
    } else {
        rep.notices.push_back("no conformal structure detected");
    }

    Operator<S> a_estar = geom.a_estar;
    Operator<S> a_n = conv == sacrel::Convention::ScreenOnly ? geom.a_n.restricted_to_screen()
                                                             : geom.a_n;
    std::vector<S> s_star = newton::curvatures_from_traces(a_estar);
    std::vector<S> s_n = newton::curvatures_from_traces(a_n);
    s_star.resize(geom.n + 2, S(0));
    s_n.resize(geom.n + 2, S(0));

    auto spec = framecalc::diagonal_spectrum(geom.a_estar);
    std::vector<newton::ClassificationRow<S>> flags;
    if (spec && spec->radical_slot) {
        flags = newton::classify(*spec);
    } else {
        rep.notices.push_back(
            "operator not diagonal in the fixture frame; eigen-based classification skipped");
    }

    const std::size_t maxr = r_max == 0 ? geom.n + 1 : std::min(r_max, geom.n + 1);
    for (std::size_t r = 0; r <= maxr; ++r) {
        CurvRow<S> row;
        row.r = r;
        row.s_star = s_star[r];
        row.h_star = s_star[r] / binomial<S>(geom.n + 1, r);
        row.s_n = s_n[r];
        if (det) row.j = s_n[r] - pow_s(det->phi, r) * s_star[r];
        row.maximal = r >= 1 && s_star[r] == S(0);
        if (!flags.empty() && r >= 1 && r <= flags.size())
            row.umbilical = flags[r - 1].r_umbilical;
        rep.rows.push_back(row);
    }
    return rep;
}

/// Screen-change report: the shape operator and its Newton transforms
/// before and after, with the per-order decomposition of the difference
/// into the counting term, the deleted-function term and the radical-row
/// term. All matrices are expressed in the original tangent frame.
template <class S>
struct ScreenChangeRow {
    std::size_t r;
    Mat<S> before, after;
    Mat<S> term_counting; // (Theta'_r - Theta_r) I
    Mat<S> term_deleted;  // theta_r A_E*
    Mat<S> term_radical;  // B(T'_{r-1} . , N - N') E
    Mat<S> residual;      // after - before - sum of terms
};

template <class S>
struct ScreenChangeReport {
    std::string fixture;
    std::vector<std::string> labels;
    Mat<S> a_before, a_after;
    std::vector<ScreenChangeRow<S>> rows;
    std::vector<std::string> notices;
};

template <class S>
ScreenChangeReport<S> screen_change_report(const framecalc::FrameFixture<S>& fx,
                                           const std::vector<S>& coeffs, std::size_t r_max,
                                           const S& tol) {
    framecalc::InducedGeometry<S> before = framecalc::derive_geometry(fx, tol);
    framecalc::FrameFixture<S> moved = framecalc::screen_change(fx, coeffs);
    framecalc::InducedGeometry<S> after = framecalc::derive_geometry(moved, tol);

    const std::size_t T = before.n + 1;
    // tangent-frame change C: columns are the new tangent vectors in old
    // coordinates (E -> E, Z'_j = Z_j - omega_j E)
    std::vector<S> omega(before.n, S(0));
    S w2(0);
    {
        const auto screens = fx.screen_indices();
        for (std::size_t j = 0; j < screens.size(); ++j)
            for (std::size_t i = 0; i < screens.size(); ++i)
                omega[j] = omega[j] + coeffs[i] * fx.metric(screens[j], screens[i]);
        for (std::size_t i = 0; i < screens.size(); ++i) w2 = w2 + coeffs[i] * omega[i];
    }
    Mat<S> basis = Mat<S>::identity(T), basis_inv = Mat<S>::identity(T);
    for (std::size_t j = 0; j < before.n; ++j) {
        basis(0, j + 1) = S(0) - omega[j];
        basis_inv(0, j + 1) = omega[j];
    }
    auto to_old = [&](const Mat<S>& m) { return basis * m * basis_inv; };

    ScreenChangeReport<S> rep;
    rep.fixture = fx.name;
    rep.labels = before.tangent_labels;
    rep.a_before = before.a_estar.entries;
    rep.a_after = to_old(after.a_estar.entries);

    newton::NewtonFamily<S> fam_before = newton::newton_family(before.a_estar, false);
    newton::NewtonFamily<S> fam_after_new = newton::newton_family(after.a_estar, false);

    // B(X, N - N') over old tangent columns
    std::vector<S> b_shift(T, S(0));
    for (std::size_t j = 0; j < T; ++j) {
        S acc = w2 / S(2) * before.B(j, 0);
        for (std::size_t i = 0; i < before.n; ++i)
            acc = acc - coeffs[i] * before.B(j, i + 1);
        b_shift[j] = acc;
    }

    auto spec_before = framecalc::diagonal_spectrum(before.a_estar);
    auto spec_after = framecalc::diagonal_spectrum(after.a_estar);

    const std::size_t maxr = r_max == 0 ? T : std::min(r_max, T);
    for (std::size_t r = 1; r <= maxr; ++r) {
        ScreenChangeRow<S> row;
        row.r = r;
        row.before = fam_before.transforms[r].entries;
        row.after = to_old(fam_after_new.transforms[r].entries);

        S sign_r = (r % 2 == 0) ? S(1) : S(-1);
        S counting = sign_r * (fam_after_new.curvatures[r] - fam_before.curvatures[r]);
        row.term_counting = counting * Mat<S>::identity(T);

        row.term_deleted = Mat<S>::zero(T, T);
        if (spec_before && spec_after && !(fam_after_new.curvatures == fam_before.curvatures)) {
            // deleted-function gap per eigendirection, applied through A
            S sign_prev = (r % 2 == 1) ? S(1) : S(-1);
            Mat<S> theta(T, T);
            for (std::size_t i = 0; i < T; ++i)
                theta(i, i) = sign_prev * (symfun::sigma_deleted(*spec_after, r - 1, i) -
                                           symfun::sigma_deleted(*spec_before, r - 1, i));
            row.term_deleted = theta * before.a_estar.entries;
        }

        // radical-row term from T'_{r-1}, expressed in old coordinates
        Mat<S> tprev_old = to_old(fam_after_new.transforms[r - 1].entries);
        row.term_radical = Mat<S>::zero(T, T);
        for (std::size_t j = 0; j < T; ++j) {
            S acc(0);
            for (std::size_t k = 0; k < T; ++k) acc = acc + b_shift[k] * tprev_old(k, j);
            row.term_radical(0, j) = acc;
        }

        row.residual = row.after - row.before - row.term_counting - row.term_deleted -
                       row.term_radical;
        rep.rows.push_back(row);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// serialization

template <class S>
nlohmann::json matrix_json(const Mat<S>& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

template <class S>
std::string serialize(const CurvatureReport<S>& rep, Format fmt) {
    if (fmt == Format::Json) {
        nlohmann::json doc;
        doc["fixture"] = rep.fixture;
        doc["convention"] = rep.convention;
        doc["screen_dimension"] = rep.n;
        doc["phi"] = rep.phi ? nlohmann::json(to_string(*rep.phi)) : nlohmann::json();
        doc["a"] = rep.a ? nlohmann::json(to_string(*rep.a)) : nlohmann::json();
        doc["form"] = rep.sac_form;
        doc["notices"] = rep.notices;
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& r : rep.rows) {
            nlohmann::json row;
            row["r"] = r.r;
            row["S_r_star"] = to_string(r.s_star);
            row["H_r_star"] = to_string(r.h_star);
            row["S_r"] = to_string(r.s_n);
            row["J_r_star"] = r.j ? nlohmann::json(to_string(*r.j)) : nlohmann::json();
            row["r_umbilical"] = r.umbilical ? nlohmann::json(*r.umbilical) : nlohmann::json();
            row["r_maximal"] = r.maximal;
            rows.push_back(row);
        }
        doc["rows"] = rows;
        return doc.dump(2) + "\n";
    }
    std::ostringstream out;
    if (fmt == Format::Csv) {
        for (const auto& n : rep.notices) out << "# " << n << "\n";
        out << "r,S_r_star,H_r_star,S_r,J_r_star,r_umbilical,r_maximal\n";
        for (const auto& r : rep.rows) {
            out << r.r << ',' << to_string(r.s_star) << ',' << to_string(r.h_star) << ','
                << to_string(r.s_n) << ',' << (r.j ? to_string(*r.j) : "") << ','
                << (r.umbilical ? (*r.umbilical ? "true" : "false") : "") << ','
                << (r.maximal ? "true" : "false") << "\n";
        }
        return out.str();
    }
    out << "# Curvature table: " << rep.fixture << " (convention " << rep.convention << ")\n\n";
    if (rep.phi)
        out << "Conformal pair: phi = " << to_string(*rep.phi) << ", a = " << to_string(*rep.a)
            << " (" << rep.sac_form << ")\n\n";
    for (const auto& n : rep.notices) out << "* " << n << "\n";
    out << "\n| r | S_r* | H_r* | S_r | J_r* | r-umbilical | r-maximal |\n";
    out << "|---|------|------|-----|------|-------------|----------|\n";
    for (const auto& r : rep.rows) {
        out << "| " << r.r << " | " << to_string(r.s_star) << " | " << to_string(r.h_star)
            << " | " << to_string(r.s_n) << " | " << (r.j ? to_string(*r.j) : "-") << " | "
            << (r.umbilical ? (*r.umbilical ? "yes" : "no") : "-") << " | "
            << (r.maximal ? "yes" : "no") << " |\n";
    }
    return out.str();
}

inline std::string serialize(const verify::VerifyReport& rep, Format fmt) {
    if (fmt == Format::Json) {
        nlohmann::json doc;
        doc["fixture"] = rep.fixture;
        doc["mode"] = rep.mode;
        doc["ok"] = rep.ok;
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& r : rep.rows) {
            nlohmann::json row;
            row["section"] = r.section;
            row["id"] = r.id;
            row["convention"] = r.convention;
            row["scope"] = r.scope;
            row["expected_exact"] = r.expected_exact;
            row["residual"] = r.residual;
            row["pass"] = r.pass;
            rows.push_back(row);
        }
        doc["rows"] = rows;
        return doc.dump(2) + "\n";
    }
    std::ostringstream out;
    if (fmt == Format::Csv) {
        out << "section,id,convention,scope,expected_exact,residual,pass\n";
        for (const auto& r : rep.rows)
            out << r.section << ',' << r.id << ',' << r.convention << ",\"" << r.scope << "\","
                << (r.expected_exact ? "true" : "false") << ',' << r.residual << ','
                << (r.pass ? "true" : "false") << "\n";
        return out.str();
    }
    out << "# Verification: " << rep.fixture << " (" << rep.mode << " mode) — "
        << (rep.ok ? "PASS" : "FAIL") << "\n\n";
    out << "| section | identity | convention | expected exact | max residual | pass |\n";
    out << "|---------|----------|------------|----------------|--------------|------|\n";
    for (const auto& r : rep.rows)
        out << "| " << r.section << " | " << r.id << " | " << r.convention << " | "
            << (r.expected_exact ? "yes" : "audit") << " | " << r.residual << " | "
            << (r.pass ? "ok" : "FAIL") << " |\n";
    return out.str();
}

template <class S>
std::string serialize(const ScreenChangeReport<S>& rep, Format fmt) {
    auto matrix_text = [&](const Mat<S>& m) {
        std::ostringstream out;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            for (std::size_t j = 0; j < m.cols(); ++j)
                out << (j ? " " : "") << to_string(m(i, j));
            out << (i + 1 < m.rows() ? "; " : "");
        }
        return out.str();
    };
    if (fmt == Format::Json) {
        nlohmann::json doc;
        doc["fixture"] = rep.fixture;
        doc["labels"] = rep.labels;
        doc["A_before"] = matrix_json(rep.a_before);
        doc["A_after"] = matrix_json(rep.a_after);
        doc["notices"] = rep.notices;
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& r : rep.rows) {
            nlohmann::json row;
            row["r"] = r.r;
            row["T_before"] = matrix_json(r.before);
            row["T_after"] = matrix_json(r.after);
            row["term_counting"] = matrix_json(r.term_counting);
            row["term_deleted"] = matrix_json(r.term_deleted);
            row["term_radical"] = matrix_json(r.term_radical);
            row["decomposition_residual"] = to_string(r.residual.max_abs());
            rows.push_back(row);
        }
        doc["rows"] = rows;
        return doc.dump(2) + "\n";
    }
    std::ostringstream out;
    if (fmt == Format::Csv) {
        out << "r,T_before,T_after,term_counting,term_deleted,term_radical,decomposition_residual\n";
        for (const auto& r : rep.rows)
            out << r.r << ",\"" << matrix_text(r.before) << "\",\"" << matrix_text(r.after)
                << "\",\"" << matrix_text(r.term_counting) << "\",\"" << matrix_text(r.term_deleted)
                << "\",\"" << matrix_text(r.term_radical) << "\"," << to_string(r.residual.max_abs())
                << "\n";
        return out.str();
    }
    out << "# Screen change: " << rep.fixture << "\n\n";
    out << "A_E* before: " << matrix_text(rep.a_before) << "\n";
    out << "A_E* after:  " << matrix_text(rep.a_after) << "\n\n";
    for (const auto& n : rep.notices) out << "* " << n << "\n";
    for (const auto& r : rep.rows) {
        out << "\n## r = " << r.r << "\n";
        out << "T_before:      " << matrix_text(r.before) << "\n";
        out << "T_after:       " << matrix_text(r.after) << "\n";
        out << "counting term: " << matrix_text(r.term_counting) << "\n";
        out << "deleted term:  " << matrix_text(r.term_deleted) << "\n";
        out << "radical term:  " << matrix_text(r.term_radical) << "\n";
        out << "decomposition residual: " << to_string(r.residual.max_abs()) << "\n";
    }
    return out.str();
}

} // namespace saccurv::report
