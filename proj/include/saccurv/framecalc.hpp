#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "saccurv/matrix.hpp"
#include "saccurv/newton.hpp"
#include "saccurv/scalar.hpp"
#include "saccurv/shape_op.hpp"
#include "saccurv/spectrum.hpp"

namespace saccurv::framecalc {

enum class FrameRole { Radical, Screen, Transversal, ScreenTransversal, AmbientOnly };

enum class AmbientConnection { LeviCivita, SemiSymmetricNonMetric };

struct FixtureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A point evaluation of a half-lightlike submanifold: named frame vectors
/// with roles, the ambient metric over the frame, the ambient connection
/// table in frame coordinates, optional Lie brackets, and the structure
/// vector decomposition xi = xi_S + a E + b N + e W. Any coefficient
/// functions are frozen at the fixture's evaluation point.
template <class S>
struct FrameFixture {
    struct FrameVec {
        std::string name;
        FrameRole role;
    };

    std::string name;
    std::string description;
    std::size_t dim_total = 0;
    std::vector<FrameVec> frame;
    Mat<S> metric;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<S>> connection;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<S>> brackets;
    bool has_brackets = false;
    std::vector<S> xi_frame; // coefficients of xi over the frame
    S xi_a{0}, xi_b{0}, xi_e{0};
    AmbientConnection ambient = AmbientConnection::SemiSymmetricNonMetric;
    std::map<std::string, std::string> evaluation_point;
    // Consistency-check ids whose nonzero residuals are documented defects
    // of the source data; the verifier reports them without failing.
    std::vector<std::string> known_findings;

    std::size_t frame_size() const { return frame.size(); }

    std::size_t index_of_role(FrameRole role) const {
        for (std::size_t i = 0; i < frame.size(); ++i)
            if (frame[i].role == role) return i;
        throw FixtureError(name + ": missing frame role");
    }

    std::size_t radical_index() const { return index_of_role(FrameRole::Radical); }
    std::size_t transversal_index() const { return index_of_role(FrameRole::Transversal); }
    std::size_t w_index() const { return index_of_role(FrameRole::ScreenTransversal); }

    std::vector<std::size_t> screen_indices() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < frame.size(); ++i)
            if (frame[i].role == FrameRole::Screen) out.push_back(i);
        return out;
    }

    /// Tangent frame order: radical first, then the screens in frame order.
    std::vector<std::size_t> tangent_indices() const {
        std::vector<std::size_t> out{radical_index()};
        for (std::size_t i : screen_indices()) out.push_back(i);
        return out;
    }

    std::vector<S> connection_at(std::size_t i, std::size_t j) const {
        auto it = connection.find({i, j});
        if (it != connection.end()) return it->second;
        return std::vector<S>(frame_size(), S(0));
    }

    std::vector<S> bracket_at(std::size_t i, std::size_t j) const {
        auto it = brackets.find({i, j});
        if (it != brackets.end()) return it->second;
        auto rev = brackets.find({j, i});
        if (rev != brackets.end()) {
            std::vector<S> out = rev->second;
            for (S& x : out) x = S(0) - x;
            return out;
        }
        return std::vector<S>(frame_size(), S(0));
    }

    /// Structural invariants of the frame normalization. Violations are
    /// hard errors: the fixture cannot be interpreted at all.
    void validate() const {
        std::size_t radical = 0, transversal = 0, wcount = 0, screens = 0;
        for (const auto& v : frame) {
            switch (v.role) {
            case FrameRole::Radical: ++radical; break;
            case FrameRole::Transversal: ++transversal; break;
            case FrameRole::ScreenTransversal: ++wcount; break;
            case FrameRole::Screen: ++screens; break;
            case FrameRole::AmbientOnly: break;
            }
        }
        if (radical != 1 || transversal != 1 || wcount != 1)
            throw FixtureError(name + ": exactly one radical, transversal and "
                                      "screen-transversal vector required");
        if (screens == 0) throw FixtureError(name + ": at least one screen vector required");
        if (metric.rows() != frame_size() || metric.cols() != frame_size())
            throw FixtureError(name + ": metric shape must match frame");
        for (std::size_t i = 0; i < frame_size(); ++i)
            for (std::size_t j = 0; j < frame_size(); ++j)
                if (!(metric(i, j) == metric(j, i)))
                    throw FixtureError(name + ": metric must be symmetric");
        const std::size_t e = radical_index(), nn = transversal_index(), w = w_index();
        auto expect = [&](std::size_t i, std::size_t j, const S& val, const char* what) {
            if (!(metric(i, j) == val))
                throw FixtureError(name + ": frame normalization broken: " + std::string(what));
        };
        expect(e, e, S(0), "g(E,E) = 0");
        expect(e, nn, S(1), "g(E,N) = 1");
        expect(nn, nn, S(0), "g(N,N) = 0");
        expect(nn, w, S(0), "g(N,W) = 0");
        expect(e, w, S(0), "g(E,W) = 0");
        if (!(metric(w, w) == S(1) || metric(w, w) == S(-1)))
            throw FixtureError(name + ": frame normalization broken: g(W,W) = +-1");
        for (std::size_t z : screen_indices()) {
            expect(e, z, S(0), "g(E,Z) = 0");
            expect(nn, z, S(0), "g(N,Z) = 0");
        }
        if (dim_total != screens + 3)
            throw FixtureError(name + ": ambient dimension must equal screen count + 3");
        if (xi_frame.size() != frame_size())
            throw FixtureError(name + ": xi coefficient vector must match frame");
        // screen block must be nondegenerate
        auto sidx = screen_indices();
        Mat<S> block(sidx.size(), sidx.size());
        for (std::size_t i = 0; i < sidx.size(); ++i)
            for (std::size_t j = 0; j < sidx.size(); ++j)
                block(i, j) = metric(sidx[i], sidx[j]);
        if (det_cofactor(block) == S(0))
            throw FixtureError(name + ": degenerate screen metric");
    }
};

/// All induced objects of the submanifold at the fixture point, plus any
/// consistency residuals found while deriving them. Diagnostics report
/// defects in the fixture data; they never abort the derivation.
template <class S>
struct InducedGeometry {
    std::vector<std::string> tangent_labels;
    std::size_t n = 0; // screen dimension
    Mat<S> g;          // induced metric over the tangent frame
    Mat<S> B, C, D;
    std::vector<S> tau, rho, phi_form, delta, lambda_form, eta_form;
    Operator<S> a_estar, a_n, a_w;
    std::vector<S> xi_tangent; // xi over the tangent frame
    S a{0}, b{0}, e{0};
    AmbientConnection ambient = AmbientConnection::SemiSymmetricNonMetric;

    struct Diagnostic {
        std::string id;    // stable identity label, e.g. "nonmetricity"
        std::string where; // worst offending slot
        S magnitude;
    };
    std::vector<Diagnostic> diagnostics;

    bool has_diagnostic(const std::string& id) const {
        return std::any_of(diagnostics.begin(), diagnostics.end(),
                           [&](const Diagnostic& d) { return d.id == id; });
    }
};

namespace detail {

template <class S>
struct ResidualTracker {
    std::string id;
    S worst{0};
    std::string where;

    void feed(const S& value, const std::string& slot) {
        S a = abs_s(value);
        if (worst < a) {
            worst = a;
            where = slot;
        }
    }

    void flush(std::vector<typename InducedGeometry<S>::Diagnostic>& out, const S& threshold) {
        if (!(worst == S(0)) && !(worst < threshold)) out.push_back({id, where, worst});
    }
};

} // namespace detail

/// Read off B, C, D, tau, rho, the phi 1-form, delta and the three shape
/// operators from the connection table, then evaluate every compatibility
/// relation between them as a residual. `threshold` suppresses float noise;
/// leave it at zero in exact mode.
template <class S>
InducedGeometry<S> derive_geometry(const FrameFixture<S>& fx, const S& threshold = S(0)) {
    fx.validate();
    const std::size_t F = fx.frame_size();
    const std::size_t nidx = fx.transversal_index();
    const std::size_t widx = fx.w_index();
    const std::size_t eidx = fx.radical_index();
    const std::vector<std::size_t> tangent = fx.tangent_indices();
    const std::size_t T = tangent.size(); // n + 1

    InducedGeometry<S> geom;
    geom.n = T - 1;
    geom.ambient = fx.ambient;
    geom.a = fx.xi_a;
    geom.b = fx.xi_b;
    geom.e = fx.xi_e;
    for (std::size_t t : tangent) geom.tangent_labels.push_back(fx.frame[t].name);

    geom.g = Mat<S>(T, T);
    for (std::size_t i = 0; i < T; ++i)
        for (std::size_t j = 0; j < T; ++j) geom.g(i, j) = fx.metric(tangent[i], tangent[j]);

    // lambda(X) = g(X, N); eta(X) = g(xi, X)
    geom.lambda_form.assign(T, S(0));
    geom.eta_form.assign(T, S(0));
    geom.xi_tangent.assign(T, S(0));
    for (std::size_t i = 0; i < T; ++i) {
        geom.lambda_form[i] = fx.metric(tangent[i], nidx);
        S eta(0);
        for (std::size_t q = 0; q < F; ++q) eta = eta + fx.xi_frame[q] * fx.metric(q, tangent[i]);
        geom.eta_form[i] = eta;
    }
    { // tangent part of xi (screen components + a E); b, e live off-tangent
        for (std::size_t i = 0; i < T; ++i) geom.xi_tangent[i] = fx.xi_frame[tangent[i]];
    }

    geom.B = Mat<S>(T, T);
    geom.C = Mat<S>(T, T);
    geom.D = Mat<S>(T, T);
    Mat<S> a_estar_m(T, T), a_n_m(T, T), a_w_m(T, T);
    geom.tau.assign(T, S(0));
    geom.rho.assign(T, S(0));
    geom.phi_form.assign(T, S(0));
    geom.delta.assign(T, S(0));

    detail::ResidualTracker<S> closure{"tangent-closure"};
    detail::ResidualTracker<S> wself{"w-self-component"};
    detail::ResidualTracker<S> b_rad{"B-radical"};
    detail::ResidualTracker<S> d_rad{"D-radical-phi"};

    auto slot = [&](std::size_t xi_, std::size_t yj) {
        return fx.frame[xi_].name + "," + fx.frame[yj].name;
    };
    auto split = [&](const std::vector<S>& v, std::size_t xi_, std::size_t yj) {
        // returns (tangent part over tangent frame, N coeff, W coeff)
        std::vector<S> tang(T, S(0));
        for (std::size_t i = 0; i < T; ++i) tang[i] = v[tangent[i]];
        for (std::size_t q = 0; q < F; ++q) {
            if (q == nidx || q == widx) continue;
            if (fx.frame[q].role == FrameRole::AmbientOnly)
                closure.feed(v[q], slot(xi_, yj));
        }
        return std::make_tuple(tang, v[nidx], v[widx]);
    };

    // Tangent-tangent rows: B, D and the induced tangent connection.
    std::vector<std::vector<std::vector<S>>> nabla(
        T, std::vector<std::vector<S>>(T, std::vector<S>(T, S(0))));
    for (std::size_t xi_ = 0; xi_ < T; ++xi_) {
        for (std::size_t yj = 0; yj < T; ++yj) {
            auto [tang, bcoef, dcoef] =
                split(fx.connection_at(tangent[xi_], tangent[yj]), tangent[xi_], tangent[yj]);
            geom.B(xi_, yj) = bcoef;
            geom.D(xi_, yj) = dcoef;
            nabla[xi_][yj] = tang;
            if (yj != 0) geom.C(xi_, yj) = tang[0]; // E coefficient of nabla_X PY
        }
        // radical column: nabla_X E = -A_E* X - delta(X) E
        {
            const std::vector<S>& tang = nabla[xi_][0];
            geom.delta[xi_] = S(0) - tang[0];
            for (std::size_t i = 1; i < T; ++i) a_estar_m(i, xi_) = S(0) - tang[i];
            b_rad.feed(geom.B(xi_, 0), slot(tangent[xi_], eidx));
        }
        // transversal column: nabla_X N = -A_N X + tau(X) N + rho(X) W
        {
            auto [tang, ncoef, wcoef] = split(fx.connection_at(tangent[xi_], nidx), tangent[xi_], nidx);
            geom.tau[xi_] = ncoef;
            geom.rho[xi_] = wcoef;
            for (std::size_t i = 0; i < T; ++i) a_n_m(i, xi_) = S(0) - tang[i];
        }
        // screen-transversal column: nabla_X W = -A_W X + phi(X) N
        {
            auto [tang, ncoef, wcoef] = split(fx.connection_at(tangent[xi_], widx), tangent[xi_], widx);
            geom.phi_form[xi_] = ncoef;
            wself.feed(wcoef, slot(tangent[xi_], widx));
            for (std::size_t i = 0; i < T; ++i) a_w_m(i, xi_) = S(0) - tang[i];
        }
    }
    // D(X, E) = -phi(X) can only be checked once phi_form is complete.
    for (std::size_t xi_ = 0; xi_ < T; ++xi_)
        d_rad.feed(geom.D(xi_, 0) + geom.phi_form[xi_], slot(tangent[xi_], eidx));

    // Signature over the tangent frame: 0 marks degenerate directions
    // (the radical, and any null screen vector of a hyperbolic pair).
    std::vector<int> signature(T, 0);
    for (std::size_t i = 1; i < T; ++i) {
        const S& gii = geom.g(i, i);
        signature[i] = gii == S(0) ? 0 : (gii < S(0) ? -1 : 1);
    }
    geom.a_estar = Operator<S>(a_estar_m, signature, 0, geom.tangent_labels);
    geom.a_n = Operator<S>(a_n_m, signature, 0, geom.tangent_labels);
    geom.a_w = Operator<S>(a_w_m, signature, 0, geom.tangent_labels);

    // Compatibility residuals, one tracker per identity.
    detail::ResidualTracker<S> shape_b{"shape-B"};
    detail::ResidualTracker<S> shape_d{"shape-D"};
    detail::ResidualTracker<S> shape_c{"shape-C"};
    detail::ResidualTracker<S> pair_n{"transversal-pairing-N"};
    detail::ResidualTracker<S> pair_w{"transversal-pairing-W"};
    detail::ResidualTracker<S> delta_tau{"delta-tau"};
    detail::ResidualTracker<S> bsym{"B-symmetry"};
    detail::ResidualTracker<S> dsym{"D-symmetry"};
    detail::ResidualTracker<S> selfadj{"selfadj-screen-metric"};
    detail::ResidualTracker<S> nonmet{"nonmetricity"};

    auto gdot = [&](const std::vector<S>& u, std::size_t j) {
        S acc(0);
        for (std::size_t i = 0; i < T; ++i) acc = acc + u[i] * geom.g(i, j);
        return acc;
    };
    auto lam = [&](const std::vector<S>& u) {
        S acc(0);
        for (std::size_t i = 0; i < T; ++i) acc = acc + u[i] * geom.lambda_form[i];
        return acc;
    };

    for (std::size_t x = 0; x < T; ++x) {
        for (std::size_t y = 0; y < T; ++y) {
            const std::string at = geom.tangent_labels[x] + "," + geom.tangent_labels[y];
            std::vector<S> aex = a_estar_m.column(x), awx = a_w_m.column(x), anx = a_n_m.column(x);
            shape_b.feed(gdot(aex, y) - (geom.B(x, y) - fx.xi_b * geom.g(x, y)), at);
            shape_d.feed(gdot(awx, y) - (geom.D(x, y) - fx.xi_e * geom.g(x, y) +
                                         geom.phi_form[x] * geom.lambda_form[y]),
                         at);
            if (y != 0)
                shape_c.feed(gdot(anx, y) - (geom.C(x, y) - fx.xi_a * geom.g(x, y) -
                                             geom.lambda_form[x] * geom.eta_form[y]),
                             at);
            bsym.feed(geom.B(x, y) - geom.B(y, x), at);
            dsym.feed(geom.D(x, y) - geom.D(y, x), at);
        }
        const std::string at = geom.tangent_labels[x];
        pair_n.feed(lam(a_n_m.column(x)) + fx.xi_a * geom.lambda_form[x], at);
        pair_w.feed(lam(a_w_m.column(x)) - (geom.rho[x] - fx.xi_e * geom.lambda_form[x]), at);
        delta_tau.feed(geom.delta[x] - (geom.tau[x] - fx.xi_b * geom.lambda_form[x]), at);
    }

    // g-self-adjointness of A_E* against the actual (possibly non-diagonal,
    // degenerate) tangent metric: G A - A^T G.
    {
        Mat<S> gap = geom.g * a_estar_m - a_estar_m.transpose() * geom.g;
        for (std::size_t i = 0; i < T; ++i)
            for (std::size_t j = 0; j < T; ++j)
                selfadj.feed(gap(i, j), geom.tangent_labels[i] + "," + geom.tangent_labels[j]);
    }

    // Non-metricity of the induced connection. Frame metric coefficients
    // are constants at the fixture point, so X g(Y,Z) = 0.
    const bool ssnm = fx.ambient == AmbientConnection::SemiSymmetricNonMetric;
    for (std::size_t x = 0; x < T; ++x)
        for (std::size_t y = 0; y < T; ++y)
            for (std::size_t z = 0; z < T; ++z) {
                S lhs = S(0) - gdot(nabla[x][y], z) - gdot(nabla[x][z], y);
                S rhs = geom.B(x, y) * geom.lambda_form[z] + geom.B(x, z) * geom.lambda_form[y];
                if (ssnm)
                    rhs = rhs - geom.eta_form[y] * geom.g(x, z) - geom.eta_form[z] * geom.g(x, y);
                nonmet.feed(lhs - rhs, geom.tangent_labels[x] + "," + geom.tangent_labels[y] +
                                           "," + geom.tangent_labels[z]);
            }

    // Torsion of the ambient connection over tangent pairs, when bracket
    // data is available.
    if (fx.has_brackets) {
        detail::ResidualTracker<S> torsion{"torsion"};
        auto eta_full = [&](std::size_t q) {
            S acc(0);
            for (std::size_t p = 0; p < F; ++p) acc = acc + fx.xi_frame[p] * fx.metric(p, q);
            return acc;
        };
        for (std::size_t x = 0; x < T; ++x)
            for (std::size_t y = x + 1; y < T; ++y) {
                std::size_t fi = tangent[x], fj = tangent[y];
                std::vector<S> lhs = fx.connection_at(fi, fj);
                std::vector<S> rhs_conn = fx.connection_at(fj, fi);
                std::vector<S> br = fx.bracket_at(fi, fj);
                for (std::size_t q = 0; q < F; ++q) {
                    S t = lhs[q] - rhs_conn[q] - br[q];
                    if (ssnm) {
                        S target = eta_full(fj) * (q == fi ? S(1) : S(0)) -
                                   eta_full(fi) * (q == fj ? S(1) : S(0));
                        t = t - target;
                    }
                    torsion.feed(t, fx.frame[fi].name + "," + fx.frame[fj].name);
                }
            }
        torsion.flush(geom.diagnostics, threshold);
    }

    for (auto* tr : {&closure, &wself, &b_rad, &d_rad, &shape_b, &shape_d, &shape_c, &pair_n,
                     &pair_w, &delta_tau, &bsym, &dsym, &selfadj, &nonmet})
        tr->flush(geom.diagnostics, threshold);
    return geom;
}

/// A detected screen-almost-conformal structure. The form follows the
/// ambient connection: lambda (x) xi for a metric ambient connection,
/// phi A_E* - a I for the semi-symmetric non-metric one.
template <class S>
struct SACDetection {
    enum class Form { LambdaXi, MinusAI };
    S phi;
    S a;
    Form form;
    S screen_gap;  // worst screen-column residual of the fitted relation
    S radical_gap; // residual of the relation applied to E (reported, not fitted)
    std::vector<std::string> notes;
};

/// Least-squares fit of the conformal factor over the screen columns of
/// A_N against A_E*, followed by an exact (or tolerance) residual check.
/// Returns nothing when no single phi fits.
template <class S>
std::optional<SACDetection<S>> detect_sac(const InducedGeometry<S>& geom,
                                          const S& threshold = S(0)) {
    const std::size_t T = geom.n + 1;
    const Mat<S>& ae = geom.a_estar.entries;
    const Mat<S>& an = geom.a_n.entries;
    const bool minus_ai = geom.ambient == AmbientConnection::SemiSymmetricNonMetric;

    SACDetection<S> det;
    det.form = minus_ai ? SACDetection<S>::Form::MinusAI : SACDetection<S>::Form::LambdaXi;
    det.a = geom.a;

    // Normal equations over entries (i, j), j screen: fit
    //   A_N = phi A_E* - a I       (MinusAI; two unknowns)
    //   A_N = phi A_E*             (LambdaXi; lambda term dies on screens)
    S sxx(0), sxy(0), syy(0), sxz(0), syz(0);
    for (std::size_t j = 1; j < T; ++j)
        for (std::size_t i = 0; i < T; ++i) {
            const S& x = ae(i, j);
            S y = (i == j) ? S(-1) : S(0);
            const S& z = an(i, j);
            sxx = sxx + x * x;
            sxy = sxy + x * y;
            syy = syy + y * y;
            sxz = sxz + x * z;
            syz = syz + y * z;
        }
    if (sxx == S(0)) return std::nullopt; // A_E* vanishes on the screen: phi undetermined

    if (minus_ai) {
        S d = sxx * syy - sxy * sxy;
        if (d == S(0)) {
            // A_E* proportional to the identity on screens: the pair is a
            // one-parameter family; pin a to the declared decomposition.
            det.a = geom.a;
            det.phi = (sxz - det.a * sxy) / sxx;
            det.notes.push_back("conformal pair not unique; a taken from the xi decomposition");
        } else {
            det.phi = (sxz * syy - syz * sxy) / d;
            det.a = (sxx * syz - sxy * sxz) / d;
        }
    } else {
        det.phi = sxz / sxx;
    }
    if (det.phi == S(0)) return std::nullopt;

    det.screen_gap = S(0);
    for (std::size_t j = 1; j < T; ++j)
        for (std::size_t i = 0; i < T; ++i) {
            S model = det.phi * ae(i, j);
            if (minus_ai && i == j) model = model - det.a;
            S gap = abs_s(an(i, j) - model);
            if (det.screen_gap < gap) det.screen_gap = gap;
        }
    if (!(det.screen_gap == S(0)) && !(det.screen_gap < threshold)) return std::nullopt;

    // The relation applied to the radical direction is reported, never
    // fitted: fixtures may disagree here and the gap is audit output.
    det.radical_gap = S(0);
    for (std::size_t i = 0; i < T; ++i) {
        S model = det.phi * ae(i, 0);
        if (minus_ai)
            model = model - (i == 0 ? det.a : S(0));
        else
            model = model + geom.lambda_form[0] * geom.xi_tangent[i];
        S gap = abs_s(an(i, 0) - model);
        if (det.radical_gap < gap) det.radical_gap = gap;
    }
    if (!(det.radical_gap == S(0)))
        det.notes.push_back("relation fails on the radical direction; residual recorded");
    return det;
}

/// Change of screen distribution driven by the characteristic field
/// W_c = sum_i c_i Z_i: Z_i' = Z_i - omega(Z_i) E and
/// N' = N - g(W_c,W_c)/2 E + W_c. Coefficients are constants at the
/// fixture point. The returned fixture expresses everything in the new
/// frame; re-deriving its geometry yields the transformed shape operators.
template <class S>
FrameFixture<S> screen_change(const FrameFixture<S>& fx, const std::vector<S>& coeffs) {
    fx.validate();
    const std::vector<std::size_t> screens = fx.screen_indices();
    if (coeffs.size() != screens.size())
        throw FixtureError(fx.name + ": screen-change coefficient count must equal screen dimension");
    const std::size_t F = fx.frame_size();
    const std::size_t eidx = fx.radical_index();
    const std::size_t nidx = fx.transversal_index();

    // omega(Z_j) = g(Z_j, W_c), |W_c|^2
    std::vector<S> omega(screens.size(), S(0));
    S w2(0);
    for (std::size_t j = 0; j < screens.size(); ++j)
        for (std::size_t i = 0; i < screens.size(); ++i)
            omega[j] = omega[j] + coeffs[i] * fx.metric(screens[j], screens[i]);
    for (std::size_t i = 0; i < screens.size(); ++i) w2 = w2 + coeffs[i] * omega[i];

    // new_p = sum_q P(p,q) old_q and its inverse R (old_q = sum_p R(q,p) new_p)
    Mat<S> P = Mat<S>::identity(F), R = Mat<S>::identity(F);
    for (std::size_t j = 0; j < screens.size(); ++j) {
        P(screens[j], eidx) = S(0) - omega[j];
        R(screens[j], eidx) = omega[j];
    }
    P(nidx, eidx) = S(0) - w2 / S(2);
    R(nidx, eidx) = S(0) - w2 / S(2);
    for (std::size_t j = 0; j < screens.size(); ++j) {
        P(nidx, screens[j]) = coeffs[j];
        R(nidx, screens[j]) = S(0) - coeffs[j];
    }

    FrameFixture<S> out;
    out.name = fx.name + "+screen-change";
    out.description = fx.description;
    out.dim_total = fx.dim_total;
    out.frame = fx.frame;
    out.ambient = fx.ambient;
    out.evaluation_point = fx.evaluation_point;
    out.known_findings = fx.known_findings;
    out.has_brackets = fx.has_brackets;

    out.metric = P * fx.metric * P.transpose();

    auto to_new = [&](const std::vector<S>& old_coeffs) {
        // v = sum_q old_coeffs[q] old_q = sum_p (sum_q old_coeffs[q] R(q,p)) new_p
        std::vector<S> out_c(F, S(0));
        for (std::size_t p = 0; p < F; ++p)
            for (std::size_t q = 0; q < F; ++q) out_c[p] = out_c[p] + old_coeffs[q] * R(q, p);
        return out_c;
    };

    auto combine = [&](std::size_t xnew, std::size_t ynew, auto fetch) {
        std::vector<S> acc(F, S(0));
        for (std::size_t q = 0; q < F; ++q) {
            if (P(xnew, q) == S(0)) continue;
            for (std::size_t s = 0; s < F; ++s) {
                if (P(ynew, s) == S(0)) continue;
                std::vector<S> entry = fetch(q, s);
                for (std::size_t k = 0; k < F; ++k)
                    acc[k] = acc[k] + P(xnew, q) * P(ynew, s) * entry[k];
            }
        }
        return to_new(acc);
    };

    const std::vector<std::size_t> new_tangent = out.tangent_indices();
    for (std::size_t x : new_tangent)
        for (std::size_t y = 0; y < F; ++y) {
            if (fx.frame[y].role == FrameRole::AmbientOnly) continue;
            std::vector<S> v = combine(
                x, y, [&](std::size_t q, std::size_t s) { return fx.connection_at(q, s); });
            bool nonzero = std::any_of(v.begin(), v.end(), [](const S& t) { return !(t == S(0)); });
            if (nonzero) out.connection[{x, y}] = std::move(v);
        }
    if (fx.has_brackets) {
        for (std::size_t x = 0; x < F; ++x)
            for (std::size_t y = x + 1; y < F; ++y) {
                std::vector<S> v = combine(
                    x, y, [&](std::size_t q, std::size_t s) { return fx.bracket_at(q, s); });
                bool nonzero = std::any_of(v.begin(), v.end(), [](const S& t) { return !(t == S(0)); });
                if (nonzero) out.brackets[{x, y}] = std::move(v);
            }
    }

    for (std::size_t j : screens) out.frame[j].name += "'";
    out.frame[nidx].name += "'";

    out.xi_frame = to_new(fx.xi_frame);
    out.xi_a = out.xi_frame[eidx];
    out.xi_b = out.xi_frame[nidx];
    out.xi_e = out.xi_frame[fx.w_index()];

    out.validate(); // rejects a degenerate new screen metric
    return out;
}

/// Spectrum of a fixture-derived operator, readable only when the matrix is
/// diagonal in the tangent frame.
template <class S>
std::optional<Spectrum<S>> diagonal_spectrum(const Operator<S>& op) {
    if (!op.is_diagonal()) return std::nullopt;
    std::vector<S> vals(op.dim());
    for (std::size_t i = 0; i < op.dim(); ++i) vals[i] = op.entries(i, i);
    Spectrum<S> s;
    s.values = std::move(vals);
    s.radical_slot = op.radical_slot;
    if (s.radical_slot && !(s.values[*s.radical_slot] == S(0))) s.radical_slot.reset();
    return s;
}

} // namespace saccurv::framecalc
