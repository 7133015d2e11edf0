#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "saccurv/matrix.hpp"
#include "saccurv/newton.hpp"
#include "saccurv/scalar.hpp"
#include "saccurv/shape_op.hpp"
#include "saccurv/spectrum.hpp"
#include "saccurv/symfun.hpp"

namespace saccurv::sacrel {

/// Which eigenvalue population enters the scalar curvature functions of
/// A_N: the full tangent spectrum (radical eigenvalue -a included), or the
/// screen part only. The source identities are split over this choice, so
/// both are first-class and the audit reports each identity under each.
enum class Convention { Full, ScreenOnly };

inline const char* to_string(Convention c) {
    return c == Convention::Full ? "full" : "screen";
}

/// Conformal pair (phi, a) of a screen-almost-conformal submanifold,
/// A_N = phi A_E* - a I, with the active spectrum convention.
template <class S>
struct SACParams {
    S phi;
    S a;
    Convention convention = Convention::ScreenOnly;

    SACParams(S phi_, S a_, Convention conv = Convention::ScreenOnly)
        : phi(std::move(phi_)), a(std::move(a_)), convention(conv) {
        if (phi == S(0)) throw std::invalid_argument("SACParams: phi must be nonzero");
    }
};

/// kappa  ->  phi*kappa - a, elementwise. Full keeps the radical slot
/// (value -a); ScreenOnly drops it. The radical marker survives only when
/// the transformed radical eigenvalue is still exactly zero.
template <class S>
Spectrum<S> transform_spectrum(const Spectrum<S>& kstar, const SACParams<S>& p) {
    kstar.validate();
    if (!kstar.radical_slot)
        throw std::invalid_argument("transform_spectrum: spectrum needs a radical slot");
    if (p.convention == Convention::Full) {
        std::vector<S> out;
        out.reserve(kstar.size());
        for (const S& k : kstar.values) out.push_back(p.phi * k - p.a);
        Spectrum<S> res;
        res.values = std::move(out);
        if (p.a == S(0)) res.radical_slot = kstar.radical_slot;
        return res;
    }
    std::vector<S> out;
    for (const S& k : kstar.screen_values()) out.push_back(p.phi * k - p.a);
    Spectrum<S> res;
    res.values = std::move(out);
    return res;
}

/// Residual of S_1 = phi S_1* - a n under the active convention. Exact
/// zero under ScreenOnly; exactly -a under Full.
template <class S>
S s1_relation_residual(const Spectrum<S>& kstar, const SACParams<S>& p) {
    Spectrum<S> kn = transform_spectrum(kstar, p);
    S s1_n(0);
    for (const S& k : kn.values) s1_n = s1_n + k;
    S s1_star(0);
    for (const S& k : kstar.values) s1_star = s1_star + k;
    S n = S(static_cast<long>(kstar.screen_size()));
    return s1_n - (p.phi * s1_star - p.a * n);
}

/// Closed-form J_r evaluated literally, with both index sums running over
/// the screen indices 1 <= i_1 < ... < i_r <= n:
///   J_r = C(n,r)(-a)^r
///       + sum_{subsets} sum_{j=1}^{r-1} (-1)^{r+j} e_j(selected) a^{r-j} phi^j.
/// This reading reproduces J_1 = -a n and matches S_r - phi^r S_r* under
/// the ScreenOnly convention.
template <class S>
S j_closed(const Spectrum<S>& kstar, std::size_t r, const SACParams<S>& p) {
    const std::vector<S> screen = kstar.screen_values();
    const std::size_t n = screen.size();
    if (r < 1 || r > n) throw std::invalid_argument("j_closed: need 1 <= r <= n");
    S result = binomial<S>(n, r) * pow_s(S(0) - p.a, r);
    if (r >= 2) {
        std::vector<std::size_t> idx(r);
        for (std::size_t i = 0; i < r; ++i) idx[i] = i;
        std::vector<S> selected(r);
        while (true) {
            for (std::size_t i = 0; i < r; ++i) selected[i] = screen[idx[i]];
            std::vector<S> e = symfun::sigma_all(selected);
            for (std::size_t j = 1; j <= r - 1; ++j) {
                S term = e[j] * pow_s(p.a, r - j) * pow_s(p.phi, j);
                result = ((r + j) % 2 == 0) ? result + term : result - term;
            }
            // next r-combination of {0..n-1}
            std::size_t k = r;
            while (k > 0 && idx[k - 1] == n - r + k - 1) --k;
            if (k == 0) break;
            ++idx[k - 1];
            for (std::size_t i = k; i < r; ++i) idx[i] = idx[i - 1] + 1;
        }
    }
    return result;
}

/// Everything the operator-level relations need, prepared once per
/// (A_E*, params): both Newton families on the convention's domain and the
/// curvature scalars S_r*, S_r(A_N), J_r = S_r - phi^r S_r*.
template <class S>
struct SACContext {
    SACParams<S> params;
    std::size_t n;              // screen dimension
    Operator<S> a_estar;        // on the active domain
    Operator<S> a_n;            // phi A_E* - a I on the active domain
    newton::NewtonFamily<S> fam_estar;
    newton::NewtonFamily<S> fam_n;
    std::vector<S> s_star;      // S_0* .. S_{m+1}* (trailing zero)
    std::vector<S> s_n;         // S_0  .. S_{m+1}
    std::vector<S> j;           // J_0  .. J_{m+1}

    std::size_t active_dim() const { return a_estar.dim(); }
};

template <class S>
SACContext<S> make_context(const Operator<S>& a_estar_full, const SACParams<S>& p) {
    if (p.convention == Convention::Full && !a_estar_full.radical_slot)
        throw std::invalid_argument("make_context: Full convention needs a radical slot");
    Operator<S> a = (p.convention == Convention::ScreenOnly)
                        ? a_estar_full.restricted_to_screen()
                        : a_estar_full;
    const std::size_t m = a.dim();
    const std::size_t n =
        a_estar_full.radical_slot ? a_estar_full.dim() - 1 : a_estar_full.dim();

    Mat<S> an_m = p.phi * a.entries - p.a * Mat<S>::identity(m);
    Operator<S> an(std::move(an_m), a.signature, a.radical_slot, a.frame_labels);

    SACContext<S> ctx{p, n, a, an, newton::newton_family(a, false),
                      newton::newton_family(an, false), {}, {}, {}};
    ctx.s_star = ctx.fam_estar.curvatures;
    ctx.s_n = ctx.fam_n.curvatures;
    ctx.s_star.push_back(S(0));
    ctx.s_n.push_back(S(0));
    ctx.j.resize(m + 2);
    for (std::size_t r = 0; r <= m + 1; ++r)
        ctx.j[r] = ctx.s_n[r] - pow_s(p.phi, r) * ctx.s_star[r];
    return ctx;
}

enum class NStarRoute { Operational, Closed, Recursive };

/// The conformal defect operator N_r, by one of three routes:
///   Operational:  T_r(A_N) - phi^r T_r(A_E*)      (the definition)
///   Closed:       the explicit binomial expansion in powers of phi A_E*
///   Recursive:    N_1 = a n I,
///                 N_r = (-1)^r J_r I - a phi^{r-1} T*_{r-1} - a N_{r-1}
///                       + phi A_E* N_{r-1}
/// Routes are compared by the audit, never forced equal.
template <class S>
Mat<S> n_star(const SACContext<S>& ctx, std::size_t r, NStarRoute route) {
    const std::size_t m = ctx.active_dim();
    if (r < 1 || r > m) throw std::invalid_argument("n_star: need 1 <= r <= dim");
    const S& phi = ctx.params.phi;
    const S& a = ctx.params.a;
    switch (route) {
    case NStarRoute::Operational:
        return ctx.fam_n.transforms[r].entries -
               pow_s(phi, r) * ctx.fam_estar.transforms[r].entries;
    case NStarRoute::Closed: {
        Mat<S> id = Mat<S>::identity(m);
        Mat<S> phi_a = phi * ctx.a_estar.entries;
        Mat<S> an = phi_a - a * id;
        std::vector<Mat<S>> phi_a_pow{id}, an_pow{id};
        for (std::size_t k = 1; k <= r; ++k) {
            phi_a_pow.push_back(phi_a_pow.back() * phi_a);
            an_pow.push_back(an_pow.back() * an);
        }
        Mat<S> acc = Mat<S>::zero(m, m);
        for (std::size_t alpha = 1; alpha <= r; ++alpha) {
            Mat<S> inner = ctx.j[alpha] * an_pow[r - alpha];
            for (std::size_t k = 1; k <= r - alpha; ++k) {
                Mat<S> t =
                    (binomial<S>(r - alpha, k) * pow_s(a, k)) * phi_a_pow[r - alpha - k];
                inner = (k % 2 == 0) ? inner + (pow_s(phi, alpha) * ctx.s_star[alpha]) * t
                                     : inner - (pow_s(phi, alpha) * ctx.s_star[alpha]) * t;
            }
            acc = (alpha % 2 == 0) ? acc + inner : acc - inner;
        }
        for (std::size_t jj = 1; jj <= r; ++jj) {
            Mat<S> t = (binomial<S>(r, jj) * pow_s(a, jj)) * phi_a_pow[r - jj];
            acc = (jj % 2 == 0) ? acc + t : acc - t;
        }
        return acc;
    }
    case NStarRoute::Recursive: {
        Mat<S> id = Mat<S>::identity(m);
        Mat<S> cur = (a * S(static_cast<long>(ctx.n))) * id;
        for (std::size_t k = 2; k <= r; ++k) {
            S sign = (k % 2 == 0) ? S(1) : S(-1);
            cur = sign * ctx.j[k] * id - (a * pow_s(phi, k - 1)) * ctx.fam_estar.transforms[k - 1].entries -
                  a * cur + phi * (ctx.a_estar.entries * cur);
        }
        return cur;
    }
    }
    throw std::logic_error("n_star: unreachable");
}

/// Per-order residuals of the conformal trace relations, evaluated
/// literally with n = screen dimension. Which rows vanish depends on the
/// convention; the audit table records the outcome.
template <class S>
struct SacTraceRow {
    std::size_t r;
    S conf_tr_t;    // id "conf-tr-T"  : tr T_r(A_N) vs phi^r tr T_r* + (-1)^r (n+1-r) J_r
    S conf_tr_at;   // id "conf-tr-AT" : tr A_N T_{r-1} vs phi^r tr A T*_{r-1} + (-1)^{r-1} r J_r
    S conf_tr_aat;  // id "conf-tr-AAT"
    S trace_n;      // id "tr-N"      : tr N_r vs (-1)^r (n+1-r) J_r
    S trace_an;     // id "tr-AN"     (r >= 2, else 0)
    S trace_aan;    // id "tr-AAN"    (r >= 2, else 0)
};

template <class S>
std::vector<SacTraceRow<S>> sac_traces(const SACContext<S>& ctx) {
    const std::size_t m = ctx.active_dim();
    const S& phi = ctx.params.phi;
    const S& a = ctx.params.a;
    const S n_s = S(static_cast<long>(ctx.n));
    Mat<S> an2 = ctx.a_n.entries * ctx.a_n.entries;
    Mat<S> ae2 = ctx.a_estar.entries * ctx.a_estar.entries;
    std::vector<Mat<S>> nop(m + 1, Mat<S>::zero(m, m));
    for (std::size_t r = 1; r <= m; ++r) nop[r] = n_star(ctx, r, NStarRoute::Operational);

    std::vector<SacTraceRow<S>> rows;
    for (std::size_t r = 1; r <= m; ++r) {
        SacTraceRow<S> row{r, S(0), S(0), S(0), S(0), S(0), S(0)};
        S sr = (r % 2 == 0) ? S(1) : S(-1);
        S count = S(static_cast<long>(ctx.n + 1)) - S(static_cast<long>(r));
        const Mat<S>& tn_r = ctx.fam_n.transforms[r].entries;
        const Mat<S>& te_r = ctx.fam_estar.transforms[r].entries;
        const Mat<S>& tn_prev = ctx.fam_n.transforms[r - 1].entries;
        const Mat<S>& te_prev = ctx.fam_estar.transforms[r - 1].entries;

        row.conf_tr_t = tn_r.trace() - (pow_s(phi, r) * te_r.trace() + sr * count * ctx.j[r]);
        row.conf_tr_at = (ctx.a_n.entries * tn_prev).trace() -
                         (pow_s(phi, r) * (ctx.a_estar.entries * te_prev).trace() -
                          sr * S(static_cast<long>(r)) * ctx.j[r]);
        row.conf_tr_aat =
            (an2 * tn_prev).trace() -
            (pow_s(phi, r + 1) * (ae2 * te_prev).trace() +
             sr * (phi * ctx.s_star[1] * ctx.j[r] - a * n_s * pow_s(phi, r) * ctx.s_star[r] -
                   a * n_s * ctx.j[r] + S(static_cast<long>(r + 1)) * ctx.j[r + 1]));
        row.trace_n = nop[r].trace() - sr * count * ctx.j[r];
        if (r >= 2) {
            S sprev = (r % 2 == 0) ? S(-1) : S(1); // (-1)^{r-1}
            row.trace_an = (ctx.a_estar.entries * nop[r - 1]).trace() -
                           sprev / phi *
                               (S(static_cast<long>(r)) * ctx.j[r] +
                                a * (S(static_cast<long>(ctx.n + 2)) - S(static_cast<long>(r))) *
                                    (pow_s(phi, r - 1) * ctx.s_star[r - 1] + ctx.j[r - 1]));
            row.trace_aan = (ae2 * nop[r - 1]).trace() -
                            ((ctx.a_estar.entries * nop[r]).trace() / phi -
                             a / phi * (ctx.a_estar.entries * nop[r - 1]).trace() +
                             a * pow_s(phi, r - 2) * (ctx.a_estar.entries * te_prev).trace() +
                             sprev / phi * ctx.j[r] * ctx.s_star[1]);
        }
        rows.push_back(row);
    }
    return rows;
}

/// Max-entry gap between the Recursive/Closed routes and the Operational
/// definition, per order.
template <class S>
struct RouteGapRow {
    std::size_t r;
    S recursive_gap;
    S closed_gap;
};

template <class S>
std::vector<RouteGapRow<S>> route_gaps(const SACContext<S>& ctx) {
    std::vector<RouteGapRow<S>> rows;
    for (std::size_t r = 1; r <= ctx.active_dim(); ++r) {
        Mat<S> op = n_star(ctx, r, NStarRoute::Operational);
        rows.push_back(
            {r, (n_star(ctx, r, NStarRoute::Recursive) - op).max_abs(),
             (n_star(ctx, r, NStarRoute::Closed) - op).max_abs()});
    }
    return rows;
}

} // namespace saccurv::sacrel
