#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "saccurv/matrix.hpp"
#include "saccurv/scalar.hpp"
#include "saccurv/shape_op.hpp"
#include "saccurv/spectrum.hpp"
#include "saccurv/symfun.hpp"

namespace saccurv::newton {

/// Mean curvature functions S_0..S_m of an operator, read off its
/// characteristic polynomial via traces of powers and the Newton
/// identities. Never touches eigenvalues, so it stays exact over the
/// rationals even when the spectrum is irrational.
template <class S>
std::vector<S> curvatures_from_traces(const Mat<S>& a) {
    a.require_square();
    const std::size_t m = a.rows();
    std::vector<S> p(m + 1, S(0));
    Mat<S> power = a;
    for (std::size_t k = 1; k <= m; ++k) {
        p[k] = power.trace();
        if (k < m) power = power * a;
    }
    return symfun::elementary_from_power_sums(p, m);
}

template <class S>
std::vector<S> curvatures_from_traces(const Operator<S>& a) {
    return curvatures_from_traces(a.entries);
}

/// T_r as the degree-r operator polynomial sum_{alpha=0..r} (-1)^alpha
/// S_alpha A^(r-alpha), with S_alpha from the trace route above.
template <class S>
Operator<S> newton_direct(const Operator<S>& a, std::size_t r) {
    a.require_self_adjoint();
    if (r > a.dim()) throw std::invalid_argument("newton_direct: r exceeds dimension");
    std::vector<S> curv = curvatures_from_traces(a);
    const std::size_t m = a.dim();
    Mat<S> acc = Mat<S>::zero(m, m);
    Mat<S> power = Mat<S>::identity(m); // A^0, grows to A^r
    std::vector<Mat<S>> powers;
    powers.reserve(r + 1);
    for (std::size_t k = 0; k <= r; ++k) {
        powers.push_back(power);
        if (k < r) power = power * a.entries;
    }
    for (std::size_t alpha = 0; alpha <= r; ++alpha) {
        Mat<S> term = curv[alpha] * powers[r - alpha];
        acc = (alpha % 2 == 0) ? acc + term : acc - term;
    }
    return Operator<S>(std::move(acc), a.signature, a.radical_slot, a.frame_labels);
}

/// The inductive construction: T_0 = I, T_k = (-1)^k S_k I + A T_{k-1},
/// with S_k recovered on the fly from tr(A T_{k-1}). This is the
/// Faddeev-LeVerrier sweep; it shares nothing with newton_direct beyond
/// matrix products, so the two constructions cross-validate.
template <class S>
struct NewtonFamily {
    Operator<S> source;
    std::vector<Operator<S>> transforms; // T_0 .. T_m
    std::vector<S> curvatures;          // S_0 .. S_m
};

template <class S>
NewtonFamily<S> newton_family(const Operator<S>& a, bool check_self_adjoint = true) {
    if (check_self_adjoint) a.require_self_adjoint();
    const std::size_t m = a.dim();
    NewtonFamily<S> fam;
    fam.source = a;
    fam.curvatures.assign(m + 1, S(0));
    fam.curvatures[0] = S(1);
    Mat<S> t = Mat<S>::identity(m);
    auto wrap = [&](Mat<S> mtx) {
        return Operator<S>(std::move(mtx), a.signature, a.radical_slot, a.frame_labels);
    };
    fam.transforms.push_back(wrap(t));
    for (std::size_t k = 1; k <= m; ++k) {
        Mat<S> at = a.entries * t;
        S sk = at.trace() / S(static_cast<long>(k));
        if (k % 2 == 0) sk = -sk; // S_k = (-1)^{k-1} tr(A T_{k-1}) / k
        fam.curvatures[k] = sk;
        Mat<S> ski = sk * Mat<S>::identity(m);
        t = (k % 2 == 0) ? at + ski : at - ski;
        fam.transforms.push_back(wrap(t));
    }
    return fam;
}

template <class S>
Operator<S> newton_recursive(const Operator<S>& a, std::size_t r) {
    if (r > a.dim()) throw std::invalid_argument("newton_recursive: r exceeds dimension");
    return newton_family(a).transforms[r];
}

/// Residuals of the closed-form trace identities for one operator family:
///   tr(T_r)            - (-1)^r (m - r) S_r
///   tr(A T_{r-1})      - (-1)^{r-1} r S_r
///   tr(A^2 T_{r-1})    - (-1)^r (-S_1 S_r + (r+1) S_{r+1})
/// All three vanish identically; nonzero entries flag an arithmetic bug or
/// an inconsistent operator.
template <class S>
struct TraceIdentityRow {
    std::size_t r;
    S trace_t;      // id "tr-T"
    S trace_at;     // id "tr-AT"
    S trace_aat;    // id "tr-AAT"
};

template <class S>
std::vector<TraceIdentityRow<S>> trace_identities(const Operator<S>& a) {
    a.require_self_adjoint();
    const std::size_t m = a.dim();
    NewtonFamily<S> fam = newton_family(a);
    std::vector<S> curv = fam.curvatures;
    curv.push_back(S(0)); // S_{m+1} = 0
    Mat<S> a2 = a.entries * a.entries;
    std::vector<TraceIdentityRow<S>> rows;
    for (std::size_t r = 0; r <= m; ++r) {
        TraceIdentityRow<S> row;
        row.r = r;
        S sign_r = (r % 2 == 0) ? S(1) : S(-1);
        row.trace_t = fam.transforms[r].entries.trace() -
                      sign_r * S(static_cast<long>(m - r)) * curv[r];
        if (r >= 1) {
            const Mat<S>& tprev = fam.transforms[r - 1].entries;
            row.trace_at = (a.entries * tprev).trace() +
                           sign_r * S(static_cast<long>(r)) * curv[r];
            row.trace_aat = (a2 * tprev).trace() -
                            sign_r * (S(-1) * curv[1] * curv[r] +
                                      S(static_cast<long>(r + 1)) * curv[r + 1]);
        } else {
            row.trace_at = S(0);
            row.trace_aat = S(0);
        }
        rows.push_back(row);
    }
    return rows;
}

/// Residual of  tr(T_{r-1}(A(t)) A'(t)) = (-1)^{r-1} d/dt S_r(A(t)),
/// both derivatives taken as central difference quotients at step h.
/// In float mode the residual is O(h^2); in exact mode it is a rational
/// function of h suitable for exact extrapolation to h = 0.
template <class S>
S derivative_identity_residual(const std::function<Operator<S>(S)>& family, const S& t,
                               std::size_t r, const S& h) {
    if (r == 0) throw std::invalid_argument("derivative_identity_residual: r >= 1 required");
    Operator<S> at = family(t);
    Operator<S> ap = family(t + h);
    Operator<S> am = family(t - h);
    S two_h = S(2) * h;
    Mat<S> aprime(at.dim(), at.dim());
    aprime = ap.entries - am.entries;
    aprime = (S(1) / two_h) * aprime;
    S sr_p = curvatures_from_traces(ap)[r];
    S sr_m = curvatures_from_traces(am)[r];
    S ds = (sr_p - sr_m) / two_h;
    Mat<S> tprev = newton_family(at, /*check_self_adjoint=*/false).transforms[r - 1].entries;
    S lhs = (tprev * aprime).trace();
    S sign = (r % 2 == 1) ? S(1) : S(-1);
    return lhs - sign * ds;
}

/// Default float-mode step for the derivative identity.
inline double derivative_step(double t) { return 1e-4 * std::max(1.0, std::fabs(t)); }

/// Per-order classification of a known spectrum: r-umbilical when every
/// screen-deleted function S_r^{(i)} agrees, r-maximal when S_r vanishes.
template <class S>
struct ClassificationRow {
    std::size_t r;
    bool r_umbilical;
    bool r_maximal;
};

template <class S>
std::vector<ClassificationRow<S>> classify(const Spectrum<S>& spec) {
    const std::size_t n = spec.screen_size();
    std::vector<S> sig = symfun::sigma_all(spec);
    std::vector<std::size_t> screen_idx;
    for (std::size_t i = 0; i < spec.size(); ++i)
        if (!spec.radical_slot || i != *spec.radical_slot) screen_idx.push_back(i);
    std::vector<ClassificationRow<S>> rows;
    for (std::size_t r = 1; r <= n; ++r) {
        ClassificationRow<S> row{r, true, sig[r] == S(0)};
        S first = symfun::sigma_deleted(spec, r, screen_idx.front());
        for (std::size_t k = 1; k < screen_idx.size() && row.r_umbilical; ++k)
            if (!(symfun::sigma_deleted(spec, r, screen_idx[k]) == first))
                row.r_umbilical = false;
        rows.push_back(row);
    }
    return rows;
}

} // namespace saccurv::newton
