#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "saccurv/scalar.hpp"
#include "saccurv/spectrum.hpp"
#include "saccurv/symfun.hpp"

namespace saccurv::identities {

/// Scalar inputs of the leaf-curvature equations: the order r, the screen
/// dimension n, the conformal pair, the ambient constant curvature c, the
/// 1-form value tau(E), the directional derivatives along the radical
/// field, and the trace bundle of order r-1. Derivatives are supplied by
/// the caller (e.g. by finite differences over a fixture family); this
/// module is purely algebraic.
template <class S>
struct TheoremInputs {
    std::size_t r = 1;
    std::size_t n = 1;
    S a{0}, phi{1};
    S c{0};
    S tau_e{0};
    S d_srstar{0}; // E(S_r*)
    S d_phir{0};   // E(phi^r)
    S d_jrstar{0}; // E(J_r*)
    S tr_t{0};     // tr(T*_{r-1})
    S tr_n{0};     // tr(N*_{r-1})
    S tr_at{0};    // tr(A_E* T*_{r-1})
    S tr_an{0};    // tr(A_E* N*_{r-1})
    S tr_aat{0};   // tr(A_E*^2 T*_{r-1})
    S tr_aan{0};   // tr(A_E*^2 N*_{r-1})
    S s1_star{0};
    S sr_star{0};
    S j_rstar{0};
    std::optional<Spectrum<S>> kstar;

    /// When a spectrum is supplied, the trace bundle must agree with the
    /// values the closed trace identities force on it.
    void validate() const {
        if (r < 1) throw std::invalid_argument("TheoremInputs: r >= 1 required");
        if (!kstar) return;
        std::vector<S> sig = symfun::sigma_all(*kstar);
        sig.push_back(S(0));
        const std::size_t m = kstar->size();
        if (r > m) throw std::invalid_argument("TheoremInputs: r exceeds spectrum size");
        S sign_prev = ((r - 1) % 2 == 0) ? S(1) : S(-1);
        S exp_tr_t = sign_prev * (S(static_cast<long>(m)) - S(static_cast<long>(r - 1))) * sig[r - 1];
        S exp_tr_at = sign_prev * S(static_cast<long>(r)) * sig[r];
        S exp_tr_aat = S(0) - sign_prev * (S(0) - sig[1] * sig[r] +
                                           S(static_cast<long>(r + 1)) * sig[r + 1]);
        if (!(tr_t == exp_tr_t) || !(tr_at == exp_tr_at) || !(tr_aat == exp_tr_aat))
            throw std::invalid_argument(
                "TheoremInputs: trace bundle inconsistent with the supplied spectrum");
        if (!(s1_star == sig[1]) || !(sr_star == sig[r]))
            throw std::invalid_argument(
                "TheoremInputs: curvature scalars inconsistent with the supplied spectrum");
    }
};

/// Residual of the r-umbilical leaf equation ("leaf-curvature"): the gap
/// between the derivative side and the trace side, oriented so that with a
/// constant spectrum and flat data the value equals the surviving trace
/// terms. Zero means the inputs are consistent with a constant-curvature
/// leaf.
template <class S>
S theo1_residual(const TheoremInputs<S>& inp) {
    if (inp.r < 1) throw std::invalid_argument("theo1_residual: r >= 1 required");
    const S sign = (inp.r % 2 == 0) ? S(1) : S(-1);
    S lhs = sign * (pow_s(inp.phi, inp.r) * inp.d_srstar + inp.d_phir * inp.sr_star + inp.d_jrstar);
    S a1 = inp.a * inp.tau_e - inp.c * pow_s(inp.phi, inp.r - 1);
    S b1 = (inp.a - inp.phi) * inp.tau_e - inp.a - inp.c;
    S rhs = S(0) - pow_s(inp.phi, inp.r) * inp.tr_aat - inp.phi * inp.tr_aan -
            pow_s(inp.phi, inp.r) * inp.tau_e * inp.tr_at + inp.a * inp.tr_an + a1 * inp.tr_t +
            b1 * inp.tr_n;
    return rhs - lhs;
}

/// Residual of the semi-Euclidean criterion ("semi-euclidean"); only
/// defined for a = 0 (structure field inside the screen).
template <class S>
S cooo_residual(const TheoremInputs<S>& inp) {
    if (!(inp.a == S(0)))
        throw std::invalid_argument("cooo_residual: requires a = 0");
    const S sign_prev = (inp.r % 2 == 1) ? S(1) : S(-1); // (-1)^{r-1}
    return pow_s(inp.phi, inp.r) * inp.d_srstar + inp.d_phir * inp.sr_star -
           sign_prev * pow_s(inp.phi, inp.r) * (inp.tr_aat + inp.tau_e * inp.tr_at);
}

/// The deleted-function sum entering the radical-derivative equation,
/// summed over screen indices with the deleted index equal to the summation
/// index. Bridges to tr(A^2 T_{r-1}) through the power identity
/// sum_i k_i^2 S_{r-1}^(i) = S_1 S_r - (r+1) S_{r+1}.
template <class S>
S duu_sum(const Spectrum<S>& kstar, std::size_t r) {
    S acc(0);
    for (std::size_t i = 0; i < kstar.size(); ++i) {
        if (kstar.radical_slot && i == *kstar.radical_slot) continue;
        acc = acc + kstar.values[i] * kstar.values[i] * symfun::sigma_deleted(kstar, r - 1, i);
    }
    return acc;
}

/// Residual of the radical-derivative equation ("radical-derivative"):
/// E(phi^r S_r*) - r phi^r S_r* tau(E) - phi^r sum_i k_i*^2 S_{r-1}^(i).
/// Requires the spectrum and a = 0.
template <class S>
S duu_residual(const TheoremInputs<S>& inp) {
    if (!inp.kstar) throw std::invalid_argument("duu_residual: spectrum required");
    if (!(inp.a == S(0))) throw std::invalid_argument("duu_residual: requires a = 0");
    S phir = pow_s(inp.phi, inp.r);
    S d_total = phir * inp.d_srstar + inp.d_phir * inp.sr_star; // E(phi^r S_r*)
    return d_total - S(static_cast<long>(inp.r)) * phir * inp.sr_star * inp.tau_e -
           phir * duu_sum(*inp.kstar, inp.r);
}

/// div(T_r E) = (-1)^r (A_1 S_r* + A_2 J_r* + phi^r E(S_r*) + E(J_r*)),
/// A_1 = phi^r tau(E) + E(phi^r) - phi^r S_1*, A_2 = tau(E) - S_1*.
/// This is the scalar the compact-manifold integral formulas integrate.
template <class S>
S the2_divergence(const TheoremInputs<S>& inp) {
    if (inp.r < 1) throw std::invalid_argument("the2_divergence: r >= 1 required");
    S phir = pow_s(inp.phi, inp.r);
    S a1 = phir * inp.tau_e + inp.d_phir - phir * inp.s1_star;
    S a2 = inp.tau_e - inp.s1_star;
    S sign = (inp.r % 2 == 0) ? S(1) : S(-1);
    return sign *
           (a1 * inp.sr_star + a2 * inp.j_rstar + phir * inp.d_srstar + inp.d_jrstar);
}

} // namespace saccurv::identities
