#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "saccurv/scalar.hpp"
#include "saccurv/spectrum.hpp"

namespace saccurv::symfun {

/// sigma_r of the given values via the one-value-at-a-time recurrence,
/// truncated at degree r. sigma_0 = 1; sigma_r = 0 for r > size.
template <class S>
S sigma(std::span<const S> values, std::size_t r) {
    if (r == 0) return S(1);
    if (r > values.size()) return S(0);
    std::vector<S> e(r + 1, S(0));
    e[0] = S(1);
    for (const S& v : values)
        for (std::size_t j = r; j >= 1; --j) e[j] = e[j] + v * e[j - 1];
    return e[r];
}

template <class S>
S sigma(const std::vector<S>& values, std::size_t r) {
    return sigma(std::span<const S>(values), r);
}

template <class S>
S sigma(const Spectrum<S>& spec, std::size_t r) {
    return sigma(std::span<const S>(spec.values), r);
}

/// Power sums p_1..p_k of the values.
template <class S>
std::vector<S> power_sums(std::span<const S> values, std::size_t k) {
    std::vector<S> p(k + 1, S(0));
    std::vector<S> cur(values.begin(), values.end());
    for (std::size_t i = 1; i <= k; ++i) {
        for (std::size_t j = 0; j < cur.size(); ++j) {
            p[i] = p[i] + cur[j];
            cur[j] = cur[j] * values[j];
        }
    }
    return p; // p[0] unused
}

/// Elementary symmetric functions e_0..e_m from power sums p_1..p_m via
/// the Newton identity  k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i.
/// The division by k is exact over the rationals.
template <class S>
std::vector<S> elementary_from_power_sums(const std::vector<S>& p, std::size_t m) {
    std::vector<S> e(m + 1, S(0));
    e[0] = S(1);
    for (std::size_t k = 1; k <= m; ++k) {
        S acc(0);
        for (std::size_t i = 1; i <= k; ++i) {
            S term = e[k - i] * p[i];
            acc = (i % 2 == 1) ? acc + term : acc - term;
        }
        e[k] = acc / S(static_cast<long>(k));
    }
    return e;
}

/// All of sigma_0..sigma_m in O(m^2) via the power-sum route. This path is
/// algorithmically independent of sigma() above; the two cross-validate.
template <class S>
std::vector<S> sigma_all(std::span<const S> values) {
    const std::size_t m = values.size();
    return elementary_from_power_sums(power_sums(values, m), m);
}

template <class S>
std::vector<S> sigma_all(const std::vector<S>& values) {
    return sigma_all(std::span<const S>(values));
}

template <class S>
std::vector<S> sigma_all(const Spectrum<S>& spec) {
    return sigma_all(std::span<const S>(spec.values));
}

/// sigma_r of the values with entry beta removed (the deleted symmetric
/// function). beta out of range is a caller bug.
template <class S>
S sigma_deleted(std::span<const S> values, std::size_t r, std::size_t beta) {
    if (beta >= values.size())
        throw std::out_of_range("sigma_deleted: index out of range");
    std::vector<S> rest;
    rest.reserve(values.size() - 1);
    for (std::size_t i = 0; i < values.size(); ++i)
        if (i != beta) rest.push_back(values[i]);
    return sigma(std::span<const S>(rest), r);
}

template <class S>
S sigma_deleted(const std::vector<S>& values, std::size_t r, std::size_t beta) {
    return sigma_deleted(std::span<const S>(values), r, beta);
}

template <class S>
S sigma_deleted(const Spectrum<S>& spec, std::size_t r, std::size_t beta) {
    return sigma_deleted(std::span<const S>(spec.values), r, beta);
}

} // namespace saccurv::symfun
