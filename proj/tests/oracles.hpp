// Test-only oracles, deliberately independent of the library's own
// computation paths: subset enumeration for symmetric functions, principal
// minors for characteristic coefficients, exact step-extrapolation for
// difference quotients.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "saccurv/matrix.hpp"
#include "saccurv/scalar.hpp"
#include "saccurv/shape_op.hpp"
#include "saccurv/spectrum.hpp"

namespace oracles {

using saccurv::Mat;
using saccurv::Operator;
using saccurv::Rat;
using saccurv::Spectrum;

/// sigma_r by literal enumeration of all r-element index subsets.
template <class S>
S sigma_enumerated(const std::vector<S>& values, std::size_t r) {
    if (r == 0) return S(1);
    const std::size_t n = values.size();
    if (r > n) return S(0);
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i) idx[i] = i;
    S total(0);
    for (;;) {
        S prod(1);
        for (std::size_t i : idx) prod = prod * values[i];
        total = total + prod;
        std::size_t k = r;
        while (k > 0 && idx[k - 1] == n - r + k - 1) --k;
        if (k == 0) break;
        ++idx[k - 1];
        for (std::size_t i = k; i < r; ++i) idx[i] = idx[i - 1] + 1;
    }
    return total;
}

/// S_r as the sum of all r x r principal minors, each determinant by
/// cofactor expansion. Exponential but exact; the independent route to the
/// characteristic coefficients.
template <class S>
S principal_minor_sum(const Mat<S>& a, std::size_t r) {
    if (r == 0) return S(1);
    const std::size_t n = a.rows();
    if (r > n) return S(0);
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i) idx[i] = i;
    S total(0);
    for (;;) {
        Mat<S> minor(r, r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) minor(i, j) = a(idx[i], idx[j]);
        total = total + saccurv::det_cofactor(minor);
        std::size_t k = r;
        while (k > 0 && idx[k - 1] == n - r + k - 1) --k;
        if (k == 0) break;
        ++idx[k - 1];
        for (std::size_t i = k; i < r; ++i) idx[i] = idx[i - 1] + 1;
    }
    return total;
}

/// Exact limit of an even polynomial R(h) = R0 + c1 h^2 + ... + cJ h^2J
/// from J+1 sampled nodes, by Lagrange interpolation in x = h^2 at x = 0.
template <class S>
S extrapolate_to_zero(const std::vector<S>& h, const std::vector<S>& r) {
    std::vector<S> x;
    for (const S& hi : h) x.push_back(hi * hi);
    S out(0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        S w(1);
        for (std::size_t k = 0; k < x.size(); ++k)
            if (k != i) w = w * x[k] / (x[k] - x[i]);
        out = out + r[i] * w;
    }
    return out;
}

/// Deterministic rational test data.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : rng_(seed) {}

    Rat value(long lo = -9, long hi = 9, long den_max = 5) {
        std::uniform_int_distribution<long> num(lo, hi);
        std::uniform_int_distribution<long> den(1, den_max);
        return saccurv::rat(num(rng_), den(rng_));
    }

    Rat nonzero() {
        for (;;) {
            Rat q = value();
            if (!(q == Rat(0))) return q;
        }
    }

    std::size_t size(std::size_t lo, std::size_t hi) {
        std::uniform_int_distribution<std::size_t> d(lo, hi);
        return d(rng_);
    }

    std::vector<Rat> values(std::size_t count, long lo = -9, long hi = 9, long den_max = 5) {
        std::vector<Rat> v;
        v.reserve(count);
        for (std::size_t i = 0; i < count; ++i) v.push_back(value(lo, hi, den_max));
        return v;
    }

    Spectrum<Rat> spectrum_with_radical(std::size_t screen_len) {
        std::vector<Rat> vals{Rat(0)};
        for (std::size_t i = 0; i < screen_len; ++i) vals.push_back(value());
        return Spectrum<Rat>(std::move(vals), 0);
    }

    Operator<Rat> self_adjoint(std::size_t dim) {
        std::vector<int> sig(dim);
        for (auto& s : sig) s = size(0, 1) == 0 ? -1 : 1;
        Mat<Rat> m(dim, dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i; j < dim; ++j) {
                m(i, j) = value();
                if (i != j) m(j, i) = Rat(sig[i] * sig[j]) * m(i, j);
            }
        return Operator<Rat>(std::move(m), std::move(sig));
    }

  private:
    std::mt19937_64 rng_;
};

} // namespace oracles
