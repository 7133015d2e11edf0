#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "saccurv/matrix.hpp"
#include "saccurv/scalar.hpp"
#include "saccurv/spectrum.hpp"

namespace saccurv {

/// A shape operator in a quasi-orthonormal frame. The signature carries the
/// diagonal metric sign of each frame direction: +1/-1 for screen vectors,
/// 0 for a degenerate direction (the radical slot, or a null pair vector
/// whose self-adjointness is checked elsewhere against the full metric).
template <class S>
struct Operator {
    Mat<S> entries;
    std::vector<int> signature;
    std::optional<std::size_t> radical_slot;
    std::vector<std::string> frame_labels; // optional, used in diagnostics

    Operator() = default;
    Operator(Mat<S> m, std::vector<int> sig, std::optional<std::size_t> radical = std::nullopt,
             std::vector<std::string> labels = {})
        : entries(std::move(m)), signature(std::move(sig)), radical_slot(radical),
          frame_labels(std::move(labels)) {
        entries.require_square();
        if (signature.size() != entries.rows())
            throw std::invalid_argument("Operator: signature length must match dimension");
        if (radical_slot && *radical_slot >= entries.rows())
            throw std::invalid_argument("Operator: radical slot out of range");
    }

    std::size_t dim() const { return entries.rows(); }

    /// First (i, j) with eps_i A_ij != eps_j A_ji, if any.
    std::optional<std::pair<std::size_t, std::size_t>> self_adjoint_violation() const {
        for (std::size_t i = 0; i < dim(); ++i)
            for (std::size_t j = i + 1; j < dim(); ++j) {
                S lhs = S(signature[i]) * entries(i, j);
                S rhs = S(signature[j]) * entries(j, i);
                if (!(lhs == rhs)) return std::make_pair(i, j);
            }
        return std::nullopt;
    }

    void require_self_adjoint() const {
        if (auto bad = self_adjoint_violation()) {
            auto label = [&](std::size_t k) {
                return k < frame_labels.size() ? frame_labels[k] : "#" + std::to_string(k);
            };
            throw std::invalid_argument("Operator: not self-adjoint, entries (" +
                                        label(bad->first) + ", " + label(bad->second) + ") vs (" +
                                        label(bad->second) + ", " + label(bad->first) +
                                        ") break eps_i*A_ij = eps_j*A_ji");
        }
    }

    bool is_diagonal() const {
        for (std::size_t i = 0; i < dim(); ++i)
            for (std::size_t j = 0; j < dim(); ++j)
                if (i != j && !(entries(i, j) == S(0))) return false;
        return true;
    }

    /// The operator with the radical row/column removed. No-op marker-wise:
    /// the result carries no radical slot.
    Operator restricted_to_screen() const {
        if (!radical_slot) return *this;
        Operator out;
        out.entries = entries.without_row_col(*radical_slot);
        for (std::size_t i = 0; i < dim(); ++i)
            if (i != *radical_slot) out.signature.push_back(signature[i]);
        for (std::size_t i = 0; i < frame_labels.size(); ++i)
            if (i != *radical_slot) out.frame_labels.push_back(frame_labels[i]);
        return out;
    }
};

/// Diagonal operator with the given spectrum; screen signs default to +1,
/// the radical slot (when marked) gets the degenerate sign 0.
template <class S>
Operator<S> diagonal_operator(const Spectrum<S>& spec, std::vector<int> signature = {}) {
    const std::size_t n = spec.size();
    Mat<S> m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = spec.values[i];
    if (signature.empty()) {
        signature.assign(n, 1);
        if (spec.radical_slot) signature[*spec.radical_slot] = 0;
    }
    return Operator<S>(std::move(m), std::move(signature), spec.radical_slot);
}

} // namespace saccurv
