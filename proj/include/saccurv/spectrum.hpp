#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "saccurv/scalar.hpp"

namespace saccurv {

/// Ordered eigenvalue list of a shape operator. The radical slot, when
/// present, marks the eigenvalue belonging to the degenerate direction and
/// must hold an exact zero.
template <class S>
struct Spectrum {
    std::vector<S> values;
    std::optional<std::size_t> radical_slot;

    Spectrum() = default;
    Spectrum(std::vector<S> vals, std::optional<std::size_t> radical = std::nullopt)
        : values(std::move(vals)), radical_slot(radical) {
        validate();
    }

    void validate() const {
        if (values.empty())
            throw std::invalid_argument("Spectrum: needs at least one eigenvalue");
        if (radical_slot) {
            if (*radical_slot >= values.size())
                throw std::invalid_argument("Spectrum: radical slot out of range");
            if (!(values[*radical_slot] == S(0)))
                throw std::invalid_argument("Spectrum: radical eigenvalue must be zero");
        }
    }

    std::size_t size() const { return values.size(); }

    /// Screen dimension n: total count minus the radical slot if marked.
    std::size_t screen_size() const { return values.size() - (radical_slot ? 1 : 0); }

    std::vector<S> screen_values() const {
        std::vector<S> out;
        out.reserve(screen_size());
        for (std::size_t i = 0; i < values.size(); ++i)
            if (!radical_slot || i != *radical_slot) out.push_back(values[i]);
        return out;
    }
};

} // namespace saccurv
