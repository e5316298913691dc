#pragma once

// Peak location on sampled curves.

#include "rotorlab/core_model.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace rotorlab {

struct Peak {
    double time = 0;
    double value = 0;
};

/// Largest sample with time in [lo, hi]; the earliest wins ties.
inline Peak window_max(const FidelityCurve& c, double lo, double hi) {
    Peak best{0.0, -1.0};
    bool found = false;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c.times[i] < lo || c.times[i] > hi) continue;
        if (!found || c.values[i] > best.value) best = {c.times[i], c.values[i]};
        found = true;
    }
    if (!found) throw std::out_of_range("no samples in peak window");
    return best;
}

/// Strict local maxima that are also the largest value within +-`radius` samples.
inline std::vector<Peak> dominant_maxima(const FidelityCurve& c, std::size_t radius) {
    std::vector<Peak> out;
    const std::size_t n = c.size();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(c.values[i] > c.values[i - 1] && c.values[i] >= c.values[i + 1])) continue;
        const std::size_t lo = i > radius ? i - radius : 0;
        const std::size_t hi = std::min(n - 1, i + radius);
        bool dominant = true;
        for (std::size_t j = lo; j <= hi && dominant; ++j)
            if (c.values[j] > c.values[i]) dominant = false;
        if (dominant) out.push_back({c.times[i], c.values[i]});
    }
    return out;
}

/// True if some strict local maximum lies within [lo, hi].
inline bool has_local_max(const FidelityCurve& c, double lo, double hi) {
    for (std::size_t i = 1; i + 1 < c.size(); ++i)
        if (c.times[i] >= lo && c.times[i] <= hi && c.values[i] > c.values[i - 1] && c.values[i] > c.values[i + 1])
            return true;
    return false;
}

} // namespace rotorlab
