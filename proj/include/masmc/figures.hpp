#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "masmc/errors.hpp"

namespace masmc {

// One row of a closed-form vs Monte Carlo comparison.
struct SeriesPoint {
    uint32_t x = 0;      // the swept parameter (r or m)
    double p_closed = 0.0;
    double p_mc = 0.0;
    double stderr_ = 0.0;

    friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

enum class FigureKind {
    fragment_capture_vs_r, // sweep r, closed form 1/r
    corrupt_dm_vs_m,       // sweep m, closed form 1/m
};

// Probability an adversary tapping one of r fragment channels captures the
// critical fragment.
double eq_p_fragment(uint32_t r);

// Probability the uniformly drawn coordinating decision maker (of m) is the
// corrupt one.
double eq_p_dm(uint32_t m);

// Probability of a corrupt coordinator or a compromised agent:
// 1/m + 1/p - 1/(m p).
double eq_p_wrong_agent(uint32_t m, uint32_t p);

// Sweeps x over [lo, hi], pairing the closed form with a Monte Carlo
// estimate of `trials` trials per point.
std::vector<SeriesPoint> emit_series(FigureKind kind, uint32_t lo, uint32_t hi,
                                     uint64_t trials, uint64_t seed);

// m sweep at fixed p for the wrong-agent probability.
std::vector<SeriesPoint> emit_wrong_agent_series(uint32_t m_lo, uint32_t m_hi,
                                                 uint32_t p, uint64_t trials,
                                                 uint64_t seed);

// CSV form: header "x,p_closed,p_mc,stderr", LF endings, probabilities in
// scientific notation with 17 significant digits so parsing is exact.
std::string series_to_csv(std::span<const SeriesPoint> series);
std::vector<SeriesPoint> parse_series_csv(std::string_view csv);

} // namespace masmc
