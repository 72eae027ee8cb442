#pragma once

#include <cstdint>

#include "fcs/models.hpp"
#include "fcs/series.hpp"

namespace fcs {

/// Seeded, reproducible draw of length T from the model. AR-type families
/// discard a 500-observation burn-in started from zero; the mixture chain
/// starts at d_0 = 0 with no burn-in; the HAR simulator generates (r_t, V_t)
/// jointly and discards a 500-observation burn-in.
SeriesData simulate(const ModelSpec& spec, const ModelParams& params, int T, std::uint64_t seed);

/// Default parameter set for the synthetic HAR analysis sample
/// (annualized-return scale, log-variance level near -3).
HarParams synthetic_har_params();

}  // namespace fcs
