#pragma once

#include <cstdint>

namespace fpflab::stream_ids {

// Substream labels shared across simulators so that, e.g., the generic and
// linear-Gaussian particle steps consume identical dynamics noise for the
// same base stream.
inline constexpr std::uint64_t kPrior = 0;
inline constexpr std::uint64_t kDynamics = 1;
inline constexpr std::uint64_t kObservation = 2;
inline constexpr std::uint64_t kUpdate = 3;

}  // namespace fpflab::stream_ids
