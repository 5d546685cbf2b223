#pragma once
#include <cstdint>
#include <random>

namespace sedop::rng {

// Advances the state by the golden-ratio increment and returns the mixed
// output. Used to derive independent stream seeds from one master seed.
std::uint64_t splitmix64(std::uint64_t& state);

// Engine for a numbered stream of the master seed. Streams with distinct
// indices are decorrelated by the mixing; the mapping is pure.
std::mt19937_64 engine_for(std::uint64_t seed, std::uint64_t stream);

// Uniform draw in [0, 1) with 53 significant bits.
double uniform01(std::mt19937_64& g);

// Inverse standard normal CDF (Wichura's rational approximations, about
// 1e-15 absolute accuracy). Requires p in (0, 1).
double normal_icdf(double p);

// Standard normal draw via inverse transform; one engine call per draw.
double standard_normal(std::mt19937_64& g);

} // namespace sedop::rng
