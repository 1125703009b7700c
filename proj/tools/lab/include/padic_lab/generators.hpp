#pragma once

#include "padic/harmonic.hpp"
#include "padic_lab/config.hpp"

#include <cstdint>
#include <filesystem>
#include <random>

namespace padic::lab {

/// Independent, reproducible random stream for (seed, stream).
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream);

GridFunction random_real(const BallGrid& grid, std::mt19937_64& rng, double amplitude = 1.0);
GridFunction random_complex(const BallGrid& grid, std::mt19937_64& rng);

/// Real-valued initial condition from the [initial] table:
///   psi0         amplitude * p^{-N/2}
///   random       amplitude * independent standard normals
///   indicator    amplitude on the ball |x|_p <= p^radius around 0, zero elsewhere
///   character:b  amplitude * Re chi(x xi_b) = amplitude * cos(2 pi a b / M)
///   file         amplitude * values read from a CSV (one value, or "index,value", per line)
GridFunction make_initial(const InitialSpec& spec, const BallGrid& grid, std::uint64_t seed,
                          const std::filesystem::path& base_dir = ".");

}  // namespace padic::lab
