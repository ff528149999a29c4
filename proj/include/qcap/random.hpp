#pragma once

#include <cstdint>
#include <random>

#include "qcap/qcore.hpp"

namespace qcap {

using Rng = std::mt19937_64;

/// Independent generator for substream `stream` of a 64-bit seed. Results depend only on
/// (seed, stream), never on scheduling, so parallel work can be reduced in a fixed order.
Rng substream(std::uint64_t seed, std::uint64_t stream);

/// Haar-distributed unitary (QR of a Ginibre matrix with the R-diagonal phase fixed).
ComplexMatrix random_unitary(std::size_t d, Rng& rng);
/// Haar-distributed unit vector.
ComplexVector random_unit_vector(std::size_t d, Rng& rng);
/// Induced-measure random density matrix G G^dagger / Tr, G of size d x rank.
DensityOperator random_density(const SystemLayout& layout, Rng& rng, std::size_t rank = 0);
PureState random_pure(const SystemLayout& layout, Rng& rng);

}  // namespace qcap
