#pragma once

#include <cstdint>
#include <random>

#include "hyperfact/types.hpp"

namespace hyperfact {

// Seeded generators for test and generator machinery. Every draw is a
// pure function of the engine state, so fixed seeds give fixed outputs.

CMatrix random_gaussian(std::mt19937_64& rng, Index rows, Index cols);

// Haar-distributed via phase-fixed QR of a Gaussian matrix.
CMatrix random_unitary(std::mt19937_64& rng, Index dim);

// Orthogonal projection onto a random subspace of the given rank.
CMatrix random_projection(std::mt19937_64& rng, Index dim, Index rank);

// Random matrix scaled to the requested spectral norm.
CMatrix random_contraction(std::mt19937_64& rng, Index dim, double norm_bound);

// Random commuting unitary pair (simultaneously diagonalizable).
std::pair<CMatrix, CMatrix> random_commuting_unitaries(std::mt19937_64& rng, Index dim);

}  // namespace hyperfact
