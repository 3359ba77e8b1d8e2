#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "goeritz/diagram.hpp"

namespace goeritz {

/// Seed for randomized suites: the GOERITZ_SEED environment variable when it
/// is set to a number, otherwise a fixed default.
std::uint64_t sample_seed();

/// Grows a random valid diagram from a small base by kink insertions, clasps
/// across a face, free circles, and nested sub-diagrams.  Every intermediate
/// diagram is validated, so the result is always spherical with a consistent
/// nesting tree.  Deterministic for a given generator state.
Diagram random_diagram(std::mt19937_64& rng, int ops);

/// Batch of random diagrams grown from the given seed.
std::vector<Diagram> sample_corpus(int count, int ops, std::uint64_t seed);

}  // namespace goeritz
