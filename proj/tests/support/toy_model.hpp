#pragma once

#include <cstdint>
#include <vector>

#include "seqrec/embedding.hpp"

namespace seqrec::fixtures {

// A model over the given session tokens with uniform random input weights,
// without any training. With subwords, every n-gram in [min_n, max_n] of
// every token gets its own row.
EmbeddingModel random_model(const std::vector<std::vector<VenueId>>& tokens,
                            std::size_t dim, bool use_subwords,
                            std::uint64_t seed, std::size_t min_n = 1,
                            std::size_t max_n = 5, bool non_seq = false);

}  // namespace seqrec::fixtures
