#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eifsim/taxonomy.hpp"
#include "eifsim/vecmath.hpp"

namespace eifsim {

// Deterministic pseudo-embedding table standing in for a CLIP image/text
// encoder. Each category vector is a seeded Gaussian hash of the category
// name plus a shared room-affinity component, so that categories from the
// same room score mildly similar (the co-occurrence signal a real encoder
// would carry) while every pairwise cosine stays inside (-0.6, 0.6).
//
// Construction retries with an incremented seed until the cosine bound
// holds, so the table is a pure function of (dim, seed).
class EmbeddingTable {
public:
    EmbeddingTable(int dim, std::uint64_t seed);

    int dim() const { return dim_; }
    std::uint64_t requested_seed() const { return requested_seed_; }
    std::uint64_t effective_seed() const { return effective_seed_; }

    const FeatureVec& embed(CategoryId id) const;
    const FeatureVec& embed(const std::string& category_name) const;  // throws on unknown name

    // Fixed auxiliary vectors used by the prompt builder.
    const FeatureVec& negation_vector() const { return negation_; }
    const FeatureVec& none_vector() const { return none_; }

    float max_abs_pairwise_cosine() const { return max_abs_cos_; }

private:
    bool build(std::uint64_t seed);

    int dim_;
    std::uint64_t requested_seed_;
    std::uint64_t effective_seed_;
    float max_abs_cos_ = 0.0f;
    std::vector<FeatureVec> vectors_;  // index = CategoryId - 1
    FeatureVec negation_;
    FeatureVec none_;
};

}  // namespace eifsim
