#pragma once

#include <vector>

#include "eifsim/embed.hpp"
#include "eifsim/vecmath.hpp"

namespace eifsim {

// The three-prompt relevance scorer: "contains {O_k}", "does not contain
// {O_k}", "contains nothing", each as an embedding-space stand-in.
struct PromptTriplet {
    FeatureVec positive;
    FeatureVec negative;
    FeatureVec none;
};

PromptTriplet build_prompts(const std::vector<CategoryId>& demanded, const EmbeddingTable& table);

// Softmax over the cosine similarities of the view-level feature against the
// three prompts, at the given temperature; returns the positive-prompt
// probability. A zero view feature scores exactly 1/3.
float relevance(const FeatureVec& view_global, const PromptTriplet& prompts, float temperature);

}  // namespace eifsim
