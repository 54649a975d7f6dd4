#include "eifsim/attention.hpp"

namespace eifsim {

PromptTriplet build_prompts(const std::vector<CategoryId>& demanded, const EmbeddingTable& table) {
    PromptTriplet p;
    p.none = table.none_vector();
    if (demanded.empty()) {
        p.positive = p.none;
    } else {
        FeatureVec mean = FeatureVec::Zero(table.dim());
        for (CategoryId c : demanded) mean += table.embed(c);
        mean /= static_cast<float>(demanded.size());
        p.positive = normalized_or_zero(mean);
    }
    p.negative = normalized_or_zero(-p.positive + table.negation_vector());
    return p;
}

float relevance(const FeatureVec& view_global, const PromptTriplet& prompts, float temperature) {
    Eigen::Vector3f logits;
    logits << cosine(view_global, prompts.positive) / temperature,
        cosine(view_global, prompts.negative) / temperature,
        cosine(view_global, prompts.none) / temperature;
    return softmax(logits)[0];
}

}  // namespace eifsim
