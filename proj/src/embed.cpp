#include "eifsim/embed.hpp"

#include <stdexcept>

#include "eifsim/rng.hpp"

namespace eifsim {

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

FeatureVec gaussian_vec(int dim, std::uint64_t seed) {
    SplitMix64 rng(seed);
    FeatureVec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = static_cast<float>(rng.normal());
    return v;
}

// Strength of the shared room component. cos between same-room categories
// lands around beta^2 / (1 + beta^2) ~= 0.23 before hash noise.
constexpr float kRoomAffinity = 0.55f;

}  // namespace

EmbeddingTable::EmbeddingTable(int dim, std::uint64_t seed)
    : dim_(dim), requested_seed_(seed), effective_seed_(seed) {
    if (dim < 8) throw std::invalid_argument("feature_dim must be >= 8");
    // Retry until the pairwise-cosine bound holds; bounded so a broken
    // configuration fails loudly instead of spinning.
    for (int attempt = 0; attempt < 64; ++attempt) {
        if (build(seed + static_cast<std::uint64_t>(attempt))) {
            effective_seed_ = seed + static_cast<std::uint64_t>(attempt);
            return;
        }
    }
    throw std::runtime_error("could not build embedding table within cosine bound");
}

bool EmbeddingTable::build(std::uint64_t seed) {
    const int n = category_count();
    vectors_.assign(static_cast<std::size_t>(n), FeatureVec());

    FeatureVec room_axis[4];
    for (int r = 0; r < 4; ++r)
        room_axis[r] = normalized_or_zero(gaussian_vec(dim_, mix_seed(seed, 0x9000 + r)));

    for (CategoryId id = 1; id <= n; ++id) {
        const CategoryInfo& info = category_info(id);
        FeatureVec v = normalized_or_zero(gaussian_vec(dim_, mix_seed(seed, fnv1a(info.name))));
        if (info.room != kRoomNeutral) v += kRoomAffinity * room_axis[info.room];
        vectors_[static_cast<std::size_t>(id - 1)] = normalized_or_zero(v);
    }

    negation_ = normalized_or_zero(gaussian_vec(dim_, mix_seed(seed, fnv1a("<negation>"))));
    none_ = normalized_or_zero(gaussian_vec(dim_, mix_seed(seed, fnv1a("<none>"))));

    max_abs_cos_ = 0.0f;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const float c = std::abs(cosine(vectors_[i], vectors_[j]));
            if (c > max_abs_cos_) max_abs_cos_ = c;
        }
    return max_abs_cos_ < 0.6f;
}

const FeatureVec& EmbeddingTable::embed(CategoryId id) const {
    if (id < 1 || id > category_count())
        throw std::invalid_argument("unknown category id: " + std::to_string(id));
    return vectors_[static_cast<std::size_t>(id - 1)];
}

const FeatureVec& EmbeddingTable::embed(const std::string& category_name) const {
    const CategoryId id = category_id(category_name);
    if (id < 0) throw std::invalid_argument("unknown category: " + category_name);
    return embed(id);
}

}  // namespace eifsim
