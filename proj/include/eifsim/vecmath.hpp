#pragma once

#include <Eigen/Dense>

namespace eifsim {

using FeatureVec = Eigen::VectorXf;

// Cosine similarity; zero whenever either argument is (near) zero, so empty
// views and unexplored cells score neutrally instead of producing NaNs.
template <typename DerivedA, typename DerivedB>
float cosine(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    const float na = a.norm();
    const float nb = b.norm();
    if (na <= 1e-12f || nb <= 1e-12f) return 0.0f;
    return a.dot(b) / (na * nb);
}

template <typename Derived>
FeatureVec normalized_or_zero(const Eigen::MatrixBase<Derived>& v) {
    const float n = v.norm();
    if (n <= 1e-12f) return FeatureVec::Zero(v.size());
    return v / n;
}

// Numerically stable softmax over a fixed-size logit vector.
template <typename Derived>
Eigen::VectorXf softmax(const Eigen::MatrixBase<Derived>& logits) {
    Eigen::VectorXf z = logits.template cast<float>();
    const float m = z.maxCoeff();
    Eigen::VectorXf e = (z.array() - m).exp();
    return e / e.sum();
}

}  // namespace eifsim
