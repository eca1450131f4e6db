#pragma once

#include <cstddef>
#include <vector>

#include "magan/autodiff/tensor.hpp"
#include "magan/metrics/classifier.hpp"

namespace magan::metrics {

struct ScoreReport {
    double mean = 0.0;
    double stddev = 0.0;  // population std across batches
    std::size_t batch_count = 0;
    std::size_t samples_per_batch = 0;
    std::vector<double> per_batch;
};

inline constexpr double kKlFloor = 1e-12;

/// exp(mean_x KL(p(y|x) || p(y))) for one batch of class-probability rows,
/// where p(y) is the batch mean of the rows. Probabilities are floored at
/// kKlFloor inside the logarithms.
double batch_score(const ad::Tensor& probs);

/// Scores each batch of class probabilities and reports mean and spread.
/// Requires at least two batches.
ScoreReport inception_style_score(const std::vector<ad::Tensor>& prob_batches);

/// Classifies each sample batch with the reference classifier, then scores it.
ScoreReport inception_style_score(ReferenceClassifier& classifier, const std::vector<ad::Tensor>& sample_batches);

}  // namespace magan::metrics
