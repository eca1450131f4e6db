#include "magan/metrics/score.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace magan::metrics {

double batch_score(const ad::Tensor& probs) {
    if (probs.rank() != 2) throw ad::DimensionError("batch_score: expected [samples x classes] probabilities");
    const std::size_t n = probs.rows(), c = probs.cols();
    std::vector<double> marginal(c, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < c; ++j) marginal[j] += probs.at(i, j);
    for (auto& v : marginal) v /= static_cast<double>(n);

    double kl_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            const double p = probs.at(i, j);
            if (p <= 0.0) continue;
            kl_total += p * (std::log(std::max(p, kKlFloor)) - std::log(std::max(marginal[j], kKlFloor)));
        }
    }
    // The mean KL is a mutual information and cannot be negative; clip rounding noise.
    const double mean_kl = std::max(0.0, kl_total / static_cast<double>(n));
    return std::exp(mean_kl);
}

ScoreReport inception_style_score(const std::vector<ad::Tensor>& prob_batches) {
    if (prob_batches.size() < 2) throw std::invalid_argument("inception_style_score: need at least two batches");
    ScoreReport r;
    r.batch_count = prob_batches.size();
    r.samples_per_batch = prob_batches.front().rows();
    for (const auto& b : prob_batches) r.per_batch.push_back(batch_score(b));
    for (double s : r.per_batch) r.mean += s;
    r.mean /= static_cast<double>(r.batch_count);
    double var = 0.0;
    for (double s : r.per_batch) var += (s - r.mean) * (s - r.mean);
    r.stddev = std::sqrt(var / static_cast<double>(r.batch_count));
    return r;
}

ScoreReport inception_style_score(ReferenceClassifier& classifier, const std::vector<ad::Tensor>& sample_batches) {
    std::vector<ad::Tensor> probs;
    probs.reserve(sample_batches.size());
    for (const auto& batch : sample_batches) probs.push_back(predict_proba(classifier, batch));
    return inception_style_score(probs);
}

}  // namespace magan::metrics
