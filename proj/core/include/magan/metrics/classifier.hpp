#pragma once

#include <cstdint>
#include <stdexcept>

#include "magan/autodiff/tensor.hpp"
#include "magan/io/dataset.hpp"
#include "magan/nn/mlp.hpp"

namespace magan::metrics {

struct ClassifierOptions {
    std::size_t hidden_width = 32;
    std::size_t epochs = 20;
    std::size_t batch_size = 64;
    double learning_rate = 0.01;
    double held_out_fraction = 0.2;
    double accuracy_bar = 0.95;
};

/// Softmax MLP over dataset labels, plus the accuracy it reached on the held-out split.
struct ReferenceClassifier {
    nn::Mlp network;
    std::size_t class_count = 0;
    double held_out_accuracy = 0.0;
};

/// Raised when the trained classifier misses the accuracy bar.
class ClassifierBelowBar : public std::runtime_error {
public:
    ClassifierBelowBar(const std::string& what, ReferenceClassifier classifier)
        : std::runtime_error(what), classifier_(std::move(classifier)) {}
    const ReferenceClassifier& classifier() const { return classifier_; }

private:
    ReferenceClassifier classifier_;
};

/// Trains on a seeded shuffle of the labelled data with Adamax and
/// cross-entropy. Deterministic under `seed`.
ReferenceClassifier train_reference_classifier(const io::Dataset& data, std::uint64_t seed,
                                               const ClassifierOptions& options = {});

/// Row-wise softmax class probabilities, [n x class_count].
ad::Tensor predict_proba(ReferenceClassifier& classifier, const ad::Tensor& points);

double accuracy(ReferenceClassifier& classifier, const ad::Tensor& points, std::span<const std::size_t> labels);

}  // namespace magan::metrics
