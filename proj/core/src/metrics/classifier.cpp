#include "magan/metrics/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "magan/autodiff/ops.hpp"
#include "magan/io/rng.hpp"
#include "magan/nn/adamax.hpp"

namespace magan::metrics {

ReferenceClassifier train_reference_classifier(const io::Dataset& data, std::uint64_t seed,
                                               const ClassifierOptions& options) {
    data.validate();
    if (data.labels.size() != data.size() || data.size() == 0) {
        throw std::invalid_argument("train_reference_classifier: dataset must be labelled");
    }
    const std::size_t classes = *std::max_element(data.labels.begin(), data.labels.end()) + 1;
    if (classes < 2) throw std::invalid_argument("train_reference_classifier: need at least two classes");
    if (!(options.held_out_fraction > 0.0 && options.held_out_fraction < 1.0)) {
        throw std::invalid_argument("train_reference_classifier: held-out fraction must lie in (0, 1)");
    }

    io::Rng rng(seed);
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.uniform_index(i)]);

    const auto held = static_cast<std::size_t>(std::ceil(options.held_out_fraction * static_cast<double>(data.size())));
    if (held == 0 || held >= data.size()) throw std::invalid_argument("train_reference_classifier: dataset too small");
    std::vector<std::size_t> test(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(held));
    std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(held), order.end());

    nn::MlpSpec spec;
    spec.widths = {data.dim, options.hidden_width, options.hidden_width, classes};
    spec.hidden = nn::Activation::leaky_relu(0.2);
    spec.output = nn::Activation::identity();

    ReferenceClassifier clf;
    clf.network = nn::init_mlp(spec, rng.split());
    clf.class_count = classes;
    nn::AdamaxState opt({options.learning_rate, 0.9, 0.999});

    const std::size_t b = std::min(options.batch_size, train.size());
    for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
        for (std::size_t i = train.size(); i > 1; --i) std::swap(train[i - 1], train[rng.uniform_index(i)]);
        for (std::size_t start = 0; start + b <= train.size(); start += b) {
            std::span<const std::size_t> idx(train.data() + start, b);
            std::vector<std::size_t> labels(b);
            for (std::size_t k = 0; k < b; ++k) labels[k] = data.labels[idx[k]];
            ad::Graph g;
            ad::Var logits = nn::forward_mlp(g, clf.network, g.constant(data.gather(idx)));
            ad::Var loss = ad::softmax_cross_entropy(logits, labels);
            auto params = clf.network.parameters();
            for (auto* p : params) p->zero_grad();
            g.backward(loss);
            opt.step(params);
        }
    }

    std::vector<std::size_t> test_labels(test.size());
    for (std::size_t k = 0; k < test.size(); ++k) test_labels[k] = data.labels[test[k]];
    clf.held_out_accuracy = accuracy(clf, data.gather(test), test_labels);
    if (clf.held_out_accuracy < options.accuracy_bar) {
        throw ClassifierBelowBar("reference classifier reached held-out accuracy " +
                                     std::to_string(clf.held_out_accuracy) + ", below the bar of " +
                                     std::to_string(options.accuracy_bar),
                                 std::move(clf));
    }
    return clf;
}

ad::Tensor predict_proba(ReferenceClassifier& classifier, const ad::Tensor& points) {
    ad::Graph g;
    ad::Tensor logits = nn::forward_mlp(g, classifier.network, g.constant(points), nn::Binding::frozen).value();
    const std::size_t rows = logits.rows(), cols = logits.cols();
    for (std::size_t i = 0; i < rows; ++i) {
        double* z = &logits.storage()[i * cols];
        const double zmax = *std::max_element(z, z + cols);
        double denom = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            z[j] = std::exp(z[j] - zmax);
            denom += z[j];
        }
        for (std::size_t j = 0; j < cols; ++j) z[j] /= denom;
    }
    return logits;
}

double accuracy(ReferenceClassifier& classifier, const ad::Tensor& points, std::span<const std::size_t> labels) {
    const ad::Tensor probs = predict_proba(classifier, points);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < probs.rows(); ++i) {
        const double* row = &probs.storage()[i * probs.cols()];
        const auto best = static_cast<std::size_t>(std::max_element(row, row + probs.cols()) - row);
        if (best == labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(probs.rows());
}

}  // namespace magan::metrics
