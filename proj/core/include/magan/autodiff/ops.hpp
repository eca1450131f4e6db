#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "magan/autodiff/graph.hpp"

namespace magan::ad {

/// Matrix product of a [r x k] and b [k x c].
Var matmul(Var a, Var b);

/// x [r x c] plus bias [c] broadcast over rows. The only broadcasting form supported.
Var add_bias(Var x, Var bias);

// Pointwise activations. The relu/leaky-relu derivative at exactly 0 takes the
// negative-branch value (0, resp. slope).
Var relu(Var x);
Var leaky_relu(Var x, double slope);
Var sigmoid(Var x);
Var tanh(Var x);
Var square(Var x);

// Pointwise binary ops on equal shapes.
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);

/// Sum over all elements (no axis) or over one axis, which is removed from
/// the shape. Reducing a rank-1 tensor over axis 0 yields shape {1}.
Var sum(Var x, std::optional<std::size_t> axis = std::nullopt);
Var mean(Var x, std::optional<std::size_t> axis = std::nullopt);

/// Mean cross-entropy of row-wise softmax(logits [b x C]) against class labels.
Var softmax_cross_entropy(Var logits, std::span<const std::size_t> labels);

enum class UnaryKind { relu, leaky_relu, sigmoid, tanh, square };
enum class BinaryKind { add, sub, mul };
enum class ReduceKind { sum, mean };

Var elementwise(UnaryKind kind, Var x, double slope = 0.2);
Var elementwise(BinaryKind kind, Var a, Var b);
Var reduce(ReduceKind kind, Var x, std::optional<std::size_t> axis = std::nullopt);

}  // namespace magan::ad
