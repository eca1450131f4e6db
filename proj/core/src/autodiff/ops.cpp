#include "magan/autodiff/ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "op_builder.hpp"

namespace magan::ad {

namespace {

void require_same_shape(const char* op, const Tensor& a, const Tensor& b) {
    if (a.shape() != b.shape()) {
        throw DimensionError(std::string(op) + ": shape mismatch " + shape_string(a.shape()) + " vs " +
                             shape_string(b.shape()));
    }
}

void require_rank(const char* op, const Tensor& t, std::size_t rank) {
    if (t.rank() != rank) {
        throw DimensionError(std::string(op) + ": expected rank " + std::to_string(rank) + ", got shape " +
                             shape_string(t.shape()));
    }
}

template <typename F>
Var unary(OpKind kind, Var x, F f, double scalar = 0.0) {
    OpBuilder::owner(x);
    const Tensor& in = x.value();
    Tensor out(in.shape());
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = f(in[i]);
    return OpBuilder::make({.op = kind, .a = x, .scalar = scalar}, std::move(out));
}

template <typename F>
Var binary(OpKind kind, const char* name, Var a, Var b, F f) {
    OpBuilder::owner(a, b);
    const Tensor& x = a.value();
    const Tensor& y = b.value();
    require_same_shape(name, x, y);
    Tensor out(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = f(x[i], y[i]);
    return OpBuilder::make({.op = kind, .a = a, .b = b, .arity = 2}, std::move(out));
}

double stable_sigmoid(double v) {
    if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
    const double e = std::exp(v);
    return e / (1.0 + e);
}

Var reduce_axis(OpKind kind, Var x, std::size_t axis) {
    OpBuilder::owner(x);
    const Tensor& in = x.value();
    if (axis >= in.rank()) {
        throw DimensionError("reduce: axis " + std::to_string(axis) + " out of range for shape " +
                             shape_string(in.shape()));
    }
    const Shape& s = in.shape();
    std::size_t outer = 1, inner = 1;
    for (std::size_t k = 0; k < axis; ++k) outer *= s[k];
    for (std::size_t k = axis + 1; k < s.size(); ++k) inner *= s[k];
    const std::size_t len = s[axis];

    Shape out_shape;
    for (std::size_t k = 0; k < s.size(); ++k)
        if (k != axis) out_shape.push_back(s[k]);
    if (out_shape.empty()) out_shape.push_back(1);

    Tensor out(out_shape);
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t j = 0; j < len; ++j)
            for (std::size_t i = 0; i < inner; ++i) out[o * inner + i] += in[(o * len + j) * inner + i];
    if (kind == OpKind::mean_axis) {
        for (auto& v : out.storage()) v /= static_cast<double>(len);
    }
    return OpBuilder::make({.op = kind, .a = x, .axis = axis}, std::move(out));
}

}  // namespace

Var matmul(Var a, Var b) {
    OpBuilder::owner(a, b);
    const Tensor& x = a.value();
    const Tensor& y = b.value();
    require_rank("matmul", x, 2);
    require_rank("matmul", y, 2);
    if (x.cols() != y.rows()) {
        throw DimensionError("matmul: inner dimensions differ, " + shape_string(x.shape()) + " vs " +
                             shape_string(y.shape()));
    }
    const std::size_t rows = x.rows(), inner = x.cols(), cols = y.cols();
    Tensor out({rows, cols});
    auto& c = out.storage();
    const auto& av = x.storage();
    const auto& bv = y.storage();
    for (std::size_t i = 0; i < rows; ++i) {
        double* cr = &c[i * cols];
        for (std::size_t k = 0; k < inner; ++k) {
            const double aik = av[i * inner + k];
            const double* br = &bv[k * cols];
            for (std::size_t j = 0; j < cols; ++j) cr[j] += aik * br[j];
        }
    }
    return OpBuilder::make({.op = OpKind::matmul, .a = a, .b = b, .arity = 2}, std::move(out));
}

Var add_bias(Var x, Var bias) {
    OpBuilder::owner(x, bias);
    const Tensor& in = x.value();
    const Tensor& bv = bias.value();
    require_rank("add_bias", in, 2);
    require_rank("add_bias", bv, 1);
    if (in.cols() != bv.size()) {
        throw DimensionError("add_bias: bias " + shape_string(bv.shape()) + " does not match columns of " +
                             shape_string(in.shape()));
    }
    Tensor out = in;
    const std::size_t cols = bv.size();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i % cols];
    return OpBuilder::make({.op = OpKind::add_bias, .a = x, .b = bias, .arity = 2}, std::move(out));
}

Var relu(Var x) {
    return unary(OpKind::relu, x, [](double v) { return v > 0.0 ? v : 0.0; });
}

Var leaky_relu(Var x, double slope) {
    if (!(slope > 0.0 && slope < 1.0)) {
        throw std::invalid_argument("leaky_relu: slope must lie in (0, 1), got " + std::to_string(slope));
    }
    return unary(
        OpKind::leaky_relu, x, [slope](double v) { return v > 0.0 ? v : slope * v; }, slope);
}

Var sigmoid(Var x) { return unary(OpKind::sigmoid, x, stable_sigmoid); }

Var tanh(Var x) {
    return unary(OpKind::tanh, x, [](double v) { return std::tanh(v); });
}

Var square(Var x) {
    return unary(OpKind::square, x, [](double v) { return v * v; });
}

Var add(Var a, Var b) {
    return binary(OpKind::add, "add", a, b, [](double p, double q) { return p + q; });
}

Var sub(Var a, Var b) {
    return binary(OpKind::sub, "sub", a, b, [](double p, double q) { return p - q; });
}

Var mul(Var a, Var b) {
    return binary(OpKind::mul, "mul", a, b, [](double p, double q) { return p * q; });
}

Var sum(Var x, std::optional<std::size_t> axis) {
    if (axis) return reduce_axis(OpKind::sum_axis, x, *axis);
    OpBuilder::owner(x);
    double acc = 0.0;
    for (double v : x.value().data()) acc += v;
    return OpBuilder::make({.op = OpKind::sum_all, .a = x}, Tensor::scalar(acc));
}

Var mean(Var x, std::optional<std::size_t> axis) {
    if (axis) return reduce_axis(OpKind::mean_axis, x, *axis);
    OpBuilder::owner(x);
    double acc = 0.0;
    for (double v : x.value().data()) acc += v;
    return OpBuilder::make({.op = OpKind::mean_all, .a = x},
                           Tensor::scalar(acc / static_cast<double>(x.value().size())));
}

Var softmax_cross_entropy(Var logits, std::span<const std::size_t> labels) {
    OpBuilder::owner(logits);
    const Tensor& z = logits.value();
    require_rank("softmax_cross_entropy", z, 2);
    if (labels.size() != z.rows()) {
        throw DimensionError("softmax_cross_entropy: " + std::to_string(labels.size()) + " labels for logits " +
                             shape_string(z.shape()));
    }
    const std::size_t rows = z.rows(), cols = z.cols();
    double loss = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        if (labels[i] >= cols) throw std::out_of_range("softmax_cross_entropy: label out of range");
        const double* row = &z.storage()[i * cols];
        const double zmax = *std::max_element(row, row + cols);
        double denom = 0.0;
        for (std::size_t j = 0; j < cols; ++j) denom += std::exp(row[j] - zmax);
        loss += zmax + std::log(denom) - row[labels[i]];
    }
    return OpBuilder::make({.op = OpKind::softmax_xent,
                            .a = logits,
                            .labels = std::vector<std::size_t>(labels.begin(), labels.end())},
                           Tensor::scalar(loss / static_cast<double>(rows)));
}

Var elementwise(UnaryKind kind, Var x, double slope) {
    switch (kind) {
        case UnaryKind::relu: return relu(x);
        case UnaryKind::leaky_relu: return leaky_relu(x, slope);
        case UnaryKind::sigmoid: return sigmoid(x);
        case UnaryKind::tanh: return tanh(x);
        case UnaryKind::square: return square(x);
    }
    throw std::invalid_argument("elementwise: unknown unary kind");
}

Var elementwise(BinaryKind kind, Var a, Var b) {
    switch (kind) {
        case BinaryKind::add: return add(a, b);
        case BinaryKind::sub: return sub(a, b);
        case BinaryKind::mul: return mul(a, b);
    }
    throw std::invalid_argument("elementwise: unknown binary kind");
}

Var reduce(ReduceKind kind, Var x, std::optional<std::size_t> axis) {
    return kind == ReduceKind::sum ? sum(x, axis) : mean(x, axis);
}

}  // namespace magan::ad
