#include "magan/autodiff/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "op_builder.hpp"

namespace magan::ad {

const Tensor& Var::value() const {
    if (graph_ == nullptr) throw GraphError("use of an unbound Var");
    return graph_->nodes_.at(id_).value;
}

Var Graph::push(Node node) {
    if (consumed_) throw GraphError("graph already consumed by backward(); call reset() before reuse");
    nodes_.push_back(std::move(node));
    return Var(this, static_cast<std::uint32_t>(nodes_.size() - 1));
}

const Graph::Node& Graph::node(Var v) const {
    check_owner(v);
    return nodes_[v.id()];
}

void Graph::check_owner(Var v) const {
    if (!v.valid() || &v.graph() != this || v.id() >= nodes_.size()) {
        throw GraphError("Var does not belong to this graph");
    }
}

Var Graph::constant(Tensor value) {
    Node n;
    n.op = OpKind::constant;
    n.value = std::move(value);
    return push(std::move(n));
}

Var Graph::parameter(Parameter& p) {
    if (p.grad.shape() != p.value.shape()) p.grad = Tensor(p.value.shape());
    Node n;
    n.op = OpKind::parameter;
    n.value = p.value;
    n.requires_grad = true;
    n.param = &p;
    return push(std::move(n));
}

void Graph::reset() {
    nodes_.clear();
    consumed_ = false;
}

void Graph::backward(Var root) {
    if (consumed_) throw GraphError("backward() called twice on the same graph");
    check_owner(root);
    Node& r = nodes_[root.id()];
    if (r.value.size() != 1) {
        throw GraphError("backward() root must be scalar, got shape " + shape_string(r.value.shape()));
    }
    consumed_ = true;
    r.grad.assign(1, 1.0);
    for (std::size_t i = root.id() + 1; i-- > 0;) {
        Node& n = nodes_[i];
        if (n.grad.empty() || !n.requires_grad) continue;
        propagate(n);
    }
}

namespace {

std::vector<double>& grad_buffer(std::vector<double>& g, std::size_t n) {
    if (g.empty()) g.assign(n, 0.0);
    return g;
}

}  // namespace

void Graph::propagate(Node& n) {
    const std::vector<double>& dy = n.grad;

    auto input = [&](std::size_t k) -> Node& { return nodes_[n.inputs[k]]; };
    auto wants = [&](std::size_t k) { return k < n.arity && input(k).requires_grad; };

    switch (n.op) {
        case OpKind::constant:
            break;
        case OpKind::parameter: {
            auto& g = n.param->grad.storage();
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += dy[i];
            break;
        }
        case OpKind::matmul: {
            const Tensor& a = input(0).value;
            const Tensor& b = input(1).value;
            const std::size_t rows = a.rows(), inner = a.cols(), cols = b.cols();
            if (wants(0)) {
                auto& da = grad_buffer(input(0).grad, a.size());
                for (std::size_t i = 0; i < rows; ++i) {
                    const double* dyr = &dy[i * cols];
                    for (std::size_t k = 0; k < inner; ++k) {
                        const double* br = &b.storage()[k * cols];
                        double acc = 0.0;
                        for (std::size_t j = 0; j < cols; ++j) acc += dyr[j] * br[j];
                        da[i * inner + k] += acc;
                    }
                }
            }
            if (wants(1)) {
                auto& db = grad_buffer(input(1).grad, b.size());
                for (std::size_t i = 0; i < rows; ++i) {
                    const double* dyr = &dy[i * cols];
                    for (std::size_t k = 0; k < inner; ++k) {
                        const double aik = a.storage()[i * inner + k];
                        double* dbr = &db[k * cols];
                        for (std::size_t j = 0; j < cols; ++j) dbr[j] += aik * dyr[j];
                    }
                }
            }
            break;
        }
        case OpKind::add_bias: {
            const std::size_t cols = input(1).value.size();
            if (wants(0)) {
                auto& dx = grad_buffer(input(0).grad, dy.size());
                for (std::size_t i = 0; i < dy.size(); ++i) dx[i] += dy[i];
            }
            if (wants(1)) {
                auto& db = grad_buffer(input(1).grad, cols);
                for (std::size_t i = 0; i < dy.size(); ++i) db[i % cols] += dy[i];
            }
            break;
        }
        case OpKind::relu:
        case OpKind::leaky_relu: {
            if (!wants(0)) break;
            const double neg = n.op == OpKind::relu ? 0.0 : n.scalar;
            const auto& x = input(0).value.storage();
            auto& dx = grad_buffer(input(0).grad, x.size());
            for (std::size_t i = 0; i < x.size(); ++i) dx[i] += x[i] > 0.0 ? dy[i] : neg * dy[i];
            break;
        }
        case OpKind::sigmoid: {
            if (!wants(0)) break;
            const auto& y = n.value.storage();
            auto& dx = grad_buffer(input(0).grad, y.size());
            for (std::size_t i = 0; i < y.size(); ++i) dx[i] += dy[i] * y[i] * (1.0 - y[i]);
            break;
        }
        case OpKind::tanh: {
            if (!wants(0)) break;
            const auto& y = n.value.storage();
            auto& dx = grad_buffer(input(0).grad, y.size());
            for (std::size_t i = 0; i < y.size(); ++i) dx[i] += dy[i] * (1.0 - y[i] * y[i]);
            break;
        }
        case OpKind::square: {
            if (!wants(0)) break;
            const auto& x = input(0).value.storage();
            auto& dx = grad_buffer(input(0).grad, x.size());
            for (std::size_t i = 0; i < x.size(); ++i) dx[i] += 2.0 * x[i] * dy[i];
            break;
        }
        case OpKind::add:
        case OpKind::sub: {
            const double sign = n.op == OpKind::add ? 1.0 : -1.0;
            if (wants(0)) {
                auto& da = grad_buffer(input(0).grad, dy.size());
                for (std::size_t i = 0; i < dy.size(); ++i) da[i] += dy[i];
            }
            if (wants(1)) {
                auto& db = grad_buffer(input(1).grad, dy.size());
                for (std::size_t i = 0; i < dy.size(); ++i) db[i] += sign * dy[i];
            }
            break;
        }
        case OpKind::mul: {
            const auto& a = input(0).value.storage();
            const auto& b = input(1).value.storage();
            if (wants(0)) {
                auto& da = grad_buffer(input(0).grad, dy.size());
                for (std::size_t i = 0; i < dy.size(); ++i) da[i] += dy[i] * b[i];
            }
            if (wants(1)) {
                auto& db = grad_buffer(input(1).grad, dy.size());
                for (std::size_t i = 0; i < dy.size(); ++i) db[i] += dy[i] * a[i];
            }
            break;
        }
        case OpKind::sum_all:
        case OpKind::mean_all: {
            if (!wants(0)) break;
            auto& dx = grad_buffer(input(0).grad, input(0).value.size());
            const double g = n.op == OpKind::sum_all ? dy[0] : dy[0] / static_cast<double>(dx.size());
            for (auto& v : dx) v += g;
            break;
        }
        case OpKind::sum_axis:
        case OpKind::mean_axis: {
            if (!wants(0)) break;
            const Shape& s = input(0).value.shape();
            std::size_t outer = 1, inner = 1;
            for (std::size_t k = 0; k < n.axis; ++k) outer *= s[k];
            for (std::size_t k = n.axis + 1; k < s.size(); ++k) inner *= s[k];
            const std::size_t len = s[n.axis];
            const double scale = n.op == OpKind::sum_axis ? 1.0 : 1.0 / static_cast<double>(len);
            auto& dx = grad_buffer(input(0).grad, input(0).value.size());
            for (std::size_t o = 0; o < outer; ++o)
                for (std::size_t j = 0; j < len; ++j)
                    for (std::size_t i = 0; i < inner; ++i)
                        dx[(o * len + j) * inner + i] += scale * dy[o * inner + i];
            break;
        }
        case OpKind::softmax_xent: {
            if (!wants(0)) break;
            const Tensor& logits = input(0).value;
            const std::size_t rows = logits.rows(), cols = logits.cols();
            auto& dx = grad_buffer(input(0).grad, logits.size());
            const double g = dy[0] / static_cast<double>(rows);
            for (std::size_t i = 0; i < rows; ++i) {
                const double* z = &logits.storage()[i * cols];
                const double zmax = *std::max_element(z, z + cols);
                double denom = 0.0;
                for (std::size_t j = 0; j < cols; ++j) denom += std::exp(z[j] - zmax);
                for (std::size_t j = 0; j < cols; ++j) {
                    const double p = std::exp(z[j] - zmax) / denom;
                    dx[i * cols + j] += g * (p - (j == n.labels[i] ? 1.0 : 0.0));
                }
            }
            break;
        }
    }
}

Graph& OpBuilder::owner(Var a) {
    if (!a.valid()) throw GraphError("use of an unbound Var");
    Graph& g = a.graph();
    g.check_owner(a);
    return g;
}

Graph& OpBuilder::owner(Var a, Var b) {
    Graph& g = owner(a);
    if (!b.valid() || &b.graph() != &g) throw GraphError("operands belong to different graphs");
    g.check_owner(b);
    return g;
}

Var OpBuilder::make(Spec spec, Tensor value) {
    Graph& g = spec.arity == 2 ? owner(spec.a, spec.b) : owner(spec.a);
    Graph::Node n;
    n.op = spec.op;
    n.arity = spec.arity;
    n.inputs[0] = spec.a.id();
    n.requires_grad = g.nodes_[spec.a.id()].requires_grad;
    if (spec.arity == 2) {
        n.inputs[1] = spec.b.id();
        n.requires_grad = n.requires_grad || g.nodes_[spec.b.id()].requires_grad;
    }
    n.scalar = spec.scalar;
    n.axis = spec.axis;
    n.labels = std::move(spec.labels);
    n.value = std::move(value);
    return g.push(std::move(n));
}

}  // namespace magan::ad
