#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "magan/autodiff/tensor.hpp"

namespace magan::ad {

class Graph;

/// Raised on misuse of a graph: non-scalar backward root, a second backward
/// pass, or mixing nodes from different graphs.
class GraphError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Handle to a node of a Graph. Cheap to copy; only valid while the graph lives.
class Var {
public:
    Var() = default;
    Var(Graph* graph, std::uint32_t id) : graph_(graph), id_(id) {}

    Graph& graph() const { return *graph_; }
    std::uint32_t id() const { return id_; }
    bool valid() const { return graph_ != nullptr; }

    const Tensor& value() const;
    const Shape& shape() const { return value().shape(); }

private:
    Graph* graph_ = nullptr;
    std::uint32_t id_ = 0;
};

enum class OpKind : std::uint8_t {
    constant,
    parameter,
    matmul,
    add_bias,
    relu,
    leaky_relu,
    sigmoid,
    tanh,
    add,
    sub,
    mul,
    square,
    sum_all,
    mean_all,
    sum_axis,
    mean_axis,
    softmax_xent,
};

/// Append-only tape for reverse-mode differentiation.
///
/// Nodes are stored in creation order, which is a topological order; backward
/// walks them in strict reverse. One graph serves one forward/backward pass:
/// after backward() it is consumed and rejects new nodes or a second pass
/// until reset().
class Graph {
public:
    Graph() = default;
    Graph(const Graph&) = delete;
    Graph& operator=(const Graph&) = delete;

    Var constant(Tensor value);
    /// Leaf bound to `p`; backward() adds into p.grad. `p` must outlive the pass.
    Var parameter(Parameter& p);

    void backward(Var root);
    void reset();

    bool consumed() const { return consumed_; }
    std::size_t size() const { return nodes_.size(); }

    const Tensor& value(std::uint32_t id) const { return nodes_.at(id).value; }
    /// Gradient of the last backward root w.r.t. node `id`; empty if the node
    /// did not receive one.
    const std::vector<double>& grad(std::uint32_t id) const { return nodes_.at(id).grad; }

private:
    struct Node {
        OpKind op = OpKind::constant;
        std::array<std::uint32_t, 2> inputs{};
        std::uint8_t arity = 0;
        bool requires_grad = false;
        double scalar = 0.0;
        std::size_t axis = 0;
        Tensor value;
        std::vector<double> grad;
        std::vector<std::size_t> labels;
        Parameter* param = nullptr;
    };

    Var push(Node node);
    const Node& node(Var v) const;
    void check_owner(Var v) const;
    void propagate(Node& node);

    std::vector<Node> nodes_;
    bool consumed_ = false;

    friend class Var;
    friend struct OpBuilder;
};

}  // namespace magan::ad
