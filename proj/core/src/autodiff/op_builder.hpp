#pragma once

#include "magan/autodiff/graph.hpp"

namespace magan::ad {

// Internal access point used by the op implementations to append nodes.
struct OpBuilder {
    struct Spec {
        OpKind op;
        Var a;
        Var b;
        std::uint8_t arity = 1;
        double scalar = 0.0;
        std::size_t axis = 0;
        std::vector<std::size_t> labels;
    };

    static Var make(Spec spec, Tensor value);
    static Graph& owner(Var a);
    static Graph& owner(Var a, Var b);
};

}  // namespace magan::ad
