#include "magan/gan/losses.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "magan/autodiff/ops.hpp"

namespace magan::gan {

ad::Var disc_loss(ad::Var e_real, ad::Var e_fake, double margin) {
    if (!(margin >= 0.0) || !std::isfinite(margin)) {
        throw std::invalid_argument("disc_loss: margin must be finite and >= 0, got " + std::to_string(margin));
    }
    if (margin == 0.0) return ad::mean(e_real);
    ad::Var m = e_fake.graph().constant(ad::Tensor::filled(e_fake.shape(), margin));
    ad::Var hinge = ad::relu(ad::sub(m, e_fake));
    return ad::mean(ad::add(e_real, hinge));
}

ad::Var gen_loss(ad::Var e_fake) { return ad::mean(e_fake); }

}  // namespace magan::gan
