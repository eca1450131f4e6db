#pragma once

#include "magan/autodiff/graph.hpp"

namespace magan::gan {

/// Discriminator hinge loss: mean over the batch of e_real + max(0, m - e_fake).
/// With m == 0 the synthetic branch is not connected at all and the loss is
/// mean(e_real). Throws std::invalid_argument for m < 0.
ad::Var disc_loss(ad::Var e_real, ad::Var e_fake, double margin);

/// Generator loss: mean(e_fake).
ad::Var gen_loss(ad::Var e_fake);

}  // namespace magan::gan
