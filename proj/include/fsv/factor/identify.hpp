#pragma once

#include "fsv/data/draws.hpp"

namespace fsv::factor {

// Sign identification: for each factor column, if the entry of largest
// absolute value (ties: lowest row index) is negative, negate the column and
// the matching factor-score row. Leaves Lambda*f and every covariance
// quantity bit-identical.
void identify_signs(ParameterDraw& params, LatentPaths& latents);

// Same normalization applied to every stored draw.
void identify_signs(PosteriorStore& store);

}  // namespace fsv::factor
