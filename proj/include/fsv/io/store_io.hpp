#pragma once

#include <string>

#include "fsv/data/draws.hpp"
#include "fsv/mcmc/engine.hpp"

namespace fsv::io {

// Versioned little-endian binary dumps. Doubles round-trip bit-exactly,
// which is what makes checkpoint resume identical to an uninterrupted run.
void save_store(const PosteriorStore& store, const std::string& path);
PosteriorStore load_store(const std::string& path);

void save_checkpoint(const mcmc::Checkpoint& checkpoint, const std::string& path);
mcmc::Checkpoint load_checkpoint(const std::string& path);

}  // namespace fsv::io
