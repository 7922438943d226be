#pragma once

#include <cstdint>
#include <string>

#include "fsv/data/config.hpp"
#include "fsv/sim/simulator.hpp"

namespace fsv::io {

// Reproducibility record written once per output directory. Re-running with
// the same manifest reproduces every output bit-identically (timestamps
// excluded).
struct RunManifest {
  std::string command;
  std::string version;
  ModelConfig config;
  PriorConfig prior;
  std::uint64_t input_hash = 0;  // FNV-1a 64 over the input file bytes
  std::string input_path;
  int chains = 1;
  int threads = 1;
  std::string covar_mode = "median-sigma";
  std::string interweaving = "standard";
  std::string created_utc;  // informational only
};

std::uint64_t fnv1a64_file(const std::string& path);

void write_manifest(const RunManifest& manifest, const std::string& path);
RunManifest read_manifest(const std::string& path);

// Simulation truth sidecar: parameters plus latent paths as structured text.
void write_truth(const sim::SimulatedPanel& panel, const std::string& path);
sim::TrueParams read_truth(const std::string& path);

}  // namespace fsv::io
