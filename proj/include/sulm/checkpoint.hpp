#pragma once

#include <string>

#include "sulm/model.hpp"

namespace sulm {

struct Checkpoint {
  Parameters<float> params;
  int step = 0;
  std::string rng_state;
};

// Binary layout: 8-byte magic, u32 format version, u64 JSON header length,
// the JSON header (config, step, RNG state, tensor manifest with name /
// dtype / shape / byte offset), then contiguous little-endian float32 blobs.
// Loading a saved checkpoint reproduces logits bit-identically.
void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace sulm
