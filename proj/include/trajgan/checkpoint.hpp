#pragma once

#include <string>

#include "trajgan/nn.hpp"

namespace trajgan::ad {

// Flat binary parameter container, little-endian:
//   magic "TGF1", version u32,
//   repeated records: name length u32, UTF-8 name, rank u32, dims u64...,
//   f64 payload.
// Round-trips bit-exactly.
void save_checkpoint(const std::string& path, const ParamMap& params);
ParamMap load_checkpoint(const std::string& path);

// Copies loaded values into a live parameter set; names and shapes must
// match one-to-one.
void assign_params(const ParamMap& target, const ParamMap& loaded);

}  // namespace trajgan::ad
