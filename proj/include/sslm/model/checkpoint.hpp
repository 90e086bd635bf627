#pragma once

#include <map>
#include <string>

#include "sslm/model/joint_model.hpp"

namespace sslm {

// Binary checkpoint: magic "SSLM", little-endian u32 format version, u64
// JSON header length, JSON header (dims, seed, training config, vocabulary
// and tag inventory, parameter block shapes), then all parameter blocks as
// little-endian 32-bit floats in header order. save(load(x)) is
// byte-identical to x.
inline constexpr char kCheckpointMagic[4] = {'S', 'S', 'L', 'M'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const JointModel& model, const std::string& path,
                     const std::map<std::string, std::string>& train_config = {});

struct LoadedCheckpoint {
  JointModel model;
  std::map<std::string, std::string> train_config;
};

LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace sslm
