#include "sslm/model/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "json.hpp"
#include "sslm/util/errors.hpp"

namespace sslm {

using nlohmann::json;

static_assert(sizeof(float) == 4, "checkpoint blob assumes 4-byte floats");

void save_checkpoint(const JointModel& model, const std::string& path,
                     const std::map<std::string, std::string>& train_config) {
  json header;
  header["format_version"] = kCheckpointVersion;
  header["seed"] = model.seed();
  header["dims"] = {{"layers", model.dims().layers},
                    {"hidden", model.dims().hidden},
                    {"embed", model.dims().embed}};
  header["train_config"] = train_config;
  header["vocab"] = model.vocab().to_json();
  header["tags"] = model.tags().to_json();
  json blocks = json::array();
  auto names = model.param_names();
  auto mats = model.param_blocks();
  for (std::size_t i = 0; i < mats.size(); ++i)
    blocks.push_back({{"name", names[i]}, {"rows", mats[i]->rows}, {"cols", mats[i]->cols}});
  header["blocks"] = blocks;

  std::string header_bytes = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("save_checkpoint: cannot open for writing: " + path);
  out.write(kCheckpointMagic, 4);
  std::uint32_t version = kCheckpointVersion;
  out.write(reinterpret_cast<const char*>(&version), 4);
  std::uint64_t len = header_bytes.size();
  out.write(reinterpret_cast<const char*>(&len), 8);
  out.write(header_bytes.data(), static_cast<std::streamsize>(header_bytes.size()));
  for (const Mat* m : mats) {
    for (double v : m->a) {
      float f = static_cast<float>(v);
      out.write(reinterpret_cast<const char*>(&f), 4);
    }
  }
  if (!out) throw DataError("save_checkpoint: write failed: " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("load_checkpoint: cannot open: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kCheckpointMagic, 4) != 0)
    throw DataError("load_checkpoint: bad magic, not a model checkpoint: " + path);
  std::uint32_t version = 0;
  in.read(reinterpret_cast<char*>(&version), 4);
  if (!in || version != kCheckpointVersion)
    throw DataError("load_checkpoint: unsupported format version " +
                    std::to_string(version));
  std::uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), 8);
  if (!in) throw DataError("load_checkpoint: truncated header length");
  std::string header_bytes(len, '\0');
  in.read(header_bytes.data(), static_cast<std::streamsize>(len));
  if (!in) throw DataError("load_checkpoint: truncated header");

  json header;
  try {
    header = json::parse(header_bytes);
  } catch (const json::exception& e) {
    throw DataError(std::string("load_checkpoint: bad header json: ") + e.what());
  }

  ModelDims dims;
  dims.layers = header.at("dims").at("layers").get<int>();
  dims.hidden = header.at("dims").at("hidden").get<int>();
  dims.embed = header.at("dims").at("embed").get<int>();
  Vocabulary vocab = Vocabulary::from_json(header.at("vocab"));
  TagInventory tags = TagInventory::from_json(header.at("tags"));
  std::uint64_t seed = header.at("seed").get<std::uint64_t>();

  LoadedCheckpoint loaded{JointModel(vocab, tags, dims, seed), {}};
  if (header.contains("train_config"))
    loaded.train_config =
        header.at("train_config").get<std::map<std::string, std::string>>();

  auto mats = loaded.model.param_blocks_mut();
  const auto& blocks = header.at("blocks");
  if (blocks.size() != mats.size())
    throw DataError("load_checkpoint: parameter block count mismatch");
  auto names = loaded.model.param_names();
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const auto& b = blocks[i];
    if (b.at("name") != names[i] || b.at("rows") != mats[i]->rows ||
        b.at("cols") != mats[i]->cols)
      throw DataError("load_checkpoint: block '" + names[i] +
                      "' has unexpected shape in header");
    for (double& v : mats[i]->a) {
      float f = 0.0f;
      in.read(reinterpret_cast<char*>(&f), 4);
      if (!in)
        throw DataError("load_checkpoint: parameter blob shorter than header dims");
      v = static_cast<double>(f);
    }
  }
  char extra;
  if (in.read(&extra, 1))
    throw DataError("load_checkpoint: trailing bytes after parameter blob");
  return loaded;
}

}  // namespace sslm
