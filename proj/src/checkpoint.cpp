#include "sulm/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

namespace sulm {

using json = nlohmann::ordered_json;

namespace {

constexpr char kMagic[8] = {'S', 'U', 'L', 'M', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

static_assert(sizeof(float) == 4, "float32 blobs assume 4-byte float");

json config_to_json(const ModelConfig& c) {
  json j;
  j["n_layers"] = c.n_layers;
  j["n_heads"] = c.n_heads;
  j["d_model"] = c.d_model;
  j["d_ff"] = c.d_ff;
  j["max_context"] = c.max_context;
  j["vocab_size"] = c.vocab_size;
  j["seed"] = c.seed;
  return j;
}

ModelConfig config_from_json(const json& j) {
  ModelConfig c;
  c.n_layers = j.at("n_layers").get<int>();
  c.n_heads = j.at("n_heads").get<int>();
  c.d_model = j.at("d_model").get<int>();
  c.d_ff = j.at("d_ff").get<int>();
  c.max_context = j.at("max_context").get<int>();
  c.vocab_size = j.at("vocab_size").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

template <typename T>
void write_raw(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  ckpt.params.check_finite();

  json header;
  header["config"] = config_to_json(ckpt.params.config);
  header["step"] = ckpt.step;
  header["rng"] = ckpt.rng_state;
  header["tensors"] = json::array();

  std::uint64_t offset = 0;
  ckpt.params.for_each_tensor([&](const std::string& name,
                                  const Mat<float>& t) {
    const std::uint64_t bytes =
        static_cast<std::uint64_t>(t.size()) * sizeof(float);
    header["tensors"].push_back({{"name", name},
                                 {"dtype", "f32"},
                                 {"shape", {t.rows(), t.cols()}},
                                 {"offset", offset},
                                 {"bytes", bytes}});
    offset += bytes;
  });

  const std::string header_str = header.dump();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write checkpoint: " + path);
  out.write(kMagic, sizeof(kMagic));
  write_raw(out, kVersion);
  const std::uint64_t header_len = header_str.size();
  write_raw(out, header_len);
  out.write(header_str.data(), static_cast<std::streamsize>(header_str.size()));
  ckpt.params.for_each_tensor([&](const std::string&, const Mat<float>& t) {
    out.write(reinterpret_cast<const char*>(t.data()),
              static_cast<std::streamsize>(t.size() * sizeof(float)));
  });
  if (!out) throw DataError("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  const std::string blob = read_file(path);
  if (blob.size() < sizeof(kMagic) + sizeof(kVersion) + sizeof(std::uint64_t)) {
    throw DataError("checkpoint truncated: " + path);
  }
  if (std::memcmp(blob.data(), kMagic, sizeof(kMagic)) != 0) {
    throw DataError("not a checkpoint file: " + path);
  }
  std::uint32_t version = 0;
  std::memcpy(&version, blob.data() + sizeof(kMagic), sizeof(version));
  if (version != kVersion) {
    throw DataError("unsupported checkpoint version " +
                    std::to_string(version) + " (expected " +
                    std::to_string(kVersion) + ")");
  }
  std::uint64_t header_len = 0;
  std::memcpy(&header_len, blob.data() + sizeof(kMagic) + sizeof(version),
              sizeof(header_len));
  const std::size_t header_begin =
      sizeof(kMagic) + sizeof(version) + sizeof(header_len);
  if (header_begin + header_len > blob.size()) {
    throw DataError("checkpoint truncated: header exceeds file size");
  }
  json header;
  try {
    header = json::parse(blob.substr(header_begin, header_len));
  } catch (const json::exception& e) {
    throw DataError(std::string("corrupt checkpoint manifest: ") + e.what());
  }

  Checkpoint ckpt;
  ModelConfig config;
  try {
    config = config_from_json(header.at("config"));
    ckpt.step = header.at("step").get<int>();
    ckpt.rng_state = header.at("rng").get<std::string>();
  } catch (const json::exception& e) {
    throw DataError(std::string("corrupt checkpoint manifest: ") + e.what());
  }
  config.validate();

  // Allocate the parameter tree from the config, then fill from blobs.
  ckpt.params = init_parameters<float>(config);
  const std::size_t data_begin = header_begin + header_len;

  std::size_t tensor_idx = 0;
  const auto& tensors = header.at("tensors");
  ckpt.params.for_each_tensor([&](const std::string& name, Mat<float>& t) {
    if (tensor_idx >= tensors.size()) {
      throw DataError("corrupt checkpoint manifest: missing tensor " + name);
    }
    const auto& entry = tensors.at(tensor_idx++);
    std::string entry_name;
    std::uint64_t offset = 0, bytes = 0;
    std::int64_t rows = 0, cols = 0;
    try {
      entry_name = entry.at("name").get<std::string>();
      if (entry.at("dtype").get<std::string>() != "f32") {
        throw DataError("unsupported tensor dtype in checkpoint");
      }
      rows = entry.at("shape").at(0).get<std::int64_t>();
      cols = entry.at("shape").at(1).get<std::int64_t>();
      offset = entry.at("offset").get<std::uint64_t>();
      bytes = entry.at("bytes").get<std::uint64_t>();
    } catch (const json::exception& e) {
      throw DataError(std::string("corrupt checkpoint manifest: ") + e.what());
    }
    if (entry_name != name) {
      throw DataError("checkpoint tensor order mismatch: expected " + name +
                      ", found " + entry_name);
    }
    if (rows != t.rows() || cols != t.cols()) {
      throw DataError("checkpoint shape mismatch for " + name);
    }
    if (bytes != static_cast<std::uint64_t>(t.size()) * sizeof(float)) {
      throw DataError("checkpoint byte count mismatch for " + name);
    }
    if (data_begin + offset + bytes > blob.size()) {
      throw DataError("checkpoint truncated: tensor " + name +
                      " extends past end of file");
    }
    std::memcpy(t.data(), blob.data() + data_begin + offset,
                static_cast<std::size_t>(bytes));
  });
  if (tensor_idx != tensors.size()) {
    throw DataError("corrupt checkpoint manifest: extra tensors");
  }
  ckpt.params.check_finite();
  return ckpt;
}

}  // namespace sulm
