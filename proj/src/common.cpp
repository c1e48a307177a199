#include "sulm/common.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace sulm {

std::string Rng::serialize() const {
  std::ostringstream os;
  os << engine_;
  os << " " << (has_cached_ ? 1 : 0);
  if (has_cached_) {
    os.precision(17);
    os << " " << cached_;
  }
  return os.str();
}

Rng Rng::deserialize(const std::string& text) {
  Rng rng(0);
  std::istringstream is(text);
  is >> rng.engine_;
  int has = 0;
  is >> has;
  rng.has_cached_ = has != 0;
  if (rng.has_cached_) is >> rng.cached_;
  if (is.fail()) throw DataError("corrupt RNG state");
  return rng;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fnv1a64_hex(std::string_view data) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a64(data);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write file: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw DataError("write failed: " + path);
}

bool file_exists(const std::string& path) {
  return std::filesystem::exists(path);
}

}  // namespace sulm
