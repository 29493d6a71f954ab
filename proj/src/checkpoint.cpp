#include "trajgan/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>

#include "trajgan/error.hpp"

namespace trajgan::ad {

namespace {

constexpr char kMagic[4] = {'T', 'G', 'F', '1'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 4);
}

void write_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

void write_f64(std::ostream& os, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  write_u64(os, bits);
}

std::uint32_t read_u32(std::istream& is, const std::string& path) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) {
    throw DataError("checkpoint truncated: " + path);
  }
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t read_u64(std::istream& is, const std::string& path) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) {
    throw DataError("checkpoint truncated: " + path);
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

double read_f64(std::istream& is, const std::string& path) {
  const std::uint64_t bits = read_u64(is, path);
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}

}  // namespace

void save_checkpoint(const std::string& path, const ParamMap& params) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot open checkpoint for writing: " + path);
  os.write(kMagic, 4);
  write_u32(os, kVersion);
  for (const auto& [name, tensor] : params) {
    write_u32(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_u32(os, static_cast<std::uint32_t>(tensor.rank()));
    for (auto d : tensor.shape()) write_u64(os, d);
    for (double x : tensor.values()) write_f64(os, x);
  }
  if (!os) throw DataError("write failed: " + path);
}

ParamMap load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open checkpoint: " + path);
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw DataError("not a checkpoint file: " + path);
  }
  if (const auto version = read_u32(is, path); version != kVersion) {
    throw DataError("unsupported checkpoint version " +
                    std::to_string(version) + ": " + path);
  }
  ParamMap out;
  while (true) {
    is.peek();
    if (is.eof()) break;
    const std::uint32_t name_len = read_u32(is, path);
    std::string name(name_len, '\0');
    if (!is.read(name.data(), name_len)) {
      throw DataError("checkpoint truncated: " + path);
    }
    const std::uint32_t rank = read_u32(is, path);
    std::vector<std::size_t> shape(rank);
    std::size_t numel = 1;
    for (auto& d : shape) {
      d = static_cast<std::size_t>(read_u64(is, path));
      numel *= d;
    }
    std::vector<double> value(numel);
    for (auto& x : value) x = read_f64(is, path);
    out.emplace_back(std::move(name),
                     Tensor::leaf(std::move(shape), std::move(value)));
  }
  return out;
}

void assign_params(const ParamMap& target, const ParamMap& loaded) {
  std::map<std::string, Tensor> by_name;
  for (const auto& [name, t] : loaded) by_name.emplace(name, t);
  for (const auto& [name, t] : target) {
    auto it = by_name.find(name);
    if (it == by_name.end()) {
      throw DataError("checkpoint missing parameter: " + name);
    }
    if (it->second.shape() != t.shape()) {
      throw DataError("checkpoint shape mismatch for " + name);
    }
    Tensor dst = t;
    dst.mutable_values() = it->second.values();
    by_name.erase(it);
  }
  if (!by_name.empty()) {
    throw DataError("checkpoint has unexpected parameter: " +
                    by_name.begin()->first);
  }
}

}  // namespace trajgan::ad
