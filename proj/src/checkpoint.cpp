#include "visco/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "visco/errors.hpp"

namespace visco {

namespace {

constexpr char kMagic[8] = {'V', 'I', 'S', 'C', 'O', 'C', 'K', 'P'};
constexpr std::size_t kHeaderBytes = 44;

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<unsigned char>(v >> (8 * b)));
}

void put_f64(std::vector<unsigned char>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<unsigned char>(bits >> (8 * b)));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(p[b]) << (8 * b);
  return v;
}

double get_f64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(p[b]) << (8 * b);
  return std::bit_cast<double>(v);
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const SpectralField& field) {
  const SpectralGrid& g = field.grid();
  std::vector<unsigned char> bytes;
  bytes.reserve(kHeaderBytes + 16 * field.data().size());
  bytes.insert(bytes.end(), kMagic, kMagic + 8);
  put_u32(bytes, kCheckpointVersion);
  put_u32(bytes, 0);
  put_u32(bytes, static_cast<std::uint32_t>(g.n()));
  put_f64(bytes, g.box_scale());
  put_u32(bytes, static_cast<std::uint32_t>(g.pad().num));
  put_u32(bytes, static_cast<std::uint32_t>(g.pad().den));
  put_u32(bytes, static_cast<std::uint32_t>(field.rank()));
  put_u32(bytes, static_cast<std::uint32_t>(field.components()));
  for (const cplx& c : field.data()) {
    put_f64(bytes, c.real());
    put_f64(bytes, c.imag());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open checkpoint for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing checkpoint: " + path.string());
}

SpectralField read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 8) != 0) {
    throw IoError("not a checkpoint file: " + path.string());
  }
  const unsigned char* p = bytes.data();
  if (get_u32(p + 8) != kCheckpointVersion) throw IoError("unsupported checkpoint version");
  const int n = static_cast<int>(get_u32(p + 16));
  const double box = get_f64(p + 20);
  const PadFactor pad{static_cast<int>(get_u32(p + 28)), static_cast<int>(get_u32(p + 32))};
  const std::uint32_t rank = get_u32(p + 36);
  const std::uint32_t comps = get_u32(p + 40);
  if (rank > 2 || comps != static_cast<std::uint32_t>(components_of(static_cast<Rank>(rank)))) {
    throw IoError("checkpoint has inconsistent rank/components");
  }
  SpectralField field(SpectralGrid(n, box, pad), static_cast<Rank>(rank));
  const std::size_t expected = kHeaderBytes + 16 * field.data().size();
  if (bytes.size() != expected) throw IoError("checkpoint size mismatch: " + path.string());
  auto data = field.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    const unsigned char* q = p + kHeaderBytes + 16 * i;
    data[i] = cplx(get_f64(q), get_f64(q + 8));
  }
  return field;
}

}  // namespace visco
