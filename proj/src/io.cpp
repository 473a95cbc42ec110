#include "psn/io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

namespace psn {

namespace {

constexpr char kMagic[4] = {'P', 'S', 'N', '1'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 8 + 8 + 8;

template <typename T>
void put(std::vector<unsigned char>& buf, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  buf.insert(buf.end(), bytes, bytes + sizeof(T));
}

template <typename T>
T get(const unsigned char* p) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void save_field(const std::string& path, const ComplexField2D& u, const FieldMeta& meta) {
  const Grid2D& g = u.grid();
  std::vector<unsigned char> buf;
  buf.reserve(kHeaderBytes + 16 * u.size());
  buf.insert(buf.end(), kMagic, kMagic + 4);
  put<std::uint32_t>(buf, kFieldFormatVersion);
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.n));
  put<double>(buf, g.half_width);
  put<double>(buf, meta.a);
  put<double>(buf, meta.omega);
  for (const auto& c : u.values()) {
    put<double>(buf, c.real());
    put<double>(buf, c.imag());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FieldFileError(FieldFileError::Kind::kIo, "cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw FieldFileError(FieldFileError::Kind::kIo, "write failed: " + path);
}

LoadedField load_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FieldFileError(FieldFileError::Kind::kIo, "cannot open " + path);
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  if (buf.size() < 4 || std::memcmp(buf.data(), kMagic, 4) != 0)
    throw FieldFileError(FieldFileError::Kind::kBadMagic, "bad magic in " + path);
  if (buf.size() < kHeaderBytes)
    throw FieldFileError(FieldFileError::Kind::kTruncatedPayload,
                         "truncated payload: header incomplete in " + path);
  const auto version = get<std::uint32_t>(&buf[4]);
  if (version != kFieldFormatVersion)
    throw FieldFileError(FieldFileError::Kind::kVersionMismatch,
                         "version mismatch: file has " + std::to_string(version) + ", expected " +
                             std::to_string(kFieldFormatVersion));
  const auto n = get<std::uint32_t>(&buf[8]);
  const double L = get<double>(&buf[12]);
  FieldMeta meta{get<double>(&buf[20]), get<double>(&buf[28])};
  Grid2D g;
  try {
    g = make_grid(static_cast<int>(n), L);
  } catch (const std::invalid_argument& e) {
    throw FieldFileError(FieldFileError::Kind::kBadHeader, std::string("bad header: ") + e.what());
  }
  const std::size_t count = static_cast<std::size_t>(n) * n;
  const std::size_t expected = kHeaderBytes + 16 * count;
  if (buf.size() < expected)
    throw FieldFileError(FieldFileError::Kind::kTruncatedPayload,
                         "truncated payload: expected " + std::to_string(expected) + " bytes, got " +
                             std::to_string(buf.size()));
  if (buf.size() > expected)
    throw FieldFileError(FieldFileError::Kind::kBadHeader,
                         "trailing bytes after payload in " + path);
  ComplexSamples values(count);
  const unsigned char* p = buf.data() + kHeaderBytes;
  for (std::size_t k = 0; k < count; ++k, p += 16)
    values[k] = cplx(get<double>(p), get<double>(p + 8));
  try {
    return {ComplexField2D(std::move(g), std::move(values)), meta};
  } catch (const std::invalid_argument& e) {
    throw FieldFileError(FieldFileError::Kind::kBadHeader, std::string("bad payload: ") + e.what());
  }
}

}  // namespace psn
