#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "psn/field.hpp"

namespace psn {

inline constexpr std::uint32_t kFieldFormatVersion = 1;

struct FieldMeta {
  double a = 0.0;
  double omega = 0.0;
};

struct LoadedField {
  ComplexField2D field;
  FieldMeta meta;
};

class FieldFileError : public std::runtime_error {
 public:
  enum class Kind { kIo, kBadMagic, kVersionMismatch, kTruncatedPayload, kBadHeader };
  FieldFileError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// PSN1 layout, little-endian: "PSN1" | u32 version | u32 n | f64 L | f64 a |
/// f64 omega | 2 n^2 f64 (row-major, interleaved re, im).
void save_field(const std::string& path, const ComplexField2D& u, const FieldMeta& meta);
LoadedField load_field(const std::string& path);

}  // namespace psn
