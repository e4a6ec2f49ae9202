// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 gcnsum developers

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "gcnsum/tensor.hpp"

namespace gcnsum {

/// Versioned container of named float64 tensors plus a free-form text
/// header. Byte layout (all integers little-endian):
///
///   magic    8 bytes  "GCNSUMCK"
///   version  u32      kCheckpointVersion
///   header   u64 length, then that many UTF-8 bytes
///   count    u32      number of tensors
///   tensor   u32 name length, name bytes, u32 rank, u64 dims[rank],
///            float64 data[product(dims)] little-endian, row-major
struct TensorArchive {
  std::string header;
  std::vector<std::pair<std::string, Tensor>> tensors;

  const Tensor& get(const std::string& name) const;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_archive(const std::filesystem::path& path, const TensorArchive& archive);
TensorArchive read_archive(const std::filesystem::path& path);
std::string serialize_archive(const TensorArchive& archive);
TensorArchive deserialize_archive(const std::string& bytes);

}  // namespace gcnsum
