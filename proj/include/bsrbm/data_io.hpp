#pragma once

#include "bsrbm/planted.hpp"
#include "bsrbm/trainer.hpp"
#include "bsrbm/types.hpp"

#include <cstdint>
#include <string>

namespace bsrbm {

// Container files share a fixed layout: magic "BSRBMF", a kind byte, a u16
// format version, kind-specific header fields, the payload, and a trailing
// FNV-1a 64 checksum of the payload. All integers and floats are
// little-endian on disk regardless of host. Sign matrices are bit-packed 8
// spins per byte (LSB first, set bit = +1) with zero pad bits. Writers go
// through a temp file and rename, so a partial write never yields a file
// with a valid checksum.

/// Parse an IDX image file and binarize: pixel >= threshold maps to +1.
/// count_limit <= 0 loads every image; asking for more images than the file
/// holds is an error.
SpinDataset load_mnist(const std::string& images_path, int count_limit, int threshold);

void write_dataset(const std::string& path, const SpinDataset& data);
SpinDataset read_dataset(const std::string& path);

void write_model(const std::string& path, const PlantedModel& model);
PlantedModel read_model(const std::string& path);

void write_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint read_checkpoint(const std::string& path);

/// FNV-1a 64 over a whole file (used for run manifests).
std::uint64_t file_checksum(const std::string& path);

/// Write a synthetic IDX image file (testing and demos).
void write_idx_images(const std::string& path, const std::vector<std::vector<std::uint8_t>>& images,
                      int rows, int cols);

}  // namespace bsrbm
