#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "prbm/model.hpp"

namespace prbm {

struct CheckpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// corrupt payload (CRC mismatch)
struct IntegrityError : CheckpointError {
    using CheckpointError::CheckpointError;
};
// unknown magic / version
struct VersionError : CheckpointError {
    using CheckpointError::CheckpointError;
};
// truncated stream, inconsistent dimensions
struct FormatError : CheckpointError {
    using CheckpointError::CheckpointError;
};

// Layout: magic "PRBM1" (5 bytes); payload = n, m, p as u64 LE, alpha as
// f64 LE, then vh blocks row-major by (i, j) with each block's entries
// row-major, vbias by i, hbias by j, all f64 LE; then CRC-32 of the
// payload as u32 LE.
std::vector<std::uint8_t> serialize(const Model& model);
Model deserialize(const std::vector<std::uint8_t>& bytes);

void save_checkpoint(const std::string& path, const Model& model);
Model load_checkpoint(const std::string& path);

}  // namespace prbm
