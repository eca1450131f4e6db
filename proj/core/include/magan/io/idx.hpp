#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "magan/io/dataset.hpp"

namespace magan::io {

inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;
inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;

enum class IdxErrorKind { io, bad_magic, truncated, dimension_overflow };

/// Parse failure of an IDX file; `offset()` is the byte offset where it was detected.
class IdxError : public std::runtime_error {
public:
    IdxError(IdxErrorKind kind, std::uint64_t offset, const std::string& what);
    IdxErrorKind kind() const { return kind_; }
    std::uint64_t offset() const { return offset_; }

private:
    IdxErrorKind kind_;
    std::uint64_t offset_;
};

/// Raw unsigned-byte IDX container: big-endian magic, one big-endian uint32 per
/// dimension, then the payload.
struct IdxFile {
    std::uint32_t magic = kIdxImagesMagic;
    std::vector<std::uint32_t> dims;
    std::vector<std::uint8_t> payload;
};

IdxFile parse_idx(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> serialize_idx(const IdxFile& file);

IdxFile read_idx_file(const std::filesystem::path& path);
void write_idx_file(const std::filesystem::path& path, const IdxFile& file);

/// Images become flattened samples scaled to [0, 1]; a labels file becomes a
/// dataset with labels only (dim 0).
Dataset read_idx(const std::filesystem::path& path);
/// Images and labels from two files, merged into one labelled dataset.
Dataset read_idx(const std::filesystem::path& images, const std::filesystem::path& labels);

/// Writes samples as an images file of shape [n x rows x cols], values
/// rounded from [0, 1] back to bytes.
void write_idx(const std::filesystem::path& path, const Dataset& data, std::uint32_t rows, std::uint32_t cols);
void write_idx_labels(const std::filesystem::path& path, const std::vector<std::size_t>& labels);

}  // namespace magan::io
