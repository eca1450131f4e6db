#include "magan/io/idx.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

namespace magan::io {

IdxError::IdxError(IdxErrorKind kind, std::uint64_t offset, const std::string& what)
    : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"), kind_(kind), offset_(offset) {}

namespace {

std::uint32_t read_be32(const std::vector<std::uint8_t>& b, std::size_t at) {
    return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) | (std::uint32_t{b[at + 2]} << 8) |
           std::uint32_t{b[at + 3]};
}

void write_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

std::string hex(std::uint32_t v) {
    std::ostringstream s;
    s << "0x" << std::hex;
    s.width(8);
    s.fill('0');
    s << v;
    return s.str();
}

std::size_t expected_dims(std::uint32_t magic) { return magic & 0xFFu; }

}  // namespace

IdxFile parse_idx(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 4) throw IdxError(IdxErrorKind::truncated, bytes.size(), "IDX header truncated before magic");
    IdxFile f;
    f.magic = read_be32(bytes, 0);
    if (f.magic != kIdxImagesMagic && f.magic != kIdxLabelsMagic) {
        throw IdxError(IdxErrorKind::bad_magic, 0, "bad IDX magic " + hex(f.magic));
    }
    const std::size_t ndims = expected_dims(f.magic);
    std::uint64_t count = 1;
    for (std::size_t d = 0; d < ndims; ++d) {
        const std::size_t at = 4 + 4 * d;
        if (bytes.size() < at + 4) throw IdxError(IdxErrorKind::truncated, bytes.size(), "IDX header truncated in dimension list");
        const std::uint32_t dim = read_be32(bytes, at);
        f.dims.push_back(dim);
        if (__builtin_mul_overflow(count, std::uint64_t{dim}, &count) || count > (std::uint64_t{1} << 40)) {
            throw IdxError(IdxErrorKind::dimension_overflow, at, "IDX dimension product overflows");
        }
    }
    const std::size_t header = 4 + 4 * ndims;
    if (bytes.size() - header < count) {
        throw IdxError(IdxErrorKind::truncated, bytes.size(),
                       "IDX payload truncated: expected " + std::to_string(count) + " bytes after the header, found " +
                           std::to_string(bytes.size() - header));
    }
    f.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(header),
                     bytes.begin() + static_cast<std::ptrdiff_t>(header + count));
    return f;
}

std::vector<std::uint8_t> serialize_idx(const IdxFile& file) {
    if (file.magic != kIdxImagesMagic && file.magic != kIdxLabelsMagic) {
        throw IdxError(IdxErrorKind::bad_magic, 0, "refusing to write IDX magic " + hex(file.magic));
    }
    if (file.dims.size() != expected_dims(file.magic)) throw std::invalid_argument("IDX dimension count does not match magic");
    std::uint64_t count = 1;
    for (auto d : file.dims) count *= d;
    if (count != file.payload.size()) throw std::invalid_argument("IDX payload size does not match dimensions");
    std::vector<std::uint8_t> out;
    out.reserve(4 + 4 * file.dims.size() + file.payload.size());
    write_be32(out, file.magic);
    for (auto d : file.dims) write_be32(out, d);
    out.insert(out.end(), file.payload.begin(), file.payload.end());
    return out;
}

IdxFile read_idx_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IdxError(IdxErrorKind::io, 0, "cannot open IDX file " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_idx(bytes);
}

void write_idx_file(const std::filesystem::path& path, const IdxFile& file) {
    const auto bytes = serialize_idx(file);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

Dataset read_idx(const std::filesystem::path& path) {
    const IdxFile f = read_idx_file(path);
    Dataset d;
    d.id = path.filename().string();
    if (f.magic == kIdxLabelsMagic) {
        d.labels.assign(f.payload.begin(), f.payload.end());
        return d;
    }
    d.dim = static_cast<std::size_t>(f.dims[1]) * f.dims[2];
    d.values.reserve(f.payload.size());
    for (auto byte : f.payload) d.values.push_back(static_cast<double>(byte) / 255.0);
    return d;
}

Dataset read_idx(const std::filesystem::path& images, const std::filesystem::path& labels) {
    Dataset d = read_idx(images);
    const Dataset l = read_idx(labels);
    if (d.dim == 0) throw std::invalid_argument(images.string() + " is not an IDX images file");
    if (l.labels.size() != d.size()) throw std::invalid_argument("IDX label count does not match image count");
    d.labels = l.labels;
    return d;
}

void write_idx(const std::filesystem::path& path, const Dataset& data, std::uint32_t rows, std::uint32_t cols) {
    if (data.dim != static_cast<std::size_t>(rows) * cols) throw std::invalid_argument("write_idx: rows*cols != dim");
    IdxFile f;
    f.magic = kIdxImagesMagic;
    f.dims = {static_cast<std::uint32_t>(data.size()), rows, cols};
    f.payload.reserve(data.values.size());
    for (double v : data.values) {
        f.payload.push_back(static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)));
    }
    write_idx_file(path, f);
}

void write_idx_labels(const std::filesystem::path& path, const std::vector<std::size_t>& labels) {
    IdxFile f;
    f.magic = kIdxLabelsMagic;
    f.dims = {static_cast<std::uint32_t>(labels.size())};
    for (auto l : labels) {
        if (l > 255) throw std::invalid_argument("write_idx_labels: label does not fit in a byte");
        f.payload.push_back(static_cast<std::uint8_t>(l));
    }
    write_idx_file(path, f);
}

}  // namespace magan::io
