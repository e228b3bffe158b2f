#include "ictomo/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <system_error>

#include "ictomo/errors.hpp"

namespace ictomo::io {

namespace {

class Writer {
public:
    void magic(std::string_view m) { bytes_.insert(bytes_.end(), m.begin(), m.end()); }
    void u32(std::uint32_t v) {
        for (int b = 0; b < 4; ++b) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
    }
    void u64(std::uint64_t v) {
        for (int b = 0; b < 8; ++b) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void byte(std::uint8_t v) { bytes_.push_back(v); }
    std::vector<std::uint8_t> take() { return std::move(bytes_); }

private:
    std::vector<std::uint8_t> bytes_;
};

class Reader {
public:
    Reader(std::span<const std::uint8_t> bytes, std::string_view format) : bytes_(bytes), format_(format) {}

    void magic(std::string_view m) {
        need(m.size());
        if (std::memcmp(bytes_.data() + pos_, m.data(), m.size()) != 0) {
            throw IoError(std::string(format_) + ": bad magic");
        }
        pos_ += m.size();
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(bytes_[pos_ + b]) << (8 * b);
        pos_ += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(bytes_[pos_ + b]) << (8 * b);
        pos_ += 8;
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    float f32() { return std::bit_cast<float>(u32()); }
    std::uint8_t byte() {
        need(1);
        return bytes_[pos_++];
    }
    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n) throw IoError(std::string(format_) + ": truncated payload");
    }
    void finish() const {
        if (pos_ != bytes_.size()) throw IoError(std::string(format_) + ": trailing bytes");
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::string_view format_;
    std::size_t pos_ = 0;
};

Dims read_dims(Reader& r) {
    Dims d;
    d.nx = r.u32();
    d.ny = r.u32();
    d.nz = r.u32();
    // Reject headers whose payload could not fit in the remaining bytes
    // before anything is allocated.
    if (d.nx == 0 || d.ny == 0 || d.nz == 0) throw IoError("volume header has a zero dimension");
    if (static_cast<double>(d.nx) * d.ny * d.nz > 0x1p40) throw IoError("volume header dimensions are implausible");
    return d;
}

}  // namespace

std::vector<std::uint8_t> encode_cfv(const BinaryVolume& volume) {
    Writer w;
    w.magic("CFV1");
    w.u32(volume.dims().nx);
    w.u32(volume.dims().ny);
    w.u32(volume.dims().nz);
    for (auto v : volume.values()) w.byte(v);
    return w.take();
}

BinaryVolume decode_cfv(std::span<const std::uint8_t> bytes) {
    Reader r(bytes, "CFV1");
    r.magic("CFV1");
    const Dims d = read_dims(r);
    r.need(d.size());
    std::vector<std::uint8_t> values(d.size());
    for (auto& v : values) {
        v = r.byte();
        if (v > 1) throw IoError("CFV1: voxel value outside {0,1}");
    }
    r.finish();
    return {d, std::move(values)};
}

std::vector<std::uint8_t> encode_rad(const forward::Measurements& m) {
    const std::size_t expected = static_cast<std::size_t>(m.n_angles) * m.nu * m.nv;
    if (m.tilt_degrees.size() != m.n_angles || m.counts.size() != expected) {
        throw DomainError("RAD1: measurement arrays do not match header");
    }
    Writer w;
    w.magic("RAD1");
    w.u32(m.n_angles);
    w.u32(m.nu);
    w.u32(m.nv);
    for (double t : m.tilt_degrees) w.f64(t);
    for (double c : m.counts) w.f64(c);
    return w.take();
}

forward::Measurements decode_rad(std::span<const std::uint8_t> bytes) {
    Reader r(bytes, "RAD1");
    r.magic("RAD1");
    forward::Measurements m;
    m.n_angles = r.u32();
    m.nu = r.u32();
    m.nv = r.u32();
    if (static_cast<double>(m.n_angles) * m.nu * m.nv > 0x1p36) throw IoError("RAD1: implausible header");
    const std::size_t n = static_cast<std::size_t>(m.n_angles) * m.nu * m.nv;
    r.need(8 * (m.n_angles + n));
    m.tilt_degrees.resize(m.n_angles);
    for (auto& t : m.tilt_degrees) t = r.f64();
    m.counts.resize(n);
    for (auto& c : m.counts) {
        c = r.f64();
        if (!(c >= 0) || !std::isfinite(c)) throw IoError("RAD1: counts must be finite and non-negative");
    }
    r.finish();
    return m;
}

std::vector<std::uint8_t> encode_rec(const Dims& dims, std::span<const double> values) {
    if (values.size() != dims.size()) throw DomainError("REC1: value count does not match dims");
    Writer w;
    w.magic("REC1");
    w.u32(dims.nx);
    w.u32(dims.ny);
    w.u32(dims.nz);
    for (double v : values) w.f32(static_cast<float>(v));
    return w.take();
}

RecVolume decode_rec(std::span<const std::uint8_t> bytes) {
    Reader r(bytes, "REC1");
    r.magic("REC1");
    RecVolume out;
    out.dims = read_dims(r);
    r.need(4 * out.dims.size());
    out.values.resize(out.dims.size());
    for (auto& v : out.values) v = r.f32();
    r.finish();
    return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

void write_text_atomic(const std::filesystem::path& path, std::string_view text) {
    write_file_atomic(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

std::string read_text(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    return {bytes.begin(), bytes.end()};
}

void write_cfv(const std::filesystem::path& path, const BinaryVolume& volume) { write_file_atomic(path, encode_cfv(volume)); }
BinaryVolume read_cfv(const std::filesystem::path& path) { return decode_cfv(read_file(path)); }
void write_rad(const std::filesystem::path& path, const forward::Measurements& m) { write_file_atomic(path, encode_rad(m)); }
forward::Measurements read_rad(const std::filesystem::path& path) { return decode_rad(read_file(path)); }
void write_rec(const std::filesystem::path& path, const Dims& dims, std::span<const double> values) {
    write_file_atomic(path, encode_rec(dims, values));
}
RecVolume read_rec(const std::filesystem::path& path) { return decode_rec(read_file(path)); }

std::string digest_hex(std::span<const std::uint8_t> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kHex[h & 0xf];
        h >>= 4;
    }
    return out;
}

std::string digest_hex(std::string_view text) {
    return digest_hex({reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

std::string file_digest(const std::filesystem::path& path) { return digest_hex(read_file(path)); }

}  // namespace ictomo::io
