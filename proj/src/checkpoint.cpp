#include "prbm/checkpoint.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>

namespace prbm {

namespace {

constexpr char kMagic[5] = {'P', 'R', 'B', 'M', '1'};

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t x) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    put_u64(out, bits);
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t x) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
}

class Reader {
public:
    Reader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

    std::uint64_t u64() {
        need(8);
        std::uint64_t x = 0;
        for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(data_[at_ + i]) << (8 * i);
        at_ += 8;
        return x;
    }

    double f64() {
        const std::uint64_t bits = u64();
        double x;
        std::memcpy(&x, &bits, sizeof x);
        return x;
    }

    std::size_t remaining() const { return size_ - at_; }

private:
    void need(std::size_t k) const {
        if (size_ - at_ < k) throw FormatError("checkpoint: truncated stream");
    }

    const std::uint8_t* data_;
    std::size_t size_;
    std::size_t at_ = 0;
};

std::uint32_t payload_crc(const std::vector<std::uint8_t>& bytes, std::size_t begin,
                          std::size_t end) {
    return static_cast<std::uint32_t>(
        crc32(0L, bytes.data() + begin, static_cast<uInt>(end - begin)));
}

}  // namespace

std::vector<std::uint8_t> serialize(const Model& model) {
    const ModelShape& s = model.shape;
    std::vector<std::uint8_t> out(kMagic, kMagic + sizeof kMagic);
    put_u64(out, static_cast<std::uint64_t>(s.n));
    put_u64(out, static_cast<std::uint64_t>(s.m));
    put_u64(out, static_cast<std::uint64_t>(s.p));
    put_f64(out, s.alpha);
    for (int i = 0; i <= s.p; ++i)
        for (int j = 0; j <= s.p; ++j) {
            const Eigen::MatrixXd& block = model.weights.vh[i][j];
            for (int r = 0; r < s.n; ++r)
                for (int c = 0; c < s.m; ++c) put_f64(out, block(r, c));
        }
    for (int i = 0; i <= s.p; ++i)
        for (int u = 0; u < s.n; ++u) put_f64(out, model.weights.vbias[i](u));
    for (int j = 0; j <= s.p; ++j)
        for (int u = 0; u < s.m; ++u) put_f64(out, model.weights.hbias[j](u));
    put_u32(out, payload_crc(out, sizeof kMagic, out.size()));
    return out;
}

Model deserialize(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < sizeof kMagic + 4)
        throw FormatError("checkpoint: truncated stream");
    if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
        throw VersionError("checkpoint: unknown magic tag");

    const std::size_t crc_at = bytes.size() - 4;
    std::uint32_t stored = 0;
    for (int i = 0; i < 4; ++i)
        stored |= static_cast<std::uint32_t>(bytes[crc_at + i]) << (8 * i);
    if (stored != payload_crc(bytes, sizeof kMagic, crc_at))
        throw IntegrityError("checkpoint: CRC mismatch");

    Reader r(bytes.data() + sizeof kMagic, crc_at - sizeof kMagic);
    ModelShape shape;
    const std::uint64_t n = r.u64(), m = r.u64(), p = r.u64();
    if (n < 1 || m < 1 || n > 1u << 20 || m > 1u << 20 || p > 1u << 16)
        throw FormatError("checkpoint: inconsistent dimensions");
    shape.n = static_cast<int>(n);
    shape.m = static_cast<int>(m);
    shape.p = static_cast<int>(p);
    shape.alpha = r.f64();
    if (!(shape.alpha >= 0.0 && shape.alpha <= 1.0))
        throw FormatError("checkpoint: alpha out of range");

    const std::uint64_t lags = p + 1;
    const std::uint64_t expect =
        8 * (lags * lags * n * m + lags * n + lags * m);
    if (r.remaining() != expect)
        throw FormatError("checkpoint: payload size does not match dimensions");

    Model model = Model::zeros(shape);
    for (int i = 0; i <= shape.p; ++i)
        for (int j = 0; j <= shape.p; ++j)
            for (int rr = 0; rr < shape.n; ++rr)
                for (int c = 0; c < shape.m; ++c)
                    model.weights.vh[i][j](rr, c) = r.f64();
    for (int i = 0; i <= shape.p; ++i)
        for (int u = 0; u < shape.n; ++u) model.weights.vbias[i](u) = r.f64();
    for (int j = 0; j <= shape.p; ++j)
        for (int u = 0; u < shape.m; ++u) model.weights.hbias[j](u) = r.f64();
    return model;
}

void save_checkpoint(const std::string& path, const Model& model) {
    const std::vector<std::uint8_t> bytes = serialize(model);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("checkpoint: cannot open " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw CheckpointError("checkpoint: write failed for " + path);
}

Model load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("checkpoint: cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return deserialize(bytes);
}

}  // namespace prbm
