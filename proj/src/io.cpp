#include "billab/io.hpp"

#include <array>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace billab {

namespace {

// Compact SHA-256 (FIPS 180-4).
struct Sha256 {
    uint32_t h[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                     0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
    uint64_t total = 0;
    std::array<uint8_t, 64> buf{};
    size_t fill = 0;

    static uint32_t rotr(uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

    void block(const uint8_t* p) {
        static const uint32_t K[64] = {
            0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
            0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
            0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
            0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
            0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
            0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
            0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
            0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
            0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
            0xc67178f2};
        uint32_t w[64];
        for (int i = 0; i < 16; ++i)
            w[i] = (uint32_t(p[4 * i]) << 24) | (uint32_t(p[4 * i + 1]) << 16) |
                   (uint32_t(p[4 * i + 2]) << 8) | uint32_t(p[4 * i + 3]);
        for (int i = 16; i < 64; ++i) {
            const uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            const uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4], f = h[5], g = h[6], hh = h[7];
        for (int i = 0; i < 64; ++i) {
            const uint32_t S1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            const uint32_t ch = (e & f) ^ (~e & g);
            const uint32_t t1 = hh + S1 + ch + K[i] + w[i];
            const uint32_t S0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            const uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            const uint32_t t2 = S0 + maj;
            hh = g; g = f; f = e; e = d + t1; d = c; c = b; b = a; a = t1 + t2;
        }
        h[0] += a; h[1] += b; h[2] += c; h[3] += d;
        h[4] += e; h[5] += f; h[6] += g; h[7] += hh;
    }

    void update(const uint8_t* p, size_t n) {
        total += n;
        while (n > 0) {
            const size_t take = std::min(n, buf.size() - fill);
            std::memcpy(buf.data() + fill, p, take);
            fill += take;
            p += take;
            n -= take;
            if (fill == 64) {
                block(buf.data());
                fill = 0;
            }
        }
    }

    std::string finish() {
        const uint64_t bits = total * 8;
        uint8_t pad = 0x80;
        update(&pad, 1);
        const uint8_t zero = 0;
        while (fill != 56) update(&zero, 1);
        uint8_t len[8];
        for (int i = 0; i < 8; ++i) len[i] = uint8_t(bits >> (56 - 8 * i));
        update(len, 8);
        char out[65];
        for (int i = 0; i < 8; ++i) std::snprintf(out + 8 * i, 9, "%08x", h[i]);
        return std::string(out, 64);
    }
};

} // namespace

std::string sha256_hex(const void* data, size_t len) {
    Sha256 s;
    s.update(static_cast<const uint8_t*>(data), len);
    return s.finish();
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Status::io_error, "cannot open " + path.string());
    Sha256 s;
    std::array<char, 65536> chunk;
    while (in) {
        in.read(chunk.data(), chunk.size());
        s.update(reinterpret_cast<const uint8_t*>(chunk.data()), in.gcount());
    }
    return s.finish();
}

std::string format_double(double v) {
    char tmp[40];
    std::snprintf(tmp, sizeof(tmp), "%.17g", v);
    return tmp;
}

void write_field_file(const std::filesystem::path& path, const Field& f) {
    std::FILE* fp = std::fopen(path.string().c_str(), "wb");
    if (!fp) fail(Status::io_error, "cannot write " + path.string());
    const Grid& g = *f.grid;
    std::fprintf(fp, "billab-field 1 %d %d %.17g %.17g %.17g\n", g.nx(), g.ny(), g.h(),
                 g.origin_x(), g.origin_y());
    std::fwrite(f.values.data(), sizeof(double), f.values.size(), fp);
    std::fclose(fp);
}

Field read_field_file(const std::filesystem::path& path, const GridPtr& grid) {
    std::FILE* fp = std::fopen(path.string().c_str(), "rb");
    if (!fp) fail(Status::io_error, "cannot read " + path.string());
    int version = 0, nx = 0, ny = 0;
    double h = 0, ox = 0, oy = 0;
    if (std::fscanf(fp, "billab-field %d %d %d %lg %lg %lg", &version, &nx, &ny, &h, &ox, &oy) !=
        6 || std::fgetc(fp) != '\n') {
        std::fclose(fp);
        fail(Status::io_error, "bad field header in " + path.string());
    }
    if (version != 1 || nx != grid->nx() || ny != grid->ny() ||
        std::abs(h - grid->h()) > 1e-12 * grid->h()) {
        std::fclose(fp);
        fail(Status::io_error, "field file " + path.string() + " does not match the grid");
    }
    Field f;
    f.grid = grid;
    f.values.resize(static_cast<Eigen::Index>(nx) * ny);
    const size_t want = static_cast<size_t>(nx) * ny;
    if (std::fread(f.values.data(), sizeof(double), want, fp) != want) {
        std::fclose(fp);
        fail(Status::io_error, "truncated field file " + path.string());
    }
    std::fclose(fp);
    return f;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns)
    : ncols_(columns.size()) {
    f_ = std::fopen(path.string().c_str(), "wb");
    if (!f_) fail(Status::io_error, "cannot write " + path.string());
    for (size_t i = 0; i < columns.size(); ++i)
        std::fprintf(f_, "%s%s", columns[i].c_str(), i + 1 < columns.size() ? "," : "\n");
}

CsvWriter::~CsvWriter() {
    if (f_) std::fclose(f_);
}

void CsvWriter::sep() {
    if (col_ > 0) std::fputc(',', f_);
}

void CsvWriter::cell(double v) {
    sep();
    std::fputs(format_double(v).c_str(), f_);
    ++col_;
}

void CsvWriter::cell(long long v) {
    sep();
    std::fprintf(f_, "%lld", v);
    ++col_;
}

void CsvWriter::cell(const std::string& s) {
    sep();
    std::fputs(s.c_str(), f_);
    ++col_;
}

void CsvWriter::end_row() {
    if (col_ != ncols_) fail(Status::internal_error, "csv row has wrong arity");
    std::fputc('\n', f_);
    col_ = 0;
}

} // namespace billab
