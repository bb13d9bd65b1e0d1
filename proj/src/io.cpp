#include "fracfield/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fracfield {

namespace {

constexpr char kMagic[4] = {'F', 'R', 'C', 'F'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("field file: truncated");
    return v;
}

static_assert(sizeof(double) == 8, "FRCF payload requires 64-bit doubles");

} // namespace

void save_field(const std::string& path, const Field& u, double s) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("field file: cannot open for writing: " + path);
    os.write(kMagic, 4);
    put<std::uint32_t>(os, kVersion);
    put<std::uint8_t>(os, static_cast<std::uint8_t>(u.grid.dim));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(u.grid.points_per_axis));
    put<double>(os, u.grid.box_length);
    put<double>(os, s);
    os.write(reinterpret_cast<const char*>(u.values.data()),
             static_cast<std::streamsize>(u.values.size() * sizeof(double)));
    if (!os) throw std::runtime_error("field file: write failed: " + path);
}

LoadedField load_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("field file: cannot open: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("field file: bad magic: " + path);
    const auto version = get<std::uint32_t>(is);
    if (version != kVersion) throw std::runtime_error("field file: unsupported version");
    const int dim = get<std::uint8_t>(is);
    const int m = static_cast<int>(get<std::uint32_t>(is));
    const double box = get<double>(is);
    const double s = get<double>(is);
    GridSpec g = make_grid(dim, m, box);
    std::vector<double> vals(grid_size(g));
    is.read(reinterpret_cast<char*>(vals.data()),
            static_cast<std::streamsize>(vals.size() * sizeof(double)));
    if (!is) throw std::runtime_error("field file: payload length mismatch: " + path);
    char probe;
    if (is.read(&probe, 1)) throw std::runtime_error("field file: trailing bytes: " + path);
    return {Field(g, std::move(vals)), s};
}

std::vector<std::string> read_manifest(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("manifest: cannot open: " + path);
    std::string dir;
    const auto slash = path.find_last_of('/');
    if (slash != std::string::npos) dir = path.substr(0, slash + 1);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        std::size_t e = line.find_last_not_of(" \t\r");
        std::string entry = line.substr(b, e - b + 1);
        out.push_back(entry.front() == '/' ? entry : dir + entry);
    }
    return out;
}

std::vector<LoadedField> load_sequence(const std::string& manifest_path) {
    std::vector<LoadedField> seq;
    for (const auto& p : read_manifest(manifest_path)) seq.push_back(load_field(p));
    if (seq.empty()) throw std::runtime_error("manifest: no entries");
    for (const auto& lf : seq) {
        if (!same_grid(lf.field.grid, seq.front().field.grid) || lf.s != seq.front().s)
            throw std::runtime_error("manifest: mixed grids or orders in sequence");
    }
    return seq;
}

std::string sha1_hex(const void* data, std::size_t len) {
    const auto* bytes = static_cast<const std::uint8_t*>(data);
    std::uint32_t h[5] = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u, 0xC3D2E1F0u};

    const std::uint64_t total_bits = static_cast<std::uint64_t>(len) * 8;
    std::vector<std::uint8_t> msg(bytes, bytes + len);
    msg.push_back(0x80);
    while (msg.size() % 64 != 56) msg.push_back(0);
    for (int i = 7; i >= 0; --i) msg.push_back(static_cast<std::uint8_t>(total_bits >> (8 * i)));

    auto rotl = [](std::uint32_t x, int c) { return (x << c) | (x >> (32 - c)); };
    std::uint32_t w[80];
    for (std::size_t chunk = 0; chunk < msg.size(); chunk += 64) {
        for (int t = 0; t < 16; ++t)
            w[t] = (static_cast<std::uint32_t>(msg[chunk + 4 * t]) << 24) |
                   (static_cast<std::uint32_t>(msg[chunk + 4 * t + 1]) << 16) |
                   (static_cast<std::uint32_t>(msg[chunk + 4 * t + 2]) << 8) |
                   static_cast<std::uint32_t>(msg[chunk + 4 * t + 3]);
        for (int t = 16; t < 80; ++t) w[t] = rotl(w[t - 3] ^ w[t - 8] ^ w[t - 14] ^ w[t - 16], 1);
        std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
        for (int t = 0; t < 80; ++t) {
            std::uint32_t f, k;
            if (t < 20) {
                f = (b & c) | ((~b) & d);
                k = 0x5A827999u;
            } else if (t < 40) {
                f = b ^ c ^ d;
                k = 0x6ED9EBA1u;
            } else if (t < 60) {
                f = (b & c) | (b & d) | (c & d);
                k = 0x8F1BBCDCu;
            } else {
                f = b ^ c ^ d;
                k = 0xCA62C1D6u;
            }
            std::uint32_t tmp = rotl(a, 5) + f + e + k + w[t];
            e = d;
            d = c;
            c = rotl(b, 30);
            b = a;
            a = tmp;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
    }
    std::ostringstream os;
    os << std::hex;
    for (std::uint32_t x : h)
        for (int i = 7; i >= 0; --i) os << "0123456789abcdef"[(x >> (4 * i)) & 0xF];
    return os.str();
}

std::string sha1_hex(const std::string& data) { return sha1_hex(data.data(), data.size()); }

} // namespace fracfield
