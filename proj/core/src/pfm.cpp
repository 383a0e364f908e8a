#include "lfdepth/pfm.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "lfdepth/errors.hpp"

namespace lfdepth {

namespace {

constexpr bool host_little_endian = std::endian::native == std::endian::little;

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) {
            std::fclose(f);
        }
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void swap4(std::uint32_t* p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t v = p[i];
        p[i] = (v >> 24) | ((v >> 8) & 0x0000ff00u) | ((v << 8) & 0x00ff0000u) | (v << 24);
    }
}

// Reads one whitespace-delimited token, like fscanf("%s") but with a bounded
// buffer and explicit failure.
std::string read_token(std::FILE* f, const std::filesystem::path& path) {
    std::string tok;
    int c = std::fgetc(f);
    while (c != EOF && std::isspace(c)) {
        c = std::fgetc(f);
    }
    while (c != EOF && !std::isspace(c)) {
        tok.push_back(static_cast<char>(c));
        if (tok.size() > 64) {
            throw io_error("pfm: oversized header token in " + path.string());
        }
        c = std::fgetc(f);
    }
    if (tok.empty()) {
        throw io_error("pfm: truncated header in " + path.string());
    }
    return tok;
}

}  // namespace

Map2D read_pfm(const std::filesystem::path& path) {
    FilePtr f(std::fopen(path.string().c_str(), "rb"));
    if (!f) {
        throw io_error("pfm: cannot open " + path.string());
    }
    const std::string magic = read_token(f.get(), path);
    if (magic != "Pf") {
        throw io_error("pfm: bad magic '" + magic + "' in " + path.string() +
                       " (only grayscale Pf is supported)");
    }
    int w = 0;
    int h = 0;
    double scale = 0.0;
    try {
        w = std::stoi(read_token(f.get(), path));
        h = std::stoi(read_token(f.get(), path));
        scale = std::stod(read_token(f.get(), path));
    } catch (const std::exception&) {
        throw io_error("pfm: malformed header in " + path.string());
    }
    if (w <= 0 || h <= 0 || scale == 0.0) {
        throw io_error("pfm: bad dimensions or scale in " + path.string());
    }

    const std::size_t n = static_cast<std::size_t>(w) * h;
    std::vector<float> payload(n);
    if (std::fread(payload.data(), sizeof(float), n, f.get()) != n) {
        throw io_error("pfm: truncated payload in " + path.string());
    }
    const bool file_little = scale < 0.0;
    if (file_little != host_little_endian) {
        swap4(reinterpret_cast<std::uint32_t*>(payload.data()), n);
    }

    // Rows are stored bottom-up: the first payload row is the bottom image row.
    Map2D out(w, h);
    for (int y = 0; y < h; ++y) {
        const float* row = payload.data() + static_cast<std::size_t>(h - 1 - y) * w;
        for (int x = 0; x < w; ++x) {
            out.at(y, x) = row[x];
        }
    }
    return out;
}

void write_pfm(const Map2D& map, const std::filesystem::path& path) {
    if (map.empty()) {
        throw io_error("pfm: refusing to write an empty map");
    }
    FilePtr f(std::fopen(path.string().c_str(), "wb"));
    if (!f) {
        throw io_error("pfm: cannot open " + path.string() + " for writing");
    }
    const double scale = host_little_endian ? -1.0 : 1.0;
    if (std::fprintf(f.get(), "Pf\n%d %d\n%g\n", map.width(), map.height(), scale) < 0) {
        throw io_error("pfm: write failed for " + path.string());
    }
    const int w = map.width();
    const int h = map.height();
    std::vector<float> row(static_cast<std::size_t>(w));
    for (int y = h - 1; y >= 0; --y) {
        for (int x = 0; x < w; ++x) {
            row[static_cast<std::size_t>(x)] = static_cast<float>(map.at(y, x));
        }
        if (std::fwrite(row.data(), sizeof(float), row.size(), f.get()) != row.size()) {
            throw io_error("pfm: write failed for " + path.string());
        }
    }
}

DisparityMap read_pfm_disparity(const std::filesystem::path& path) {
    const Map2D raw = read_pfm(path);
    DisparityMap out(raw.width(), raw.height());
    for (int y = 0; y < raw.height(); ++y) {
        for (int x = 0; x < raw.width(); ++x) {
            const double v = raw.at(y, x);
            if (std::isfinite(v)) {
                out.set(y, x, v);
            }
        }
    }
    return out;
}

void write_pfm_disparity(const DisparityMap& map, const std::filesystem::path& path) {
    if (map.empty()) {
        throw io_error("pfm: refusing to write an empty map");
    }
    Map2D raw(map.width(), map.height());
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            raw.at(y, x) = map.is_valid(y, x) ? map.value(y, x)
                                              : std::numeric_limits<double>::quiet_NaN();
        }
    }
    write_pfm(raw, path);
}

}  // namespace lfdepth
