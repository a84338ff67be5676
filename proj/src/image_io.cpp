#include "sc/image_io.hpp"

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

#include "sc/errors.hpp"

namespace sc {

namespace {

// Skips whitespace and '#' comment lines inside a PNM header.
int next_pnm_token(std::istream& in, std::string& tok) {
    tok.clear();
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    while (c != EOF && !std::isspace(c)) {
        tok.push_back(static_cast<char>(c));
        c = in.get();
    }
    return tok.empty() ? EOF : 0;
}

long parse_pnm_int(std::istream& in, const std::filesystem::path& path) {
    std::string tok;
    if (next_pnm_token(in, tok) == EOF)
        throw UnreadableImage("truncated PNM header: " + path.string());
    try {
        return std::stol(tok);
    } catch (const std::exception&) {
        throw UnreadableImage("bad PNM header field '" + tok + "': " + path.string());
    }
}

RgbImage load_pnm(const std::filesystem::path& path, bool is_ppm) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    char magic[2];
    in.read(magic, 2);
    const long w = parse_pnm_int(in, path);
    const long h = parse_pnm_int(in, path);
    const long maxval = parse_pnm_int(in, path);
    if (w < 1 || h < 1) throw UnreadableImage("bad PNM dimensions: " + path.string());
    if (maxval > 255) throw UnreadableImage("16-bit PNM rejected: " + path.string());
    if (maxval < 1) throw UnreadableImage("bad PNM maxval: " + path.string());
    // The header's maxval is followed by exactly one whitespace byte, already
    // consumed by the tokenizer.
    RgbImage img;
    img.width = static_cast<int>(w);
    img.height = static_cast<int>(h);
    img.pixels.resize(img.pixel_count() * 3);
    if (is_ppm) {
        in.read(reinterpret_cast<char*>(img.pixels.data()),
                static_cast<std::streamsize>(img.pixels.size()));
        if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
            throw UnreadableImage("truncated PPM payload: " + path.string());
    } else {
        std::vector<std::uint8_t> gray(img.pixel_count());
        in.read(reinterpret_cast<char*>(gray.data()), static_cast<std::streamsize>(gray.size()));
        if (in.gcount() != static_cast<std::streamsize>(gray.size()))
            throw UnreadableImage("truncated PGM payload: " + path.string());
        for (std::size_t i = 0; i < gray.size(); ++i) {
            img.pixels[3 * i + 0] = gray[i];
            img.pixels[3 * i + 1] = gray[i];
            img.pixels[3 * i + 2] = gray[i];
        }
    }
    if (maxval != 255) {
        for (auto& v : img.pixels)
            v = static_cast<std::uint8_t>((static_cast<long>(v) * 255 + maxval / 2) / maxval);
    }
    return img;
}

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* fp = nullptr;
    ~PngReader() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

extern "C" {
void png_quiet_error(png_structp png, png_const_charp) { png_longjmp(png, 1); }
void png_quiet_warning(png_structp, png_const_charp) {}
}

RgbImage load_png(const std::filesystem::path& path) {
    PngReader rd;
    rd.fp = std::fopen(path.string().c_str(), "rb");
    if (!rd.fp) throw IoError("cannot open " + path.string());
    rd.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_quiet_error,
                                    png_quiet_warning);
    if (!rd.png) throw UnreadableImage("libpng init failed");
    rd.info = png_create_info_struct(rd.png);
    if (!rd.info) throw UnreadableImage("libpng init failed");
    if (setjmp(png_jmpbuf(rd.png)))
        throw UnreadableImage("corrupt PNG: " + path.string());

    png_init_io(rd.png, rd.fp);
    png_read_info(rd.png, rd.info);

    const png_uint_32 w = png_get_image_width(rd.png, rd.info);
    const png_uint_32 h = png_get_image_height(rd.png, rd.info);
    const int bit_depth = png_get_bit_depth(rd.png, rd.info);
    const int color_type = png_get_color_type(rd.png, rd.info);
    if (bit_depth == 16)
        throw UnreadableImage("16-bit PNG rejected: " + path.string());
    if (w < 1 || h < 1 || w > 1u << 20 || h > 1u << 20)
        throw UnreadableImage("bad PNG dimensions: " + path.string());

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(rd.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
        png_set_expand_gray_1_2_4_to_8(rd.png);
    if (png_get_valid(rd.png, rd.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(rd.png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(rd.png);
    png_set_strip_alpha(rd.png);
    png_set_interlace_handling(rd.png);
    png_read_update_info(rd.png, rd.info);

    if (png_get_rowbytes(rd.png, rd.info) != static_cast<std::size_t>(w) * 3)
        throw UnreadableImage("unsupported PNG layout: " + path.string());

    RgbImage img;
    img.width = static_cast<int>(w);
    img.height = static_cast<int>(h);
    img.pixels.resize(img.pixel_count() * 3);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = img.pixels.data() + static_cast<std::size_t>(y) * w * 3;
    png_read_image(rd.png, rows.data());
    png_read_end(rd.png, nullptr);
    return img;
}

void write_binary(const std::filesystem::path& path, const std::string& header,
                  const std::uint8_t* data, std::size_t size) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out) throw IoError("short write: " + path.string());
}

}  // namespace

RgbImage load_image(const std::filesystem::path& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw IoError("cannot open " + path.string());
    unsigned char sig[8] = {0};
    probe.read(reinterpret_cast<char*>(sig), 8);
    const auto got = probe.gcount();
    probe.close();
    if (got >= 8 && !png_sig_cmp(sig, 0, 8)) return load_png(path);
    if (got >= 2 && sig[0] == 'P' && sig[1] == '6') return load_pnm(path, true);
    if (got >= 2 && sig[0] == 'P' && sig[1] == '5') return load_pnm(path, false);
    throw UnreadableImage("unrecognized image format: " + path.string());
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
    std::vector<std::uint8_t> bytes(img.pixel_count());
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        const double v = std::round(img.pixels[i] * 255.0);
        bytes[i] = static_cast<std::uint8_t>(v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v));
    }
    const std::string header =
        "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    write_binary(path, header, bytes.data(), bytes.size());
}

void write_event_pgm(const std::filesystem::path& path, const TernaryEventImage& ev) {
    const std::vector<std::uint8_t> bytes = render_events(ev);
    const std::string header =
        "P5\n" + std::to_string(ev.width) + " " + std::to_string(ev.height) + "\n255\n";
    write_binary(path, header, bytes.data(), bytes.size());
}

void write_ppm(const std::filesystem::path& path, const RgbImage& img) {
    const std::string header =
        "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    write_binary(path, header, img.pixels.data(), img.pixels.size());
}

}  // namespace sc
