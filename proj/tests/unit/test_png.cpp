#include <doctest.h>

#include <fstream>

#include "sc/errors.hpp"
#include "sc/image_io.hpp"
#include "test_util.hpp"

using namespace sc;
namespace fs = std::filesystem;

namespace {

// Tiny pre-encoded PNG fixtures (byte dumps of known images).

// 2x2 truecolor: (255,0,0) (0,255,0) / (0,0,255) (10,20,30)
const std::vector<std::uint8_t> kPngRgb2x2 = {
    0x89, 0x50, 0x4E, 0x47, 0x0D, 0x0A, 0x1A, 0x0A, 0x00, 0x00, 0x00, 0x0D, 0x49, 0x48, 0x44,
    0x52, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x02, 0x08, 0x02, 0x00, 0x00, 0x00, 0xFD,
    0xD4, 0x9A, 0x73, 0x00, 0x00, 0x00, 0x16, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9C, 0x63, 0xF8,
    0xCF, 0xC0, 0xC0, 0xF0, 0x9F, 0x81, 0x81, 0x81, 0xE1, 0x3F, 0x97, 0x88, 0x1C, 0x00, 0x1A,
    0x58, 0x03, 0x3A, 0x82, 0xE0, 0xAB, 0x53, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4E, 0x44,
    0xAE, 0x42, 0x60, 0x82};

// 3x1 8-bit grayscale: 0, 128, 255
const std::vector<std::uint8_t> kPngGray3x1 = {
    0x89, 0x50, 0x4E, 0x47, 0x0D, 0x0A, 0x1A, 0x0A, 0x00, 0x00, 0x00, 0x0D, 0x49, 0x48, 0x44,
    0x52, 0x00, 0x00, 0x00, 0x03, 0x00, 0x00, 0x00, 0x01, 0x08, 0x00, 0x00, 0x00, 0x00, 0x3E,
    0x8B, 0x4B, 0x68, 0x00, 0x00, 0x00, 0x0C, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9C, 0x63, 0x60,
    0x68, 0xF8, 0x0F, 0x00, 0x02, 0x03, 0x01, 0x80, 0x24, 0x61, 0xF5, 0x97, 0x00, 0x00, 0x00,
    0x00, 0x49, 0x45, 0x4E, 0x44, 0xAE, 0x42, 0x60, 0x82};

// 2x1 RGBA: (100,110,120,255) (1,2,3,0); alpha must be stripped
const std::vector<std::uint8_t> kPngRgba2x1 = {
    0x89, 0x50, 0x4E, 0x47, 0x0D, 0x0A, 0x1A, 0x0A, 0x00, 0x00, 0x00, 0x0D, 0x49, 0x48, 0x44,
    0x52, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x01, 0x08, 0x06, 0x00, 0x00, 0x00, 0xF4,
    0x22, 0x7F, 0x8A, 0x00, 0x00, 0x00, 0x11, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9C, 0x63, 0x48,
    0xC9, 0xAB, 0xF8, 0xCF, 0xC8, 0xC4, 0xCC, 0x00, 0x00, 0x0E, 0x06, 0x02, 0x50, 0xAD, 0xA8,
    0xC1, 0x13, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4E, 0x44, 0xAE, 0x42, 0x60, 0x82};

// 2x1 16-bit grayscale: must be rejected
const std::vector<std::uint8_t> kPng16bit2x1 = {
    0x89, 0x50, 0x4E, 0x47, 0x0D, 0x0A, 0x1A, 0x0A, 0x00, 0x00, 0x00, 0x0D, 0x49, 0x48, 0x44,
    0x52, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x01, 0x10, 0x00, 0x00, 0x00, 0x00, 0x81,
    0xD9, 0xFC, 0x15, 0x00, 0x00, 0x00, 0x0D, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9C, 0x63, 0x60,
    0x60, 0xF8, 0xFF, 0x1F, 0x00, 0x03, 0x02, 0x01, 0xFF, 0xE6, 0x77, 0x0B, 0xAE, 0x00, 0x00,
    0x00, 0x00, 0x49, 0x45, 0x4E, 0x44, 0xAE, 0x42, 0x60, 0x82};

fs::path dump(const fs::path& dir, const char* name, const std::vector<std::uint8_t>& bytes) {
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    return path;
}

}  // namespace

TEST_CASE("PNG: 8-bit truecolor decodes to the known pixels") {
    const fs::path dir = testutil::fresh_dir("png_rgb");
    const RgbImage img = load_image(dump(dir, "rgb.png", kPngRgb2x2));
    CHECK(img.width == 2);
    CHECK(img.height == 2);
    CHECK(img.pixels == std::vector<std::uint8_t>{255, 0, 0, 0, 255, 0, 0, 0, 255, 10, 20, 30});
}

TEST_CASE("PNG: grayscale expands to replicated RGB channels") {
    const fs::path dir = testutil::fresh_dir("png_gray");
    const RgbImage img = load_image(dump(dir, "gray.png", kPngGray3x1));
    CHECK(img.width == 3);
    CHECK(img.height == 1);
    CHECK(img.pixels == std::vector<std::uint8_t>{0, 0, 0, 128, 128, 128, 255, 255, 255});
}

TEST_CASE("PNG: alpha channel is stripped") {
    const fs::path dir = testutil::fresh_dir("png_rgba");
    const RgbImage img = load_image(dump(dir, "rgba.png", kPngRgba2x1));
    CHECK(img.width == 2);
    CHECK(img.height == 1);
    CHECK(img.pixels == std::vector<std::uint8_t>{100, 110, 120, 1, 2, 3});
}

TEST_CASE("PNG: 16-bit input is rejected") {
    const fs::path dir = testutil::fresh_dir("png_16bit");
    CHECK_THROWS_AS(load_image(dump(dir, "deep.png", kPng16bit2x1)), UnreadableImage);
}

TEST_CASE("PNG: truncated file is rejected") {
    const fs::path dir = testutil::fresh_dir("png_trunc");
    std::vector<std::uint8_t> cut(kPngRgb2x2.begin(), kPngRgb2x2.begin() + 40);
    CHECK_THROWS_AS(load_image(dump(dir, "cut.png", cut)), UnreadableImage);
}
