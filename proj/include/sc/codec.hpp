#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sc/threshold.hpp"

namespace sc {

// SCEV wire format, one event image per stream.
//
//   header (16 bytes):
//     0..3   magic "SCEV"
//     4      version, 0x01
//     5      mode: 0x00 absolute, 0x01 relative
//     6..9   threshold, IEEE-754 binary32 little-endian
//     10..11 width,  uint16 little-endian
//     12..13 height, uint16 little-endian
//     14..15 active row count, uint16 little-endian
//   then one record per active row, in strictly increasing row order:
//     row index, uint16 little-endian
//     ceil(width / 4) payload bytes; 2-bit codes packed MSB-first,
//     00 = NO, 01 = ON, 10 = OFF, 11 reserved; pad bits zero
//
// Rows without events are omitted and decode back to all-zero rows.
struct RowRecord {
    std::uint16_t row_index = 0;
    std::vector<std::uint8_t> payload;

    bool operator==(const RowRecord&) const = default;
};

struct EncodedStream {
    std::uint8_t version = 1;
    ThresholdMode mode = ThresholdMode::Absolute;
    float threshold = 0.0f;
    std::uint16_t width = 0;
    std::uint16_t height = 0;
    std::vector<RowRecord> rows;

    std::size_t active_row_count() const { return rows.size(); }
    std::size_t payload_bytes_per_row() const { return (static_cast<std::size_t>(width) + 3) / 4; }
    bool operator==(const EncodedStream&) const = default;
};

inline constexpr std::size_t kScevHeaderBytes = 16;
inline constexpr std::size_t kScevRowIndexBytes = 2;

// Row-sparse encoding of an event image. Throws ImageTooLarge when a
// dimension exceeds 65535.
EncodedStream pack(const TernaryEventImage& ev);

// Exact inverse of pack. Throws MalformedStream on any structural violation
// (non-monotone rows, reserved code 11, nonzero pad bits, empty rows, ...).
TernaryEventImage unpack(const EncodedStream& s);

std::vector<std::uint8_t> serialize(const EncodedStream& s);
EncodedStream deserialize(std::span<const std::uint8_t> bytes);

void write_scev(const std::filesystem::path& path, const EncodedStream& s);
EncodedStream read_scev(const std::filesystem::path& path);

// Eq-style transmission size model: bits = w * h * c * b * alpha.
struct TransmissionModel {
    int width = 0;
    int height = 0;
    int channels = 0;
    int bits_per_channel = 0;
    double alpha = 1.0;  // active-row fraction in [0, 1]
};

// Model size rounded up to whole bits.
std::uint64_t ideal_bits(const TransmissionModel& m);

// ideal_bits(reference) / ideal_bits(candidate). Throws DivisionByZero when
// the candidate's alpha is 0.
double reduction_ratio(const TransmissionModel& reference, const TransmissionModel& candidate);

// Actual wire cost: 8 * (16 header bytes + per-row (2 + ceil(width/4)) bytes).
std::uint64_t measured_bits(const EncodedStream& s);

}  // namespace sc
