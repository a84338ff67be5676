#include "sc/codec.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "sc/errors.hpp"

namespace sc {

namespace {

constexpr char kMagic[4] = {'S', 'C', 'E', 'V'};
constexpr std::uint8_t kVersion = 0x01;

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

std::uint16_t get_u16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

// Structural checks shared by unpack() and deserialize().
void validate_stream(const EncodedStream& s) {
    if (s.version != kVersion) throw MalformedStream("unsupported SCEV version");
    if (s.mode != ThresholdMode::Absolute && s.mode != ThresholdMode::Relative)
        throw MalformedStream("unknown threshold mode byte");
    if (!(s.threshold >= 0.0f)) throw MalformedStream("negative or NaN threshold");
    if (s.mode == ThresholdMode::Absolute && s.threshold > 1.0f)
        throw MalformedStream("absolute threshold above 1");
    if (s.width == 0 || s.height == 0) throw MalformedStream("zero image dimension");
    if (s.rows.size() > s.height) throw MalformedStream("more active rows than image rows");

    const std::size_t payload_bytes = s.payload_bytes_per_row();
    int prev = -1;
    for (const RowRecord& row : s.rows) {
        if (static_cast<int>(row.row_index) <= prev)
            throw MalformedStream("row indices not strictly increasing");
        if (row.row_index >= s.height) throw MalformedStream("row index out of range");
        prev = row.row_index;
        if (row.payload.size() != payload_bytes)
            throw MalformedStream("row payload has wrong length");
        bool any_event = false;
        for (std::size_t i = 0; i < payload_bytes; ++i) {
            const std::uint8_t byte = row.payload[i];
            for (int pair = 0; pair < 4; ++pair) {
                const int code = (byte >> (6 - 2 * pair)) & 0x3;
                const std::size_t x = i * 4 + pair;
                if (x >= s.width) {
                    if (code != 0) throw MalformedStream("nonzero pad bits");
                } else {
                    if (code == 0x3) throw MalformedStream("reserved code 11");
                    if (code != 0) any_event = true;
                }
            }
        }
        if (!any_event) throw MalformedStream("encoded row without events");
    }
}

}  // namespace

EncodedStream pack(const TernaryEventImage& ev) {
    if (ev.width < 1 || ev.height < 1 || ev.events.size() != ev.pixel_count())
        throw DimensionMismatch("pack: invalid event image");
    if (ev.width > 0xffff || ev.height > 0xffff)
        throw ImageTooLarge("pack: dimensions exceed 65535");
    EncodedStream s;
    s.version = kVersion;
    s.mode = ev.spec.mode;
    s.threshold = static_cast<float>(ev.spec.value);
    s.width = static_cast<std::uint16_t>(ev.width);
    s.height = static_cast<std::uint16_t>(ev.height);
    const std::size_t payload_bytes = s.payload_bytes_per_row();

    for (int y = 0; y < ev.height; ++y) {
        const std::int8_t* row = ev.events.data() + static_cast<std::size_t>(y) * ev.width;
        bool active = false;
        for (int x = 0; x < ev.width; ++x) {
            if (row[x] != 0) {
                active = true;
                break;
            }
        }
        if (!active) continue;
        RowRecord rec;
        rec.row_index = static_cast<std::uint16_t>(y);
        rec.payload.assign(payload_bytes, 0);
        for (int x = 0; x < ev.width; ++x) {
            const std::uint8_t code = row[x] > 0 ? 0x1 : (row[x] < 0 ? 0x2 : 0x0);
            rec.payload[static_cast<std::size_t>(x) / 4] |=
                static_cast<std::uint8_t>(code << (6 - 2 * (x % 4)));
        }
        s.rows.push_back(std::move(rec));
    }
    return s;
}

TernaryEventImage unpack(const EncodedStream& s) {
    validate_stream(s);
    TernaryEventImage ev;
    ev.width = s.width;
    ev.height = s.height;
    ev.spec = {s.mode, static_cast<double>(s.threshold)};
    ev.events.assign(ev.pixel_count(), 0);
    for (const RowRecord& row : s.rows) {
        std::int8_t* dst = ev.events.data() + static_cast<std::size_t>(row.row_index) * s.width;
        for (int x = 0; x < s.width; ++x) {
            const std::uint8_t byte = row.payload[static_cast<std::size_t>(x) / 4];
            const int code = (byte >> (6 - 2 * (x % 4))) & 0x3;
            dst[x] = code == 0x1 ? std::int8_t{1} : (code == 0x2 ? std::int8_t{-1} : std::int8_t{0});
        }
    }
    return ev;
}

std::vector<std::uint8_t> serialize(const EncodedStream& s) {
    validate_stream(s);
    std::vector<std::uint8_t> out;
    out.reserve(kScevHeaderBytes + s.rows.size() * (kScevRowIndexBytes + s.payload_bytes_per_row()));
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(s.version);
    out.push_back(static_cast<std::uint8_t>(s.mode));
    std::uint32_t tbits;
    static_assert(sizeof(tbits) == sizeof(s.threshold));
    std::memcpy(&tbits, &s.threshold, sizeof(tbits));
    out.push_back(static_cast<std::uint8_t>(tbits & 0xff));
    out.push_back(static_cast<std::uint8_t>((tbits >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>((tbits >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((tbits >> 24) & 0xff));
    put_u16(out, s.width);
    put_u16(out, s.height);
    put_u16(out, static_cast<std::uint16_t>(s.rows.size()));
    for (const RowRecord& row : s.rows) {
        put_u16(out, row.row_index);
        out.insert(out.end(), row.payload.begin(), row.payload.end());
    }
    return out;
}

EncodedStream deserialize(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kScevHeaderBytes) throw MalformedStream("truncated header");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw MalformedStream("bad magic");
    EncodedStream s;
    s.version = bytes[4];
    const std::uint8_t mode_byte = bytes[5];
    if (mode_byte > 1) throw MalformedStream("unknown threshold mode byte");
    s.mode = static_cast<ThresholdMode>(mode_byte);
    std::uint32_t tbits = static_cast<std::uint32_t>(bytes[6]) |
                          (static_cast<std::uint32_t>(bytes[7]) << 8) |
                          (static_cast<std::uint32_t>(bytes[8]) << 16) |
                          (static_cast<std::uint32_t>(bytes[9]) << 24);
    std::memcpy(&s.threshold, &tbits, sizeof(s.threshold));
    s.width = get_u16(bytes.data() + 10);
    s.height = get_u16(bytes.data() + 12);
    const std::uint16_t row_count = get_u16(bytes.data() + 14);
    if (s.width == 0) throw MalformedStream("zero image dimension");

    const std::size_t payload_bytes = (static_cast<std::size_t>(s.width) + 3) / 4;
    const std::size_t record_bytes = kScevRowIndexBytes + payload_bytes;
    const std::size_t expected = kScevHeaderBytes + record_bytes * row_count;
    if (bytes.size() < expected) throw MalformedStream("truncated row records");
    if (bytes.size() > expected) throw MalformedStream("trailing bytes after last row");

    const std::uint8_t* p = bytes.data() + kScevHeaderBytes;
    s.rows.resize(row_count);
    for (std::uint16_t i = 0; i < row_count; ++i) {
        s.rows[i].row_index = get_u16(p);
        p += kScevRowIndexBytes;
        s.rows[i].payload.assign(p, p + payload_bytes);
        p += payload_bytes;
    }
    validate_stream(s);
    return s;
}

void write_scev(const std::filesystem::path& path, const EncodedStream& s) {
    const std::vector<std::uint8_t> bytes = serialize(s);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write: " + path.string());
}

EncodedStream read_scev(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return deserialize(bytes);
}

std::uint64_t ideal_bits(const TransmissionModel& m) {
    if (m.width < 1 || m.height < 1 || m.channels < 1 || m.bits_per_channel < 1)
        throw DimensionMismatch("ideal_bits: model fields must be positive");
    if (!(m.alpha >= 0.0 && m.alpha <= 1.0))
        throw ThresholdOutOfRange("ideal_bits: alpha must be in [0, 1]");
    const long double full = static_cast<long double>(m.width) * m.height * m.channels *
                             m.bits_per_channel * static_cast<long double>(m.alpha);
    // Snap to the nearest integer when the product is integral up to FP
    // rounding (alpha is typically an exact row fraction), else round up.
    const long double nearest = std::round(full);
    if (std::fabs(full - nearest) <= full * 1e-12L)
        return static_cast<std::uint64_t>(nearest);
    return static_cast<std::uint64_t>(std::ceil(full));
}

double reduction_ratio(const TransmissionModel& reference, const TransmissionModel& candidate) {
    if (reference.width != candidate.width || reference.height != candidate.height)
        throw DimensionMismatch("reduction_ratio: models describe different frame sizes");
    const std::uint64_t ref_bits = ideal_bits(reference);
    const std::uint64_t cand_bits = ideal_bits(candidate);
    if (cand_bits == 0) throw DivisionByZero("reduction_ratio: candidate transmits zero bits");
    return static_cast<double>(ref_bits) / static_cast<double>(cand_bits);
}

std::uint64_t measured_bits(const EncodedStream& s) {
    const std::uint64_t row_bytes =
        s.rows.size() * (kScevRowIndexBytes + s.payload_bytes_per_row());
    return 8 * (kScevHeaderBytes + row_bytes);
}

}  // namespace sc
