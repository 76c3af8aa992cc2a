#include "streamsketch/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "streamsketch/errors.hpp"

namespace streamsketch {

namespace {

[[noreturn]] void fail_at_offset(const std::string& path, const char* what,
                                 std::uint64_t offset) {
    std::ostringstream msg;
    msg << path << ": " << what << " at offset " << offset;
    throw FormatError(msg.str());
}

[[noreturn]] void fail_at_line(const std::string& path, const char* what,
                               std::size_t line) {
    std::ostringstream msg;
    msg << path << ": " << what << " at line " << line;
    throw FormatError(msg.str());
}

std::uint32_t decode_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) |
           (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

std::vector<Point> read_fvecs(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(path + ": cannot open file");
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
    const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
    std::uint64_t size = bytes.size();

    std::vector<Point> points;
    std::uint64_t offset = 0;
    std::uint32_t dim = 0;
    while (offset < size) {
        if (size - offset < 4) fail_at_offset(path, "truncated record", offset);
        std::uint32_t d = decode_u32(data + offset);
        if (d == 0 || d > (1u << 24))
            fail_at_offset(path, "implausible dimension", offset);
        if (points.empty()) {
            dim = d;
        } else if (d != dim) {
            fail_at_offset(path, "inconsistent dimension", offset);
        }
        if (size - offset - 4 < static_cast<std::uint64_t>(d) * 4)
            fail_at_offset(path, "truncated record", offset);
        Point p;
        p.coords.resize(d);
        for (std::uint32_t i = 0; i < d; ++i)
            p.coords[i] =
                std::bit_cast<float>(decode_u32(data + offset + 4 + 4 * i));
        points.push_back(std::move(p));
        offset += 4 + static_cast<std::uint64_t>(d) * 4;
    }
    return points;
}

void write_fvecs(const std::string& path, const std::vector<Point>& points) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError(path + ": cannot open file for writing");
    for (const Point& p : points) {
        auto d = static_cast<std::uint32_t>(p.dim());
        unsigned char header[4] = {static_cast<unsigned char>(d & 0xff),
                                   static_cast<unsigned char>((d >> 8) & 0xff),
                                   static_cast<unsigned char>((d >> 16) & 0xff),
                                   static_cast<unsigned char>((d >> 24) & 0xff)};
        out.write(reinterpret_cast<const char*>(header), 4);
        for (float v : p.coords) {
            auto bits = std::bit_cast<std::uint32_t>(v);
            unsigned char b[4] = {static_cast<unsigned char>(bits & 0xff),
                                  static_cast<unsigned char>((bits >> 8) & 0xff),
                                  static_cast<unsigned char>((bits >> 16) & 0xff),
                                  static_cast<unsigned char>((bits >> 24) & 0xff)};
            out.write(reinterpret_cast<const char*>(b), 4);
        }
    }
    if (!out) throw FormatError(path + ": write failed");
}

std::vector<Point> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError(path + ": cannot open file");
    std::vector<Point> points;
    std::string line;
    std::size_t line_no = 0;
    std::size_t arity = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        Point p;
        std::size_t pos = 0;
        while (true) {
            std::size_t comma = line.find(',', pos);
            std::string cell = line.substr(
                pos, comma == std::string::npos ? std::string::npos : comma - pos);
            std::size_t begin = cell.find_first_not_of(" \t");
            std::size_t end = cell.find_last_not_of(" \t");
            if (begin == std::string::npos)
                fail_at_line(path, "empty cell", line_no);
            cell = cell.substr(begin, end - begin + 1);
            float value = 0.0f;
            auto [ptr, ec] =
                std::from_chars(cell.data(), cell.data() + cell.size(), value);
            if (ec != std::errc() || ptr != cell.data() + cell.size())
                fail_at_line(path, "non-numeric cell", line_no);
            p.coords.push_back(value);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (arity == 0) {
            arity = p.dim();
        } else if (p.dim() != arity) {
            fail_at_line(path, "ragged row", line_no);
        }
        points.push_back(std::move(p));
    }
    return points;
}

void write_csv(const std::string& path, const std::vector<Point>& points) {
    std::ofstream out(path);
    if (!out) throw FormatError(path + ": cannot open file for writing");
    out.precision(9);
    for (const Point& p : points) {
        for (std::size_t i = 0; i < p.dim(); ++i) {
            if (i) out << ',';
            out << p.coords[i];
        }
        out << '\n';
    }
    if (!out) throw FormatError(path + ": write failed");
}

}  // namespace streamsketch
