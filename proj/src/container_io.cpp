#include "hott/container_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace hott {

void write_doubles_le(std::ostream& out, std::span<const double> values) {
    std::vector<char> buf(values.size() * 8);
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::uint64_t bits = std::bit_cast<std::uint64_t>(values[i]);
        for (int b = 0; b < 8; ++b) buf[i * 8 + b] = static_cast<char>((bits >> (8 * b)) & 0xff);
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw std::runtime_error("short write in binary payload");
}

void read_doubles_le(std::istream& in, std::span<double> values) {
    std::vector<char> buf(values.size() * 8);
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() != static_cast<std::streamsize>(buf.size())) {
        throw std::runtime_error("truncated binary payload");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b) {
            bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i * 8 + b]))
                    << (8 * b);
        }
        values[i] = std::bit_cast<double>(bits);
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw std::runtime_error("bad real value in header: " + s);
    return v;
}

void write_header_line(std::ostream& out, const std::string& key, const std::string& value) {
    out << key << ' ' << value << '\n';
}

std::string read_header_line(std::istream& in, const std::string& key) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("truncated header: expected " + key);
    auto space = line.find(' ');
    std::string k = line.substr(0, space);
    if (k != key) throw std::runtime_error("header: expected '" + key + "', found '" + k + "'");
    return space == std::string::npos ? std::string() : line.substr(space + 1);
}

}  // namespace hott
