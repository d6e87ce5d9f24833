#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>

namespace hott {

/// Shared pieces of the header+binary artifact containers: doubles are
/// serialized as 64-bit little-endian payloads regardless of host order, and
/// header reals use a round-trip-exact decimal form.
void write_doubles_le(std::ostream& out, std::span<const double> values);
void read_doubles_le(std::istream& in, std::span<double> values);

std::string format_double(double v);  // shortest round-trip form (%.17g)
double parse_double(const std::string& s);

/// "key value" header line helpers; read_header_line throws if the key on the
/// next line differs from the expected one.
void write_header_line(std::ostream& out, const std::string& key, const std::string& value);
std::string read_header_line(std::istream& in, const std::string& key);

}  // namespace hott
