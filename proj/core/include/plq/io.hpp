#ifndef PLQ_IO_HPP
#define PLQ_IO_HPP

#include <string>
#include <string_view>
#include <vector>

#include "plq/function.hpp"

namespace plq {

// Shortest decimal string that parses back to exactly the same double.
// Infinities print as "inf"/"-inf", NaN as "nan".
std::string format_double(double v);

// Full-token parse; accepts inf/-inf/+inf/infinity/nan case-insensitively.
// Throws Error(parse_error) on anything else.
double parse_double(std::string_view token);

// Text format: one piece per line, four whitespace-separated fields
// "x a b c"; '#' starts a comment; blank lines are skipped. Parse errors
// carry 1-based line numbers. The result still needs validate().
std::vector<PlqPiece> parse_plq_text(std::string_view text);

std::string serialize_plq(const PlqFunction& f);

// Convenience wrappers: read + parse + validate, and serialize + write.
PlqFunction read_plq_file(const std::string& path,
                          const Tolerance& tol = Tolerance{});
void write_plq_file(const std::string& path, const PlqFunction& f);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace plq

#endif  // PLQ_IO_HPP
