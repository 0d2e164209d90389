#include "plq/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "plq/error.hpp"

namespace plq {
namespace {

[[noreturn]] void parse_fail(const std::string& msg) {
  throw Error(errc::parse_error, msg);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool iequals(std::string_view s, std::string_view word) {
  if (s.size() != word.size()) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) != word[i]) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view token) {
  std::string_view t = trim(token);
  if (t.empty()) parse_fail("empty number");
  bool negative = false;
  if (t.front() == '+' || t.front() == '-') {
    negative = t.front() == '-';
    t.remove_prefix(1);
  }
  if (t.empty() || t.front() == '+' || t.front() == '-') {
    parse_fail("bad number '" + std::string(token) + "'");
  }
  if (iequals(t, "inf") || iequals(t, "infinity")) {
    return negative ? -kInf : kInf;
  }
  if (iequals(t, "nan")) return kNaN;
  double value = 0.0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    parse_fail("bad number '" + std::string(token) + "'");
  }
  return negative ? -value : value;
}

std::vector<PlqPiece> parse_plq_text(std::string_view text) {
  std::vector<PlqPiece> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? std::string_view::npos
                                           : eol - pos);
    ++line_no;
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

    if (const std::size_t hash = line.find('#');
        hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    std::istringstream fields{std::string(line)};
    std::string tok[4];
    if (!(fields >> tok[0] >> tok[1] >> tok[2] >> tok[3])) {
      parse_fail("line " + std::to_string(line_no) +
                 ": expected four fields 'x a b c'");
    }
    std::string extra;
    if (fields >> extra) {
      parse_fail("line " + std::to_string(line_no) + ": trailing field '" +
                 extra + "'");
    }
    PlqPiece p;
    try {
      p.x = parse_double(tok[0]);
      p.a = parse_double(tok[1]);
      p.b = parse_double(tok[2]);
      p.c = parse_double(tok[3]);
    } catch (const Error& e) {
      parse_fail("line " + std::to_string(line_no) + ": " + e.what());
    }
    rows.push_back(p);
  }
  if (rows.empty()) throw Error(errc::empty_input, "no pieces in input");
  return rows;
}

std::string serialize_plq(const PlqFunction& f) {
  std::string out;
  for (const PlqPiece& p : f.rows()) {
    out += format_double(p.x);
    out += ' ';
    out += format_double(p.a);
    out += ' ';
    out += format_double(p.b);
    out += ' ';
    out += format_double(p.c);
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_fail("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) parse_fail("cannot write '" + path + "'");
  out << content;
  if (!out) parse_fail("write failed for '" + path + "'");
}

PlqFunction read_plq_file(const std::string& path, const Tolerance& tol) {
  return PlqFunction::validate(parse_plq_text(read_text_file(path)), tol);
}

void write_plq_file(const std::string& path, const PlqFunction& f) {
  write_text_file(path, serialize_plq(f));
}

}  // namespace plq
