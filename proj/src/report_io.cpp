#include "anisofrac/report_io.hpp"

#include <cstdio>

#include "anisofrac/errors.hpp"
#include "anisofrac/version.hpp"

namespace anisofrac {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string format_sci(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", value);
  return buf;
}

std::string format_int(long long value) {
  return std::to_string(value);
}

std::string json_quote(std::string_view text) {
  std::string out = "\"";
  for (const char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

namespace {

std::string header_line(std::uint64_t config_hash) {
  return std::string("# anisofrac ") + kVersion + " config=" + hex64(config_hash);
}

[[noreturn]] void io_fail(const std::string& path) {
  throw ConfigValidationError("cannot write output file " + path);
}

}  // namespace

TableWriter::TableWriter(const std::string& path, std::uint64_t config_hash,
                         const std::vector<std::string>& columns)
    : out_(path, std::ios::binary), path_(path), columns_(columns.size()) {
  if (!out_) io_fail(path);
  out_ << header_line(config_hash) << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ << ',';
    out_ << columns[i];
  }
  out_ << '\n';
}

void TableWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw ConfigValidationError("row width " + std::to_string(cells.size()) +
                                " does not match " + std::to_string(columns_) +
                                " columns in " + path_);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

void TableWriter::close() {
  out_.flush();
  if (!out_) io_fail(path_);
  out_.close();
}

JsonlWriter::JsonlWriter(const std::string& path, std::uint64_t config_hash)
    : out_(path, std::ios::binary), path_(path) {
  if (!out_) io_fail(path);
  record({{"artifact", json_quote("anisofrac")},
          {"version", json_quote(kVersion)},
          {"config_hash", json_quote(hex64(config_hash))}});
}

void JsonlWriter::record(const std::vector<std::pair<std::string, std::string>>& fields) {
  out_ << '{';
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << json_quote(fields[i].first) << ':' << fields[i].second;
  }
  out_ << "}\n";
}

void JsonlWriter::close() {
  out_.flush();
  if (!out_) io_fail(path_);
  out_.close();
}

}  // namespace anisofrac
