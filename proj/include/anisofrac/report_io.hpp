// Pinned output formats. Every file opens with a header line naming the
// artifact version and the config hash; numbers print as %.16e (17
// significant digits), so identical runs produce byte-identical files.
#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace anisofrac {

// FNV-1a, 64-bit, over raw bytes.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

std::string format_sci(double value);
std::string format_int(long long value);

// JSON string literal with the required escapes.
std::string json_quote(std::string_view text);

// CSV with a `# anisofrac <version> config=<hash>` first line and a column
// name row. Cells are written verbatim; writers pass preformatted numbers.
class TableWriter {
public:
  TableWriter(const std::string& path, std::uint64_t config_hash,
              const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);
  void close();

private:
  std::ofstream out_;
  std::string path_;
  std::size_t columns_ = 0;
};

// JSON-lines with a header record {"artifact": ..., "version": ...,
// "config_hash": ...}. Values are inserted verbatim: numbers via format_sci /
// format_int, strings via json_quote.
class JsonlWriter {
public:
  JsonlWriter(const std::string& path, std::uint64_t config_hash);
  void record(const std::vector<std::pair<std::string, std::string>>& fields);
  void close();

private:
  std::ofstream out_;
  std::string path_;
};

}  // namespace anisofrac
