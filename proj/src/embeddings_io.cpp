#include "latentscope/embeddings_io.hpp"

#include <bit>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "latentscope/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "embedding files are little-endian; big-endian hosts are not supported");

namespace latentscope {

namespace {

constexpr char kNpyMagic[6] = {'\x93', 'N', 'U', 'M', 'P', 'Y'};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file for reading: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on: " + path.string());
  return std::move(buf).str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open file for writing: " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("write failure on: " + path.string());
}

std::size_t element_bytes(ElementWidth width) {
  return width == ElementWidth::F32 ? 4 : 8;
}

// --- npy subset ------------------------------------------------------------

// Extracts the raw value text for `key` from the header dict, e.g.
// "'descr': '<f8'" -> "'<f8'". The header is ASCII by construction.
std::string dict_value(const std::string& header, const std::string& key,
                       const std::filesystem::path& path) {
  const std::string quoted = "'" + key + "'";
  const std::size_t at = header.find(quoted);
  if (at == std::string::npos) {
    throw FormatError("npy header of " + path.string() + " is missing key " + quoted);
  }
  std::size_t p = at + quoted.size();
  while (p < header.size() && (header[p] == ' ' || header[p] == ':')) ++p;
  std::size_t depth = 0;
  std::size_t end = p;
  while (end < header.size()) {
    const char c = header[end];
    if (c == '(') ++depth;
    if (c == ')') {
      if (depth == 0) break;
      --depth;
    }
    if ((c == ',' || c == '}') && depth == 0) break;
    ++end;
  }
  std::string value = header.substr(p, end - p);
  while (!value.empty() && value.back() == ' ') value.pop_back();
  return value;
}

std::vector<std::size_t> parse_shape_tuple(std::string text, const std::filesystem::path& path) {
  if (text.size() < 2 || text.front() != '(') {
    throw FormatError("npy header of " + path.string() + " has a malformed shape: " + text);
  }
  text = text.substr(1);  // drop '('; the trailing ')' is stripped per token
  std::vector<std::size_t> dims;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    std::size_t begin = token.find_first_not_of(" )");
    if (begin == std::string::npos) continue;
    std::size_t len = token.find_last_not_of(" )") - begin + 1;
    const std::string number = token.substr(begin, len);
    char* end = nullptr;
    const unsigned long long v = std::strtoull(number.c_str(), &end, 10);
    if (end == number.c_str() || *end != '\0') {
      throw FormatError("npy header of " + path.string() + " has a malformed shape entry: '" +
                        number + "'");
    }
    dims.push_back(static_cast<std::size_t>(v));
  }
  return dims;
}

LatentMatrix load_npy(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() < 10) {
    throw FormatError("npy file " + path.string() + " is truncated: " +
                      std::to_string(bytes.size()) + " bytes, need at least 10 (byte offset 0)");
  }
  if (std::memcmp(bytes.data(), kNpyMagic, 6) != 0) {
    throw FormatError("bad npy magic in " + path.string() + " at byte offset 0");
  }
  const unsigned major = static_cast<unsigned char>(bytes[6]);
  const unsigned minor = static_cast<unsigned char>(bytes[7]);
  if (major != 1 || minor != 0) {
    throw FormatError("unsupported npy version " + std::to_string(major) + "." +
                      std::to_string(minor) + " in " + path.string() +
                      " at byte offset 6 (only 1.0 is supported)");
  }
  const std::size_t header_len = static_cast<unsigned char>(bytes[8]) |
                                 (static_cast<std::size_t>(static_cast<unsigned char>(bytes[9])) << 8);
  if (10 + header_len > bytes.size()) {
    throw FormatError("npy header of " + path.string() + " declares " +
                      std::to_string(header_len) + " header bytes at offset 8 but only " +
                      std::to_string(bytes.size() - 10) + " remain");
  }
  const std::string header = bytes.substr(10, header_len);

  const std::string descr = dict_value(header, "descr", path);
  ElementWidth width;
  if (descr == "'<f4'" || descr == "\"<f4\"") {
    width = ElementWidth::F32;
  } else if (descr == "'<f8'" || descr == "\"<f8\"") {
    width = ElementWidth::F64;
  } else if (descr.size() >= 2 && descr[1] == '>') {
    throw FormatError("unsupported layout in " + path.string() + ": big-endian descr " + descr);
  } else {
    throw FormatError("unsupported npy descr " + descr + " in " + path.string() +
                      " (supported: '<f4', '<f8')");
  }

  const std::string order = dict_value(header, "fortran_order", path);
  if (order == "True") {
    throw FormatError("unsupported layout in " + path.string() +
                      ": fortran_order=True (only C order is supported)");
  }
  if (order != "False") {
    throw FormatError("npy header of " + path.string() + " has malformed fortran_order: " + order);
  }

  const auto shape = parse_shape_tuple(dict_value(header, "shape", path), path);
  std::size_t n_rows, n_dims;
  if (shape.size() == 1) {
    n_rows = 1;
    n_dims = shape[0];
  } else if (shape.size() == 2) {
    n_rows = shape[0];
    n_dims = shape[1];
  } else {
    throw FormatError("unsupported layout in " + path.string() + ": " +
                      std::to_string(shape.size()) + "-D shape (only 1-D and 2-D are supported)");
  }

  const std::size_t data_offset = 10 + header_len;
  const std::size_t n_elems = n_rows * n_dims;
  const std::size_t expected = n_elems * element_bytes(width);
  const std::size_t actual = bytes.size() - data_offset;
  if (expected != actual) {
    throw FormatError("npy payload of " + path.string() + " at byte offset " +
                      std::to_string(data_offset) + " has " + std::to_string(actual) +
                      " bytes but the header shape requires " + std::to_string(expected));
  }

  std::vector<double> values(n_elems);
  const char* data = bytes.data() + data_offset;
  if (width == ElementWidth::F32) {
    for (std::size_t i = 0; i < n_elems; ++i) {
      float v;
      std::memcpy(&v, data + i * 4, 4);
      values[i] = static_cast<double>(v);
    }
  } else {
    std::memcpy(values.data(), data, expected);
  }
  return LatentMatrix(n_rows, n_dims, std::move(values));
}

void save_npy(const LatentMatrix& matrix, const std::filesystem::path& path,
              ElementWidth width) {
  std::string dict = "{'descr': '";
  dict += width == ElementWidth::F32 ? "<f4" : "<f8";
  dict += "', 'fortran_order': False, 'shape': (";
  dict += std::to_string(matrix.rows()) + ", " + std::to_string(matrix.dims());
  dict += "), }";
  // Pad so magic + version + length field + header is a multiple of 64,
  // terminated by a newline, matching the reference writer.
  const std::size_t unpadded = 10 + dict.size() + 1;
  const std::size_t padding = (64 - unpadded % 64) % 64;
  dict.append(padding, ' ');
  dict.push_back('\n');

  std::string bytes(kNpyMagic, 6);
  bytes.push_back('\x01');
  bytes.push_back('\x00');
  const std::size_t header_len = dict.size();
  bytes.push_back(static_cast<char>(header_len & 0xff));
  bytes.push_back(static_cast<char>((header_len >> 8) & 0xff));
  bytes += dict;

  if (width == ElementWidth::F32) {
    for (const double v : matrix.values()) {
      const float f = static_cast<float>(v);
      bytes.append(reinterpret_cast<const char*>(&f), 4);
    }
  } else {
    bytes.append(reinterpret_cast<const char*>(matrix.data()), matrix.values().size() * 8);
  }
  write_file(path, bytes);
}

// --- raw binary -------------------------------------------------------------

LatentMatrix load_raw(const std::filesystem::path& path, const EmbeddingFormat& format) {
  if (format.raw_dims < 1) {
    throw ConfigError("raw-binary loads need the row width; pass the dimension count");
  }
  const std::string bytes = read_file(path);
  const std::size_t width = element_bytes(format.width);
  const std::size_t row_bytes = format.raw_dims * width;
  if (bytes.empty() || bytes.size() % row_bytes != 0) {
    throw FormatError("raw-binary file " + path.string() + " has " +
                      std::to_string(bytes.size()) + " bytes, not a positive multiple of the " +
                      std::to_string(row_bytes) + "-byte row size (trailing data at byte offset " +
                      std::to_string(bytes.size() - bytes.size() % row_bytes) + ")");
  }
  const std::size_t n_rows = bytes.size() / row_bytes;
  const std::size_t n_elems = n_rows * format.raw_dims;
  std::vector<double> values(n_elems);
  if (format.width == ElementWidth::F32) {
    for (std::size_t i = 0; i < n_elems; ++i) {
      float v;
      std::memcpy(&v, bytes.data() + i * 4, 4);
      values[i] = static_cast<double>(v);
    }
  } else {
    std::memcpy(values.data(), bytes.data(), bytes.size());
  }
  return LatentMatrix(n_rows, format.raw_dims, std::move(values));
}

void save_raw(const LatentMatrix& matrix, const std::filesystem::path& path,
              ElementWidth width) {
  std::string bytes;
  if (width == ElementWidth::F32) {
    bytes.reserve(matrix.values().size() * 4);
    for (const double v : matrix.values()) {
      const float f = static_cast<float>(v);
      bytes.append(reinterpret_cast<const char*>(&f), 4);
    }
  } else {
    bytes.assign(reinterpret_cast<const char*>(matrix.data()), matrix.values().size() * 8);
  }
  write_file(path, bytes);
}

// --- csv ---------------------------------------------------------------------

bool parse_number(const std::string& token, double& out) {
  const char* begin = token.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end == ' ' || *end == '\t') ++end;
  return *end == '\0';
}

std::string trim(std::string s) {
  const auto notspace = [](unsigned char c) { return c != ' ' && c != '\t' && c != '\r'; };
  while (!s.empty() && !notspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && !notspace(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

LatentMatrix load_csv(const std::filesystem::path& path) {
  std::string text = read_file(path);
  // Strip a UTF-8 BOM if present.
  if (text.size() >= 3 && text.compare(0, 3, "\xef\xbb\xbf") == 0) text = text.substr(3);

  std::vector<double> values;
  std::size_t n_dims = 0;
  std::size_t n_rows = 0;
  std::size_t line_no = 0;
  bool first_content_line = true;

  std::stringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;

    std::vector<std::string> tokens;
    std::stringstream fields(line);
    std::string token;
    while (std::getline(fields, token, ',')) tokens.push_back(trim(token));

    if (first_content_line) {
      first_content_line = false;
      double probe;
      if (!parse_number(tokens.front(), probe)) continue;  // header row, skip it
    }

    if (n_dims == 0) {
      n_dims = tokens.size();
    } else if (tokens.size() != n_dims) {
      throw ValidationError("csv file " + path.string() + " line " + std::to_string(line_no) +
                            " has " + std::to_string(tokens.size()) + " fields, expected " +
                            std::to_string(n_dims));
    }
    for (const auto& field : tokens) {
      double v;
      if (!parse_number(field, v)) {
        throw FormatError("csv file " + path.string() + " line " + std::to_string(line_no) +
                          " has a non-numeric field: '" + field + "'");
      }
      values.push_back(v);
    }
    ++n_rows;
  }
  if (n_rows == 0) {
    throw FormatError("csv file " + path.string() + " contains no data rows");
  }
  return LatentMatrix(n_rows, n_dims, std::move(values));
}

void save_csv(const LatentMatrix& matrix, const std::filesystem::path& path,
              ElementWidth width) {
  std::string out;
  char buf[40];
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    for (std::size_t c = 0; c < matrix.dims(); ++c) {
      if (c) out.push_back(',');
      if (width == ElementWidth::F32) {
        std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(static_cast<float>(matrix.at(r, c))));
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", matrix.at(r, c));
      }
      out += buf;
    }
    out.push_back('\n');
  }
  write_file(path, out);
}

}  // namespace

FormatKind parse_format_kind(const std::string& name) {
  if (name == "npy") return FormatKind::Npy;
  if (name == "raw") return FormatKind::RawBinary;
  if (name == "csv") return FormatKind::Csv;
  throw ConfigError("unknown embedding format '" + name + "' (expected npy, raw or csv)");
}

LatentMatrix load_embeddings(const std::filesystem::path& path, const EmbeddingFormat& format) {
  switch (format.kind) {
    case FormatKind::Npy:
      return load_npy(path);
    case FormatKind::RawBinary:
      return load_raw(path, format);
    case FormatKind::Csv:
      return load_csv(path);
  }
  throw ConfigError("unhandled embedding format");
}

void save_embeddings(const LatentMatrix& matrix, const std::filesystem::path& path,
                     const EmbeddingFormat& format) {
  switch (format.kind) {
    case FormatKind::Npy:
      save_npy(matrix, path, format.width);
      return;
    case FormatKind::RawBinary:
      save_raw(matrix, path, format.width);
      return;
    case FormatKind::Csv:
      save_csv(matrix, path, format.width);
      return;
  }
  throw ConfigError("unhandled embedding format");
}

}  // namespace latentscope
