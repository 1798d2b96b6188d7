#include "hyperfact/matrix_io.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hyperfact {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& message) {
  throw PreconditionError(origin + ": " + message);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw PreconditionError("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

CMatrix matrix_from_text(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    fail(origin, std::string("invalid JSON: ") + err.what());
  }
  if (!doc.is_object()) fail(origin, "top-level value must be an object");
  for (const char* field : {"format", "rows", "cols", "data"}) {
    if (!doc.contains(field)) fail(origin, std::string("missing field '") + field + "'");
  }
  if (!doc["format"].is_number_integer() || doc["format"].get<int>() != kMatrixFileFormat) {
    fail(origin, "field 'format' must be the integer " + std::to_string(kMatrixFileFormat));
  }
  if (!doc["rows"].is_number_integer() || !doc["cols"].is_number_integer()) {
    fail(origin, "fields 'rows' and 'cols' must be integers");
  }
  const auto rows = doc["rows"].get<std::int64_t>();
  const auto cols = doc["cols"].get<std::int64_t>();
  if (rows < 1 || cols < 1) fail(origin, "'rows' and 'cols' must be positive");
  const auto& data = doc["data"];
  if (!data.is_array() || data.size() != static_cast<std::size_t>(rows * cols)) {
    fail(origin, "'data' must be an array of rows*cols entries");
  }
  CMatrix out(rows, cols);
  for (std::size_t idx = 0; idx < data.size(); ++idx) {
    const auto& entry = data[idx];
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
        !entry[1].is_number()) {
      fail(origin, "data entry " + std::to_string(idx) + " must be a [re, im] pair");
    }
    const double re = entry[0].get<double>();
    const double im = entry[1].get<double>();
    out(static_cast<Index>(idx) / cols, static_cast<Index>(idx) % cols) = Complex(re, im);
  }
  if (!out.allFinite()) fail(origin, "matrix entries must be finite");
  return out;
}

CMatrix read_matrix_file(const std::filesystem::path& path) {
  return matrix_from_text(slurp(path), path.string());
}

std::string matrix_to_text(const CMatrix& m) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw PreconditionError("matrix_to_text: refusing to serialize an empty matrix");
  }
  ensure_finite(m, "matrix_to_text");
  json doc;
  doc["format"] = kMatrixFileFormat;
  doc["rows"] = m.rows();
  doc["cols"] = m.cols();
  json data = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      data.push_back({m(i, j).real(), m(i, j).imag()});
    }
  }
  doc["data"] = std::move(data);
  return doc.dump(2) + "\n";
}

void write_matrix_file(const std::filesystem::path& path, const CMatrix& m) {
  const std::string text = matrix_to_text(m);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw PreconditionError("cannot open '" + path.string() + "' for writing");
  }
  out << text;
  if (!out) {
    throw PreconditionError("failed while writing '" + path.string() + "'");
  }
}

std::string file_digest(const std::filesystem::path& path) {
  const std::string bytes = slurp(path);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char b : bytes) {
    hash ^= b;
    hash *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
  return std::string(buffer);
}

}  // namespace hyperfact
