#pragma once

#include <filesystem>
#include <string>

#include "hyperfact/types.hpp"

namespace hyperfact {

// Matrix files are versioned JSON documents:
//   { "format": 1, "rows": R, "cols": C, "data": [[re, im], ...] }
// with row-major data of length R*C and decimal floating literals that
// round-trip exactly.
inline constexpr int kMatrixFileFormat = 1;

CMatrix read_matrix_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path, const CMatrix& m);

std::string matrix_to_text(const CMatrix& m);
CMatrix matrix_from_text(const std::string& text, const std::string& origin);

// FNV-1a 64-bit content digest, hex-encoded; used in report headers.
std::string file_digest(const std::filesystem::path& path);

}  // namespace hyperfact
