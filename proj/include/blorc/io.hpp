#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "blorc/data.hpp"
#include "blorc/linalg.hpp"

namespace blorc::io {

// CSV: one matrix row per line, comma separated, '.' decimal point, no header.
// Values are written with 17 significant digits so they round-trip exactly.
void write_csv(const std::filesystem::path& path, const Matrix& m);
Matrix read_csv(const std::filesystem::path& path);
Matrix parse_csv(const std::string& text);
std::string format_csv(const Matrix& m);

// Vectors are stored as a single column; reading accepts a single row too.
void write_vector_csv(const std::filesystem::path& path, const Vector& v);
Vector read_vector_csv(const std::filesystem::path& path);

// PGM (P2 plain or P5 binary), maxval <= 255, pixels mapped to [0, 1].
// Parse failures raise ParseError carrying the byte offset.
Matrix parse_pgm(const std::string& bytes);
Matrix load_pgm(const std::filesystem::path& path);
// Writes binary P5 with maxval 255; values are clamped to [0, 1] and rounded.
void save_pgm(const std::filesystem::path& path, const Matrix& image);
std::string format_pgm(const Matrix& image);

// Dataset directory: index.txt lists one id per line; each id has
// <id>_clean.csv and <id>_noisy.csv (single-column vectors).
void write_dataset(const std::filesystem::path& dir, const std::vector<TrainingPair>& pairs,
                   const std::string& id_prefix = "pair");
std::vector<TrainingPair> read_dataset(const std::filesystem::path& dir);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace blorc::io
