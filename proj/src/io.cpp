#include "blorc/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "blorc/errors.hpp"

namespace blorc::io {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << content;
  if (!out) throw InvalidInput("write failed for " + path.string());
}

std::string format_csv(const Matrix& m) {
  std::string out;
  char buf[32];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out += ',';
      const int len = std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
      out.append(buf, static_cast<std::size_t>(len));
    }
    out += '\n';
  }
  return out;
}

Matrix parse_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line(text.data() + pos, eol - pos);
    const std::size_t line_start = pos;
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    std::vector<double> row;
    std::size_t field = 0;
    while (true) {
      std::size_t comma = line.find(',', field);
      std::string_view tok = line.substr(field, comma == std::string_view::npos ? line.npos : comma - field);
      while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.remove_prefix(1);
      while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.remove_suffix(1);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v))
        throw ParseError("csv: bad number '" + std::string(tok) + "'", line_start + field);
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      field = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("csv: ragged row", line_start);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return Matrix(0, 0);
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  return m;
}

void write_csv(const fs::path& path, const Matrix& m) { write_file(path, format_csv(m)); }

Matrix read_csv(const fs::path& path) { return parse_csv(read_file(path)); }

void write_vector_csv(const fs::path& path, const Vector& v) { write_csv(path, Matrix(v)); }

Vector read_vector_csv(const fs::path& path) {
  const Matrix m = read_csv(path);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  throw InvalidInput(path.string() + " is not a vector");
}

namespace {

class PgmReader {
 public:
  explicit PgmReader(const std::string& bytes) : b_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < b_.size()) {
      if (b_[pos_] == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(b_[pos_]))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long read_int(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    long v = 0;
    auto [ptr, ec] = std::from_chars(b_.data() + pos_, b_.data() + b_.size(), v);
    if (ec != std::errc() || v < 0) throw ParseError(std::string("pgm: expected ") + what, start);
    pos_ = static_cast<std::size_t>(ptr - b_.data());
    return v;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }
  const std::string& bytes() const { return b_; }

 private:
  const std::string& b_;
  std::size_t pos_ = 0;
};

}  // namespace

Matrix parse_pgm(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
    throw ParseError("pgm: missing P2/P5 magic", 0);
  const bool binary = bytes[1] == '5';
  PgmReader rd(bytes);
  rd.advance(2);
  const long width = rd.read_int("width");
  const long height = rd.read_int("height");
  const std::size_t maxval_at = rd.pos();
  const long maxval = rd.read_int("maxval");
  if (width < 1 || height < 1) throw ParseError("pgm: empty image", maxval_at);
  if (maxval < 1 || maxval > 255) throw ParseError("pgm: maxval must be in 1..255", maxval_at);

  Matrix img(height, width);
  const double scale = 1.0 / static_cast<double>(maxval);
  if (binary) {
    if (rd.pos() >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[rd.pos()])))
      throw ParseError("pgm: expected whitespace before raster", rd.pos());
    rd.advance(1);
    const std::size_t need = static_cast<std::size_t>(width * height);
    if (bytes.size() - rd.pos() < need) throw ParseError("pgm: truncated raster", bytes.size());
    for (long r = 0; r < height; ++r)
      for (long c = 0; c < width; ++c) {
        const auto v = static_cast<unsigned char>(bytes[rd.pos() + static_cast<std::size_t>(r * width + c)]);
        if (v > maxval) throw ParseError("pgm: pixel exceeds maxval", rd.pos() + static_cast<std::size_t>(r * width + c));
        img(r, c) = v * scale;
      }
  } else {
    for (long r = 0; r < height; ++r)
      for (long c = 0; c < width; ++c) {
        const std::size_t at = rd.pos();
        const long v = rd.read_int("pixel value");
        if (v > maxval) throw ParseError("pgm: pixel exceeds maxval", at);
        img(r, c) = static_cast<double>(v) * scale;
      }
  }
  return img;
}

Matrix load_pgm(const fs::path& path) { return parse_pgm(read_file(path)); }

std::string format_pgm(const Matrix& image) {
  std::string out = "P5\n" + std::to_string(image.cols()) + " " + std::to_string(image.rows()) + "\n255\n";
  out.reserve(out.size() + static_cast<std::size_t>(image.size()));
  for (Eigen::Index r = 0; r < image.rows(); ++r)
    for (Eigen::Index c = 0; c < image.cols(); ++c) {
      const double v = std::clamp(image(r, c), 0.0, 1.0);
      out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
    }
  return out;
}

void save_pgm(const fs::path& path, const Matrix& image) { write_file(path, format_pgm(image)); }

void write_dataset(const fs::path& dir, const std::vector<TrainingPair>& pairs, const std::string& id_prefix) {
  fs::create_directories(dir);
  std::string index;
  const int width = std::max<int>(4, static_cast<int>(std::to_string(pairs.size()).size()));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    std::ostringstream id;
    id << id_prefix << std::setw(width) << std::setfill('0') << i;
    write_vector_csv(dir / (id.str() + "_clean.csv"), pairs[i].x_clean);
    write_vector_csv(dir / (id.str() + "_noisy.csv"), pairs[i].y_noisy);
    index += id.str() + "\n";
  }
  write_file(dir / "index.txt", index);
}

namespace {

// A pair member stored as CSV, or as a PGM image vectorized row-major.
Vector read_member(const fs::path& dir, const std::string& stem) {
  const fs::path csv = dir / (stem + ".csv");
  if (fs::exists(csv)) return read_vector_csv(csv);
  const Matrix img = load_pgm(dir / (stem + ".pgm"));
  Vector v(img.size());
  for (Eigen::Index r = 0; r < img.rows(); ++r) v.segment(r * img.cols(), img.cols()) = img.row(r).transpose();
  return v;
}

}  // namespace

std::vector<TrainingPair> read_dataset(const fs::path& dir) {
  std::istringstream index(read_file(dir / "index.txt"));
  std::vector<TrainingPair> pairs;
  std::string id;
  while (std::getline(index, id)) {
    if (!id.empty() && id.back() == '\r') id.pop_back();
    if (id.empty()) continue;
    pairs.push_back({read_member(dir, id + "_clean"), read_member(dir, id + "_noisy")});
  }
  validate_pairs(pairs);
  return pairs;
}

}  // namespace blorc::io
