#include "vc/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>

namespace vc {

namespace {

struct Token {
  Fe value;
  std::uint64_t magnitude = 0;
};

Token parse_token(std::string_view tok) {
  const bool negative = !tok.empty() && tok.front() == '-';
  if (negative) tok.remove_prefix(1);
  std::uint64_t mag = 0;
  auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), mag);
  if (ec != std::errc() || end != tok.data() + tok.size() || tok.empty())
    throw InputError("not an integer: '" + std::string(tok) + "'");
  Fe v(mag);
  return {negative ? -v : v, mag};
}

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

std::vector<Token> parse_line(const std::string& line) {
  std::istringstream ss(strip_comment(line));
  std::vector<Token> out;
  std::string tok;
  while (ss >> tok) out.push_back(parse_token(tok));
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

std::vector<std::vector<Token>> parse_rows(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  std::vector<std::vector<Token>> rows;
  std::string line;
  while (std::getline(in, line)) {
    auto row = parse_line(line);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::uint64_t next_power_of_two(std::uint64_t n) {
  std::uint64_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  auto out = open_out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::vector<Fe> parse_elements(const std::string& text) {
  std::istringstream in(text);
  std::vector<Fe> out;
  std::string line;
  while (std::getline(in, line))
    for (const auto& t : parse_line(line)) out.push_back(t.value);
  return out;
}

std::vector<Fe> read_sequence_file(const std::filesystem::path& path) { return parse_elements(read_text(path)); }

void write_sequence_file(const std::filesystem::path& path, std::span<const Fe> values) {
  auto out = open_out(path);
  for (Fe v : values) out << v.value() << '\n';
}

Matrix read_matrix_file(const std::filesystem::path& path) {
  auto rows = parse_rows(path);
  if (rows.empty()) throw InputError(path.string() + ": empty matrix");
  Matrix m;
  m.rows = rows.size();
  m.n = next_power_of_two(m.rows);
  m.entries.assign(m.n * m.n, Fe());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.rows)
      throw InputError(path.string() + ": row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                       " entries, expected " + std::to_string(m.rows));
    for (std::size_t j = 0; j < m.rows; ++j) {
      m.entries[i * m.n + j] = rows[i][j].value;
      m.max_abs_entry = std::max(m.max_abs_entry, rows[i][j].magnitude);
    }
  }
  return m;
}

void write_matrix_file(const std::filesystem::path& path, std::span<const Fe> entries, std::size_t n) {
  if (entries.size() != n * n) throw InputError("matrix size mismatch");
  auto out = open_out(path);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out << (j ? " " : "") << decode_signed(entries[i * n + j]);
    out << '\n';
  }
}

std::vector<Fe> pad_matrix(std::span<const Fe> entries, std::size_t rows, std::size_t n) {
  if (entries.size() != rows * rows || n < rows) throw InputError("matrix size mismatch");
  std::vector<Fe> out(n * n);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < rows; ++j) out[i * n + j] = entries[i * rows + j];
  return out;
}

std::vector<StreamUpdate> read_stream_file(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  if (bytes.size() % 16 != 0) throw InputError(path.string() + ": stream file size is not a multiple of 16");
  std::vector<StreamUpdate> out(bytes.size() / 16);
  for (std::size_t r = 0; r < out.size(); ++r) {
    std::uint64_t idx = 0, delta = 0;
    for (int b = 0; b < 8; ++b) {
      idx |= static_cast<std::uint64_t>(bytes[16 * r + b]) << (8 * b);
      delta |= static_cast<std::uint64_t>(bytes[16 * r + 8 + b]) << (8 * b);
    }
    out[r] = {idx, static_cast<std::int64_t>(delta)};
  }
  return out;
}

void write_stream_file(const std::filesystem::path& path, std::span<const StreamUpdate> updates) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(16 * updates.size());
  for (const auto& u : updates) {
    const auto delta = static_cast<std::uint64_t>(u.delta);
    for (int b = 0; b < 8; ++b) bytes.push_back(static_cast<std::uint8_t>(u.index >> (8 * b)));
    for (int b = 0; b < 8; ++b) bytes.push_back(static_cast<std::uint8_t>(delta >> (8 * b)));
  }
  write_bytes(path, bytes);
}

std::vector<std::vector<Fe>> read_records_file(const std::filesystem::path& path) {
  auto rows = parse_rows(path);
  std::vector<std::vector<Fe>> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size())
      throw InputError(path.string() + ": record " + std::to_string(i) + " has a different field count");
    std::vector<Fe> rec;
    for (const auto& t : rows[i]) rec.push_back(t.value);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace vc
