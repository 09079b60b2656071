#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vc/field.hpp"
#include "vc/mle.hpp"

namespace vc {

// Raised for unreadable or ill-formed input files and arguments.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);
void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

// Whitespace-separated integers; a leading '-' encodes the field negative. '#' starts a comment.
std::vector<Fe> parse_elements(const std::string& text);
std::vector<Fe> read_sequence_file(const std::filesystem::path& path);
void write_sequence_file(const std::filesystem::path& path, std::span<const Fe> values);

struct Matrix {
  std::size_t n = 0;       // dimension after padding, a power of two
  std::size_t rows = 0;    // dimension before padding
  std::vector<Fe> entries;  // row-major, n * n
  std::uint64_t max_abs_entry = 0;
};

// One row per line, all rows the same length as the number of rows. Zero-padded to the
// next power of two.
Matrix read_matrix_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path, std::span<const Fe> entries, std::size_t n);
// Zero-pads a square matrix of dimension `rows` to dimension n.
std::vector<Fe> pad_matrix(std::span<const Fe> entries, std::size_t rows, std::size_t n);

// Binary stream file: 16-byte records (index u64 LE, delta i64 LE).
std::vector<StreamUpdate> read_stream_file(const std::filesystem::path& path);
void write_stream_file(const std::filesystem::path& path, std::span<const StreamUpdate> updates);

// One record per line, each with the same number of integer fields.
std::vector<std::vector<Fe>> read_records_file(const std::filesystem::path& path);

std::uint64_t next_power_of_two(std::uint64_t n);

}  // namespace vc
