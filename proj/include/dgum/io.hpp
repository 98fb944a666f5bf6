#ifndef DGUM_IO_HPP
#define DGUM_IO_HPP

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "dgum/gmrf.hpp"
#include "dgum/gum.hpp"

namespace dgum::io {

/// Real field stack file: one text header line
///   DGUM-FIELD 1 height=<H> width=<W> components=<C> kind=float64-le
/// followed by H*W*C little-endian IEEE doubles, row-major, components
/// concatenated.
void write_field_stack(const std::filesystem::path& path, const RealFieldStack& stack);
RealFieldStack read_field_stack(const std::filesystem::path& path);

/// Binary PGM (P5). Label omega is stored as floor(255 * omega / omega_max);
/// the exact class set goes to the sidecar `<path>.classes`.
void write_label_pgm(const std::filesystem::path& path, const LabelField& labels,
                     const ClassSet& classes);
LabelField read_label_pgm(const std::filesystem::path& path, ClassSet* classes = nullptr);

std::filesystem::path classes_sidecar(const std::filesystem::path& path);

/// Minimal CSV writer: header row first, numbers with round-trip precision.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header);

  CsvWriter& operator<<(double value);
  CsvWriter& operator<<(long long value);
  CsvWriter& operator<<(int value) { return *this << static_cast<long long>(value); }
  CsvWriter& operator<<(long value) { return *this << static_cast<long long>(value); }
  CsvWriter& operator<<(const std::string& value);
  void end_row();

 private:
  void separator();
  std::ofstream out_;
  bool row_started_ = false;
};

}  // namespace dgum::io

#endif  // DGUM_IO_HPP
