#include "dgum/io.hpp"

#include <bit>
#include <cstring>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dgum::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t out = 0;
  for (int i = 0; i < 8; ++i) out |= ((v >> (8 * i)) & 0xffU) << (8 * (7 - i));
  return out;
}

Index parse_field(const std::string& token, const std::string& key) {
  const std::string prefix = key + "=";
  if (token.rfind(prefix, 0) != 0) throw std::runtime_error("expected " + prefix + " in header");
  return std::stoll(token.substr(prefix.size()));
}

std::uint8_t gray_level(std::int32_t omega, std::int32_t omega_max) {
  return static_cast<std::uint8_t>((255LL * omega) / omega_max);
}

}  // namespace

void write_field_stack(const std::filesystem::path& path, const RealFieldStack& stack) {
  if (stack.empty()) throw std::invalid_argument("empty field stack");
  const Index h = stack.front().rows();
  const Index w = stack.front().cols();
  auto out = open_out(path);
  out << "DGUM-FIELD 1 height=" << h << " width=" << w << " components=" << stack.size()
      << " kind=float64-le\n";
  for (const auto& f : stack) {
    if (f.rows() != h || f.cols() != w) throw std::invalid_argument("stack shapes differ");
    for (Index s = 0; s < f.size(); ++s) {
      const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(f.data()[s]));
      char bytes[8];
      std::memcpy(bytes, &bits, 8);
      out.write(bytes, 8);
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

RealFieldStack read_field_stack(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  std::getline(in, line);
  std::istringstream header(line);
  std::string magic, version, th, tw, tc, tk;
  header >> magic >> version >> th >> tw >> tc >> tk;
  if (magic != "DGUM-FIELD" || version != "1" || tk != "kind=float64-le") {
    throw std::runtime_error(path.string() + ": not a DGUM-FIELD v1 float64 file");
  }
  const Index h = parse_field(th, "height");
  const Index w = parse_field(tw, "width");
  const Index c = parse_field(tc, "components");
  const GridShape shape(h, w);

  RealFieldStack stack(c, RealField(h, w));
  for (auto& f : stack) {
    for (Index s = 0; s < shape.size(); ++s) {
      char bytes[8];
      if (!in.read(bytes, 8)) throw std::runtime_error(path.string() + ": truncated payload");
      std::uint64_t bits;
      std::memcpy(&bits, bytes, 8);
      f.data()[s] = std::bit_cast<double>(to_little_endian(bits));
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw std::runtime_error(path.string() + ": trailing bytes after payload");
  }
  return stack;
}

std::filesystem::path classes_sidecar(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".classes");
}

void write_label_pgm(const std::filesystem::path& path, const LabelField& labels,
                     const ClassSet& classes) {
  const std::int32_t omega_max = classes[classes.size() - 1];
  {
    auto out = open_out(path);
    out << "P5\n" << labels.cols() << " " << labels.rows() << "\n255\n";
    std::vector<char> bytes(labels.size());
    for (Index s = 0; s < labels.size(); ++s) {
      const std::int32_t omega = labels.data()[s];
      if (classes.index_of(omega) < 0) {
        throw std::invalid_argument("label " + std::to_string(omega) + " not in class set");
      }
      bytes[s] = static_cast<char>(gray_level(omega, omega_max));
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
  }
  auto side = open_out(classes_sidecar(path));
  side << "height=" << labels.rows() << "\nwidth=" << labels.cols() << "\nclasses=";
  for (int k = 0; k < classes.size(); ++k) side << (k ? " " : "") << classes[k];
  side << "\n";
}

LabelField read_label_pgm(const std::filesystem::path& path, ClassSet* classes_out) {
  auto side = open_in(classes_sidecar(path));
  std::vector<std::int32_t> omegas;
  std::string line;
  while (std::getline(side, line)) {
    if (line.rfind("classes=", 0) == 0) {
      std::istringstream values(line.substr(8));
      for (std::int32_t v; values >> v;) omegas.push_back(v);
    }
  }
  const ClassSet classes(omegas);

  auto in = open_in(path);
  std::string magic;
  Index w = 0, h = 0;
  int maxval = 0;
  in >> magic >> w >> h >> maxval;
  in.get();
  if (magic != "P5" || maxval != 255) throw std::runtime_error(path.string() + ": not 8-bit P5");

  std::vector<int> lookup(256, -1);
  const std::int32_t omega_max = classes[classes.size() - 1];
  for (int k = 0; k < classes.size(); ++k) {
    const int level = gray_level(classes[k], omega_max);
    if (lookup[level] >= 0) {
      throw std::runtime_error("class set is not representable in 8-bit gray levels");
    }
    lookup[level] = k;
  }

  LabelField labels(h, w);
  std::vector<char> bytes(labels.size());
  if (!in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()))) {
    throw std::runtime_error(path.string() + ": truncated payload");
  }
  for (Index s = 0; s < labels.size(); ++s) {
    const int k = lookup[static_cast<std::uint8_t>(bytes[s])];
    if (k < 0) throw std::runtime_error(path.string() + ": gray level without class");
    labels.data()[s] = classes[k];
  }
  if (classes_out) *classes_out = classes;
  return labels;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header)
    : out_(open_out(path)) {
  out_ << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& h : header) *this << h;
  end_row();
}

void CsvWriter::separator() {
  if (row_started_) out_ << ',';
  row_started_ = true;
}

CsvWriter& CsvWriter::operator<<(double value) {
  separator();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::operator<<(long long value) {
  separator();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& value) {
  separator();
  out_ << value;
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  row_started_ = false;
  if (!out_) throw std::runtime_error("CSV write failed");
}

}  // namespace dgum::io
