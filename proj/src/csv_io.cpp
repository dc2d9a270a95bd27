#include "vkm/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <memory>
#include <tuple>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

namespace vkm::io {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        cur += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class CsvReader {
 public:
  explicit CsvReader(const std::filesystem::path& path) : path_(path), in_(path) {
    if (!in_) throw IoError("file not found: " + path.string());
  }

  // Next non-empty row; false at end of file.
  bool next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (trim(line).empty()) continue;
      fields = split_row(line);
      return true;
    }
    return false;
  }

  [[nodiscard]] std::size_t line() const noexcept { return line_no_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw IoError(path_.string() + ":" + std::to_string(line_no_) + ": " + what, line_no_);
  }

  double number(const std::string& field, const char* name) const {
    double v = 0.0;
    const char* b = field.data();
    const char* e = b + field.size();
    if (!field.empty() && *b == '+') ++b;
    const auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e || field.empty()) fail(std::string("invalid number in column '") + name + "': '" + field + "'");
    return v;
  }

  Index integer(const std::string& field, const char* name) const {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty() || v < 0) {
      fail(std::string("invalid index in column '") + name + "': '" + field + "'");
    }
    return static_cast<Index>(v);
  }

  void expect_header(const std::vector<std::string>& expected) {
    std::vector<std::string> h;
    if (!next(h)) fail("empty file, expected header");
    if (h != expected) {
      std::string want;
      for (const auto& c : expected) want += (want.empty() ? "" : ",") + c;
      fail("expected header '" + want + "'");
    }
  }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
};

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (v == 0.0) return "0";
  return fmt::format("{:.17g}", v);
}

AtomSpace read_atoms_csv(const std::filesystem::path& path) {
  CsvReader csv(path);
  std::vector<std::string> header;
  if (!csv.next(header)) csv.fail("empty file, expected header 'id,w,c1,...,cd'");
  if (header.size() < 2 || header[0] != "id" || header[1] != "w") {
    csv.fail("expected header 'id,w,c1,...,cd'");
  }
  const std::size_t d = header.size() - 2;

  std::vector<std::string> ids;
  std::vector<double> w;
  std::vector<double> coords;
  std::unordered_map<std::string, std::size_t> seen;
  std::vector<std::string> row;
  while (csv.next(row)) {
    if (row.size() != header.size()) {
      csv.fail("expected " + std::to_string(header.size()) + " fields, got " + std::to_string(row.size()));
    }
    if (row[0].empty()) csv.fail("empty atom id");
    if (!seen.emplace(row[0], csv.line()).second) csv.fail("duplicate atom id '" + row[0] + "'");
    const double weight = csv.number(row[1], "w");
    if (!(weight >= 0.0) || !std::isfinite(weight)) csv.fail("weight must be finite and >= 0");
    ids.push_back(row[0]);
    w.push_back(weight);
    for (std::size_t k = 0; k < d; ++k) coords.push_back(csv.number(row[2 + k], header[2 + k].c_str()));
  }
  const auto N = static_cast<Index>(ids.size());
  AtomSpace::CoordMatrix C(N, static_cast<Index>(d));
  for (Index i = 0; i < N; ++i)
    for (Index k = 0; k < static_cast<Index>(d); ++k) C(i, k) = coords[static_cast<std::size_t>(i) * d + static_cast<std::size_t>(k)];
  return AtomSpace(std::move(ids), std::move(C), Eigen::Map<RVector>(w.data(), N));
}

void write_atoms_csv(const AtomSpace& space, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "id,w";
  for (Index k = 0; k < space.dim(); ++k) out << ",c" << (k + 1);
  out << '\n';
  for (Index x = 0; x < space.size(); ++x) {
    out << quote_if_needed(space.id(x)) << ',' << format_double(space.weight(x));
    for (Index k = 0; k < space.dim(); ++k) out << ',' << format_double(space.coords()(x, k));
    out << '\n';
  }
}

PrecomputedTable read_precomputed_csv(const std::filesystem::path& path) {
  CsvReader csv(path);
  csv.expect_header({"x_id", "t_id", "l", "j", "re", "im"});

  struct Entry {
    Index l, j;
    cplx v;
  };
  std::map<std::pair<std::string, std::string>, std::vector<Entry>> raw;
  std::map<std::tuple<std::string, std::string, Index, Index>, std::size_t> seen;
  Index n = 0;
  std::vector<std::string> row;
  while (csv.next(row)) {
    if (row.size() != 6) csv.fail("expected 6 fields, got " + std::to_string(row.size()));
    const Index l = csv.integer(row[2], "l");
    const Index j = csv.integer(row[3], "j");
    const cplx v(csv.number(row[4], "re"), csv.number(row[5], "im"));
    if (!seen.emplace(std::make_tuple(row[0], row[1], l, j), csv.line()).second) {
      csv.fail("duplicate entry (" + row[0] + ", " + row[1] + ", " + row[2] + ", " + row[3] + ")");
    }
    n = std::max(n, std::max(l, j) + 1);
    raw[{row[0], row[1]}].push_back({l, j, v});
  }
  if (raw.empty()) csv.fail("no entries");

  PrecomputedTable table;
  table.n = n;
  using Mask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;
  std::map<std::pair<std::string, std::string>, Mask> present;
  for (const auto& [key, entries] : raw) {
    CMatrix block = CMatrix::Zero(n, n);
    Mask mask = Mask::Constant(n, n, false);
    for (const auto& e : entries) {
      block(e.l, e.j) = e.v;
      mask(e.l, e.j) = true;
    }
    table.blocks[key] = block;
    present[key] = mask;
  }
  // Fill missing entries from the mirrored block K(t,x) = K(x,t)^*.
  for (auto& [key, block] : table.blocks) {
    const std::pair<std::string, std::string> mirror{key.second, key.first};
    auto& mask = present[key];
    for (Index l = 0; l < n; ++l) {
      for (Index j = 0; j < n; ++j) {
        if (mask(l, j)) continue;
        const auto m = present.find(mirror);
        if (m != present.end() && m->second(j, l)) {
          block(l, j) = std::conj(table.blocks.at(mirror)(j, l));
        } else {
          throw IoError(path.string() + ": missing entry (" + key.first + ", " + key.second + ", " +
                        std::to_string(l) + ", " + std::to_string(j) + ") and its mirror");
        }
      }
    }
  }
  std::vector<std::pair<std::pair<std::string, std::string>, CMatrix>> mirrored;
  for (const auto& [key, block] : table.blocks) {
    const std::pair<std::string, std::string> mirror{key.second, key.first};
    if (table.blocks.find(mirror) == table.blocks.end()) mirrored.emplace_back(mirror, block.adjoint());
  }
  for (auto& [key, block] : mirrored) table.blocks.emplace(key, std::move(block));
  return table;
}

MatrixKernel table_kernel(PrecomputedTable table, std::string name) {
  const Index n = table.n;
  auto shared = std::make_shared<const PrecomputedTable>(std::move(table));
  return MatrixKernel(
      n,
      [shared](const AtomRef& x, const AtomRef& t) -> CMatrix {
        const auto it = shared->blocks.find({std::string(x.id), std::string(t.id)});
        if (it == shared->blocks.end()) throw KernelError("pair outside the precomputed table");
        return it->second;
      },
      std::move(name));
}

void write_precomputed_csv(const MatrixKernel& kernel, const AtomSpace& space,
                           const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "x_id,t_id,l,j,re,im\n";
  for (Index x = 0; x < space.size(); ++x) {
    for (Index t = x; t < space.size(); ++t) {
      const CMatrix k = kernel.eval(space, x, t);
      for (Index l = 0; l < k.rows(); ++l)
        for (Index j = 0; j < k.cols(); ++j)
          out << quote_if_needed(space.id(x)) << ',' << quote_if_needed(space.id(t)) << ',' << l << ','
              << j << ',' << format_double(k(l, j).real()) << ',' << format_double(k(l, j).imag()) << '\n';
    }
  }
}

void write_spectrum_csv(const SpectralDecomposition& dec, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "i,sigma\n";
  for (Index i = 0; i < dec.rank(); ++i) out << i << ',' << format_double(dec.sigmas(i)) << '\n';
}

void write_eigenfunctions_csv(const SpectralDecomposition& dec, const AtomSpace& space,
                              const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "i,atom_id,j,re,im\n";
  for (Index i = 0; i < dec.rank(); ++i)
    for (Index x = 0; x < space.size(); ++x)
      for (Index j = 0; j < dec.n; ++j) {
        const cplx v = dec.value(i, x, j);
        out << i << ',' << quote_if_needed(space.id(x)) << ',' << j << ',' << format_double(v.real()) << ','
            << format_double(v.imag()) << '\n';
      }
}

void write_error_table_csv(const ErrorTable& table, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "m,max_abs_error\n";
  for (std::size_t k = 0; k < table.m.size(); ++k)
    out << table.m[k] << ',' << format_double(table.max_abs_error[k]) << '\n';
}

void write_frame_csv(const LabeledFrame& frame, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "i,atom_id,value_re,value_im\n";
  for (Index i = 0; i < frame.values.cols(); ++i)
    for (std::size_t x = 0; x < frame.atom_ids.size(); ++x) {
      const cplx v = frame.values(static_cast<Index>(x), i);
      out << i << ',' << quote_if_needed(frame.atom_ids[x]) << ',' << format_double(v.real()) << ','
          << format_double(v.imag()) << '\n';
    }
}

LabeledFrame read_frame_csv(const std::filesystem::path& path) {
  CsvReader csv(path);
  csv.expect_header({"i", "atom_id", "value_re", "value_im"});
  struct Entry {
    Index i;
    std::size_t atom;
    cplx v;
  };
  LabeledFrame frame;
  std::unordered_map<std::string, std::size_t> atom_of;
  std::vector<Entry> entries;
  std::map<std::pair<Index, std::size_t>, std::size_t> seen;
  Index width = 0;
  std::vector<std::string> row;
  while (csv.next(row)) {
    if (row.size() != 4) csv.fail("expected 4 fields, got " + std::to_string(row.size()));
    const Index i = csv.integer(row[0], "i");
    auto [it, inserted] = atom_of.emplace(row[1], frame.atom_ids.size());
    if (inserted) frame.atom_ids.push_back(row[1]);
    if (!seen.emplace(std::make_pair(i, it->second), csv.line()).second) {
      csv.fail("duplicate entry (" + row[0] + ", " + row[1] + ")");
    }
    entries.push_back({i, it->second, cplx(csv.number(row[2], "value_re"), csv.number(row[3], "value_im"))});
    width = std::max(width, i + 1);
  }
  frame.values = CMatrix::Zero(static_cast<Index>(frame.atom_ids.size()), width);
  for (const auto& e : entries) frame.values(static_cast<Index>(e.atom), e.i) = e.v;
  return frame;
}

void write_metric_csv(const AtomSpace& space, const PseudoMetricMatrix& d, const PseudoMetricMatrix& d_prime,
                      const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "x_id,t_id,d,d_prime\n";
  for (Index x = 0; x < space.size(); ++x)
    for (Index t = 0; t < space.size(); ++t)
      out << quote_if_needed(space.id(x)) << ',' << quote_if_needed(space.id(t)) << ',' << format_double(d(x, t))
          << ',' << format_double(d_prime(x, t)) << '\n';
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out) throw IoError("cannot write " + path.string());
}

}  // namespace vkm::io
