#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "lavanet/errors.hpp"
#include "lavanet/sparse.hpp"

namespace lavanet {

namespace {

template <typename T>
void writeLine(std::ostream& out, std::span<const T> items) {
  char buffer[64];
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k > 0) out.put(' ');
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, items[k]);
    out.write(buffer, end - buffer);
  }
  out.put('\n');
}

template <typename T>
std::vector<T> parseLine(const std::string& line, std::size_t expected, const char* what) {
  std::vector<T> items;
  items.reserve(expected);
  const char* p = line.data();
  const char* end = line.data() + line.size();
  while (true) {
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
    if (p == end) break;
    T value{};
    auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc{}) {
      throw CsrFormatError(std::string("malformed number in ") + what + " line");
    }
    items.push_back(value);
    p = next;
  }
  if (items.size() != expected) {
    throw CsrFormatError(std::string(what) + ": expected " + std::to_string(expected) +
                         " entries, found " + std::to_string(items.size()));
  }
  return items;
}

}  // namespace

void writeCsr(std::ostream& out, const SparseMatrix& m) {
  out << "csr " << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  writeLine(out, m.rowPointers());
  writeLine(out, m.columnIndices());
  writeLine(out, m.values());
}

SparseMatrix readCsr(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw CsrFormatError("missing csr header");
  std::istringstream hs(header);
  std::string tag;
  std::size_t rows = 0, cols = 0, nnz = 0;
  if (!(hs >> tag >> rows >> cols >> nnz) || tag != "csr") {
    throw CsrFormatError("header must read 'csr <rows> <cols> <nnz>'");
  }
  std::string rp, ci, vs;
  if (!std::getline(in, rp) || !std::getline(in, ci) || !std::getline(in, vs)) {
    throw CsrFormatError("truncated csr body");
  }
  auto rowPointers = parseLine<Index>(rp, rows + 1, "rowPointers");
  auto columnIndices = parseLine<Index>(ci, nnz, "columnIndices");
  auto values = parseLine<double>(vs, nnz, "values");
  return SparseMatrix::fromCsr(rows, cols, std::move(rowPointers), std::move(columnIndices),
                               std::move(values));
}

void saveCsr(const std::string& path, const SparseMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  writeCsr(out, m);
  if (!out) throw Error("failed writing '" + path + "'");
}

SparseMatrix loadCsr(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return readCsr(in);
}

}  // namespace lavanet
