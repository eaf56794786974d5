#include "fairpack/mtx_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairpack/errors.hpp"

namespace fairpack {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void parse_fail(const std::string& why, std::size_t line) {
  throw Error(ErrorCode::ParseError,
              "matrix market, line " + std::to_string(line) + ": " + why);
}

}  // namespace

SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) parse_fail("empty input", 0);
  ++lineno;
  {
    std::istringstream hs(line);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix" ||
        lower(format) != "coordinate" || lower(field) != "real" ||
        lower(symmetry) != "general") {
      parse_fail("expected '%%MatrixMarket matrix coordinate real general'",
                 lineno);
    }
  }

  // skip comments and blank lines up to the size line
  long long m = -1, n = -1, nnz = -1;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    std::istringstream ss(line);
    std::string extra;
    if (!(ss >> m >> n >> nnz) || (ss >> extra)) {
      parse_fail("bad size line", lineno);
    }
    break;
  }
  if (m < 0) parse_fail("missing size line", lineno);
  if (m < 1 || n < 1 || nnz < 0) parse_fail("non-positive dimensions", lineno);

  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(nnz));
  while (static_cast<long long>(t.size()) < nnz && std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    std::istringstream ss(line);
    long long i = 0, j = 0;
    double v = 0.0;
    std::string extra;
    if (!(ss >> i >> j >> v) || (ss >> extra)) parse_fail("bad entry", lineno);
    if (i < 1 || i > m || j < 1 || j > n) {
      parse_fail("index out of range", lineno);
    }
    if (v < 0.0) {
      throw Error(ErrorCode::NegativeEntry,
                  "negative entry at (" + std::to_string(i) + ", " +
                      std::to_string(j) + ")");
    }
    t.push_back({static_cast<std::size_t>(i - 1),
                 static_cast<std::size_t>(j - 1), v});
  }
  if (static_cast<long long>(t.size()) != nnz) {
    parse_fail("expected " + std::to_string(nnz) + " entries, found " +
                   std::to_string(t.size()),
               lineno);
  }
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first != std::string::npos && line[first] != '%') {
      parse_fail("trailing data after the declared entries", lineno);
    }
  }
  try {
    return SparseMatrix::from_triplets(static_cast<std::size_t>(m),
                                       static_cast<std::size_t>(n),
                                       std::move(t));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BadParam) {
      throw Error(ErrorCode::ParseError, e.what());
    }
    throw;
  }
}

void write_matrix_market(std::ostream& out, const SparseMatrix& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  char buf[64];
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (const auto& e : a.row(i)) {
      std::snprintf(buf, sizeof buf, "%zu %zu %.17g\n", i + 1, e.index + 1,
                    e.value);
      out << buf;
    }
  }
}

std::filesystem::path sidecar_path(const std::filesystem::path& mtx) {
  auto p = mtx;
  p.replace_extension(".json");
  return p;
}

ProblemInstance load_instance(const std::filesystem::path& mtx) {
  std::ifstream in(mtx);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + mtx.string());
  SparseMatrix raw = read_matrix_market(in);

  std::vector<double> prior;
  auto side = sidecar_path(mtx);
  if (side != mtx && std::filesystem::exists(side)) {
    std::ifstream sin(side);
    nlohmann::json j;
    try {
      sin >> j;
      prior = j.at("col_scale").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError,
                  "sidecar " + side.string() + ": " + e.what());
    }
    if (prior.size() != raw.cols()) {
      throw Error(ErrorCode::ParseError,
                  "sidecar col_scale length does not match the matrix");
    }
    for (double s : prior) {
      if (!(s > 0.0)) {
        throw Error(ErrorCode::ParseError, "sidecar col_scale must be positive");
      }
    }
  }
  return normalize_columns(raw, prior);
}

void save_instance(const std::filesystem::path& mtx,
                   const ProblemInstance& inst) {
  {
    std::ofstream out(mtx, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + mtx.string());
    write_matrix_market(out, inst.matrix());
  }
  nlohmann::json j;
  j["m"] = inst.rows();
  j["n"] = inst.cols();
  j["nnz"] = inst.nnz();
  j["width"] = inst.width();
  j["col_scale"] = std::vector<double>(inst.col_scale().begin(),
                                       inst.col_scale().end());
  j["objective_offset"] = inst.objective_offset();
  std::ofstream out(sidecar_path(mtx), std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write sidecar");
  out << j.dump(2) << '\n';
}

}  // namespace fairpack
