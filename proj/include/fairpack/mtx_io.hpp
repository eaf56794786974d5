#pragma once

#include <filesystem>
#include <iosfwd>

#include "fairpack/instance.hpp"
#include "fairpack/sparse.hpp"

namespace fairpack {

// "%%MatrixMarket matrix coordinate real general", 1-based indices.
// Duplicates are summed and explicit zeros dropped. Throws Error(ParseError).
SparseMatrix read_matrix_market(std::istream& in);
void write_matrix_market(std::ostream& out, const SparseMatrix& a);

// Sidecar path for an instance file: same stem, ".json" extension.
std::filesystem::path sidecar_path(const std::filesystem::path& mtx);

// Reads and normalizes. When a sidecar exists its col_scale is composed with
// the freshly computed one, so a saved instance loads back identical.
ProblemInstance load_instance(const std::filesystem::path& mtx);
// Writes the normalized matrix plus the sidecar
// {m, n, nnz, width, col_scale, objective_offset}.
void save_instance(const std::filesystem::path& mtx, const ProblemInstance& inst);

}  // namespace fairpack
