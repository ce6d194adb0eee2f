#pragma once

#include <filesystem>
#include <iosfwd>

#include "entqp/state_model.hpp"

namespace entqp::state_model {

enum class MatrixFormat { csv, json };

// CSV: first line `dim,<d>`, then d rows of d comma-separated decimals.
// JSON: {"dim": d, "entries": [[...], ...], "meta": {...}} with "meta" optional.
// Decimals are written with 17 significant digits, so load(save(x)) restores
// the entry array bitwise. Loading validates symmetry (tolerance 1e-12),
// diagonal sign, and trace; states without recorded provenance get
// source = file.
CoefficientMatrix<double> load_matrix(std::istream& in, MatrixFormat format);
CoefficientMatrix<double> load_matrix(const std::filesystem::path& path);

void save_matrix(const CoefficientMatrix<double>& state, std::ostream& out, MatrixFormat format);
void save_matrix(const CoefficientMatrix<double>& state, const std::filesystem::path& path);

// .json selects JSON, anything else CSV.
MatrixFormat format_from_path(const std::filesystem::path& path);

} // namespace entqp::state_model
