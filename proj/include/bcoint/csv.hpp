#pragma once

#include <string>

#include "bcoint/core.hpp"

namespace bcoint::csv {

/// Load a dataset from a headered CSV file. A leading timestamp column is
/// detected (non-numeric data cells in the first column only) and dropped.
/// Throws ParseError with line/column on malformed cells and
/// MissingDataError on NA/empty/non-finite cells.
Dataset load_csv(const std::string& path);

/// Serialise with 17 significant digits so values round-trip bit-exactly.
std::string dataset_to_csv(const Dataset& data);

/// Write content to `path` via a temporary file and rename, so readers never
/// observe a partial file.
void atomic_write(const std::string& path, const std::string& content);

std::string format_double(double value);  ///< %.17g

}  // namespace bcoint::csv
