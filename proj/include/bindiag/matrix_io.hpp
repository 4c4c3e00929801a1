#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "bindiag/indicator_bank.hpp"

namespace bindiag {

// An indicator matrix on disk is three files in one directory:
//   catalog.tsv  one spec per line (name plus every parameter field)
//   matrix.bin   "BDIM", version, rows, cols, then rows*cols bytes of 0/1
//   labels.csv   id,label
// dedup_map.tsv and indicators.csv are written alongside for inspection.

void writeCatalogTsv(std::ostream& out, const std::vector<IndicatorSpec>& catalog);
std::vector<IndicatorSpec> readCatalogTsv(std::istream& in);

void writeBitMatrixBinary(std::ostream& out, const BitMatrix& matrix);
BitMatrix readBitMatrixBinary(std::istream& in);

void writeLabelsCsv(std::ostream& out, const std::vector<std::int64_t>& ids,
                    const std::vector<AnomalyClass>& labels);
void readLabelsCsv(std::istream& in, std::vector<std::int64_t>& ids,
                   std::vector<AnomalyClass>& labels);

/// original_index, original_name, kept_index, kept_name
void writeDedupMapTsv(std::ostream& out, const std::vector<IndicatorSpec>& original,
                      const DedupResult& dedup);

/// Human-readable export: id,label,<indicator names...>
void writeMatrixCsv(std::ostream& out, const IndicatorMatrix& matrix);

void saveIndicatorMatrix(const std::filesystem::path& dir, const IndicatorMatrix& matrix);
IndicatorMatrix loadIndicatorMatrix(const std::filesystem::path& dir);

}  // namespace bindiag
