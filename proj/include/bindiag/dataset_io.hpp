#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "bindiag/signal_sim.hpp"

namespace bindiag {

// Record layout (both forms): id, label code, m, changeIndex, shiftParam,
// then the m values. Absent metadata is an empty CSV field, or a flag byte
// in the binary form. CSV reals carry 17 significant digits.

void writeDatasetCsv(std::ostream& out, const std::vector<Signal>& signals);
std::vector<Signal> readDatasetCsv(std::istream& in);

void writeDatasetBinary(std::ostream& out, const std::vector<Signal>& signals);
std::vector<Signal> readDatasetBinary(std::istream& in);

void saveDatasetCsv(const std::filesystem::path& path, const std::vector<Signal>& signals);
std::vector<Signal> loadDatasetCsv(const std::filesystem::path& path);
void saveDatasetBinary(const std::filesystem::path& path, const std::vector<Signal>& signals);
std::vector<Signal> loadDatasetBinary(const std::filesystem::path& path);

}  // namespace bindiag
