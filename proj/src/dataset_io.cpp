#include "bindiag/dataset_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "bindiag/binary_io.hpp"
#include "bindiag/error.hpp"

namespace bindiag {

namespace {

constexpr char kCsvHeader[] = "id,label,m,change_index,shift_param,values";
constexpr char kBinaryMagic[] = "BDDS";
constexpr std::uint32_t kBinaryVersion = 1;

std::string formatReal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> splitFields(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

long long parseInt(const std::string& field, std::size_t lineNo) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw IoError("dataset CSV line " + std::to_string(lineNo) + ": bad integer '" + field + "'");
  }
  return v;
}

double parseReal(const std::string& field, std::size_t lineNo) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != field.size()) {
    throw IoError("dataset CSV line " + std::to_string(lineNo) + ": bad real '" + field + "'");
  }
  return v;
}

template <typename Fn>
auto withFile(const std::filesystem::path& path, std::ios::openmode mode, Fn fn) {
  using Stream = std::conditional_t<std::is_invocable_v<Fn, std::ofstream&>, std::ofstream,
                                    std::ifstream>;
  Stream stream(path, mode);
  if (!stream) throw IoError("cannot open " + path.string());
  try {
    return fn(stream);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace

void writeDatasetCsv(std::ostream& out, const std::vector<Signal>& signals) {
  out << kCsvHeader << '\n';
  for (const auto& s : signals) {
    out << s.id << ',' << classCode(s.label) << ',' << s.length() << ',';
    if (s.changeIndex) out << *s.changeIndex;
    out << ',';
    if (s.shiftParam) out << formatReal(*s.shiftParam);
    for (double v : s.values) out << ',' << formatReal(v);
    out << '\n';
  }
}

std::vector<Signal> readDatasetCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw IoError("dataset CSV: missing header");
  }
  std::vector<Signal> signals;
  std::size_t lineNo = 1;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    const auto fields = splitFields(line);
    if (fields.size() < 5) throw IoError("dataset CSV line " + std::to_string(lineNo) + ": too few fields");
    Signal s;
    s.id = parseInt(fields[0], lineNo);
    s.label = classFromCode(static_cast<int>(parseInt(fields[1], lineNo)));
    const auto m = static_cast<std::size_t>(parseInt(fields[2], lineNo));
    if (!fields[3].empty()) s.changeIndex = static_cast<int>(parseInt(fields[3], lineNo));
    if (!fields[4].empty()) s.shiftParam = parseReal(fields[4], lineNo);
    if (fields.size() != 5 + m) {
      throw IoError("dataset CSV line " + std::to_string(lineNo) + ": expected " +
                    std::to_string(m) + " values");
    }
    s.values.reserve(m);
    for (std::size_t j = 0; j < m; ++j) s.values.push_back(parseReal(fields[5 + j], lineNo));
    validateSignal(s);
    signals.push_back(std::move(s));
  }
  return signals;
}

void writeDatasetBinary(std::ostream& out, const std::vector<Signal>& signals) {
  using detail::writePod;
  out.write(kBinaryMagic, 4);
  writePod(out, kBinaryVersion);
  writePod(out, static_cast<std::uint64_t>(signals.size()));
  for (const auto& s : signals) {
    writePod(out, static_cast<std::int64_t>(s.id));
    writePod(out, static_cast<std::uint8_t>(classCode(s.label)));
    writePod(out, static_cast<std::uint32_t>(s.length()));
    writePod(out, static_cast<std::uint8_t>(s.changeIndex.has_value()));
    writePod(out, static_cast<std::int32_t>(s.changeIndex.value_or(0)));
    writePod(out, static_cast<std::uint8_t>(s.shiftParam.has_value()));
    writePod(out, s.shiftParam.value_or(0.0));
    out.write(reinterpret_cast<const char*>(s.values.data()),
              static_cast<std::streamsize>(s.values.size() * sizeof(double)));
  }
}

std::vector<Signal> readDatasetBinary(std::istream& in) {
  using detail::readPod;
  detail::expectMagic(in, kBinaryMagic);
  if (readPod<std::uint32_t>(in) != kBinaryVersion) throw IoError("unsupported dataset version");
  const auto count = readPod<std::uint64_t>(in);
  std::vector<Signal> signals;
  signals.reserve(static_cast<std::size_t>(count));
  for (std::uint64_t i = 0; i < count; ++i) {
    Signal s;
    s.id = readPod<std::int64_t>(in);
    s.label = classFromCode(readPod<std::uint8_t>(in));
    const auto m = readPod<std::uint32_t>(in);
    const bool hasChange = readPod<std::uint8_t>(in) != 0;
    const auto change = readPod<std::int32_t>(in);
    const bool hasShift = readPod<std::uint8_t>(in) != 0;
    const auto shift = readPod<double>(in);
    if (hasChange) s.changeIndex = change;
    if (hasShift) s.shiftParam = shift;
    if (m > static_cast<std::uint32_t>(kMaxLength)) throw IoError("record length out of range");
    s.values.resize(m);
    if (!in.read(reinterpret_cast<char*>(s.values.data()),
                 static_cast<std::streamsize>(m * sizeof(double)))) {
      throw IoError("unexpected end of binary stream");
    }
    validateSignal(s);
    signals.push_back(std::move(s));
  }
  return signals;
}

void saveDatasetCsv(const std::filesystem::path& path, const std::vector<Signal>& signals) {
  withFile(path, std::ios::out | std::ios::trunc, [&](std::ofstream& f) {
    writeDatasetCsv(f, signals);
    if (!f) throw IoError("write failed");
  });
}

std::vector<Signal> loadDatasetCsv(const std::filesystem::path& path) {
  return withFile(path, std::ios::in, [](std::ifstream& f) { return readDatasetCsv(f); });
}

void saveDatasetBinary(const std::filesystem::path& path, const std::vector<Signal>& signals) {
  withFile(path, std::ios::out | std::ios::binary | std::ios::trunc, [&](std::ofstream& f) {
    writeDatasetBinary(f, signals);
    if (!f) throw IoError("write failed");
  });
}

std::vector<Signal> loadDatasetBinary(const std::filesystem::path& path) {
  return withFile(path, std::ios::in | std::ios::binary,
                  [](std::ifstream& f) { return readDatasetBinary(f); });
}

}  // namespace bindiag
