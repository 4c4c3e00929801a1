#include "bindiag/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "bindiag/binary_io.hpp"
#include "bindiag/error.hpp"

namespace bindiag {

namespace {

constexpr char kCatalogHeader[] = "name\ttest\ttau\tlevel\tsmoothing\taggregator\tbeta\tl\tk\tdelta";
constexpr char kMatrixMagic[] = "BDIM";
constexpr std::uint32_t kMatrixVersion = 1;

std::string formatNumber(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> splitTabs(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, '\t')) out.push_back(field);
  if (!line.empty() && line.back() == '\t') out.emplace_back();
  return out;
}

template <typename T>
T parseNumber(const std::string& s, const char* what) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw IoError(std::string("catalog: bad ") + what + " '" + s + "'");
  }
  return v;
}

std::ofstream openOut(const std::filesystem::path& path, bool binary) {
  std::ofstream f(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  return f;
}

std::ifstream openIn(const std::filesystem::path& path, bool binary) {
  std::ifstream f(path, binary ? std::ios::binary | std::ios::in : std::ios::in);
  if (!f) throw IoError("cannot open " + path.string());
  return f;
}

}  // namespace

void writeCatalogTsv(std::ostream& out, const std::vector<IndicatorSpec>& catalog) {
  out << kCatalogHeader << '\n';
  for (const auto& s : catalog) {
    out << s.name << '\t' << testName(s.test) << '\t' << s.tau << '\t' << formatNumber(s.level)
        << '\t' << s.smoothing << '\t';
    std::visit(
        [&](const auto& a) {
          using A = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<A, AnyWindow>) {
            out << "any\t\t\t\t";
          } else if constexpr (std::is_same_v<A, GlobalRatio>) {
            out << "global\t" << formatNumber(a.beta) << "\t\t\t" << a.delta;
          } else if constexpr (std::is_same_v<A, ConsecutiveRatio>) {
            out << "consecutive\t" << formatNumber(a.beta) << "\t\t\t" << a.delta;
          } else {
            out << "local\t\t" << a.l << '\t' << a.k << '\t' << a.delta;
          }
        },
        s.aggregator);
    out << '\n';
  }
}

std::vector<IndicatorSpec> readCatalogTsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCatalogHeader) throw IoError("catalog: missing header");
  std::vector<IndicatorSpec> catalog;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = splitTabs(line);
    if (f.size() != 10) throw IoError("catalog: expected 10 fields in '" + line + "'");
    IndicatorSpec s;
    s.test = parseTestKind(f[1]);
    s.tau = parseNumber<int>(f[2], "tau");
    s.level = parseNumber<double>(f[3], "level");
    s.smoothing = parseNumber<int>(f[4], "smoothing");
    const auto& kind = f[5];
    if (kind == "any") {
      s.aggregator = AnyWindow{};
    } else if (kind == "global") {
      s.aggregator = GlobalRatio{parseNumber<double>(f[6], "beta"), parseNumber<int>(f[9], "delta")};
    } else if (kind == "consecutive") {
      s.aggregator =
          ConsecutiveRatio{parseNumber<double>(f[6], "beta"), parseNumber<int>(f[9], "delta")};
    } else if (kind == "local") {
      s.aggregator = LocalRatio{parseNumber<int>(f[7], "l"), parseNumber<int>(f[8], "k"),
                                parseNumber<int>(f[9], "delta")};
    } else {
      throw IoError("catalog: unknown aggregator '" + kind + "'");
    }
    s.name = nameIndicator(s);
    if (s.name != f[0]) throw IoError("catalog: name '" + f[0] + "' does not match its fields");
    catalog.push_back(std::move(s));
  }
  return catalog;
}

void writeBitMatrixBinary(std::ostream& out, const BitMatrix& matrix) {
  out.write(kMatrixMagic, 4);
  detail::writePod(out, kMatrixVersion);
  detail::writePod(out, static_cast<std::uint64_t>(matrix.rows()));
  detail::writePod(out, static_cast<std::uint64_t>(matrix.cols()));
  out.write(reinterpret_cast<const char*>(matrix.data().data()),
            static_cast<std::streamsize>(matrix.data().size()));
}

BitMatrix readBitMatrixBinary(std::istream& in) {
  detail::expectMagic(in, kMatrixMagic);
  if (detail::readPod<std::uint32_t>(in) != kMatrixVersion) throw IoError("unsupported matrix version");
  const auto rows = detail::readPod<std::uint64_t>(in);
  const auto cols = detail::readPod<std::uint64_t>(in);
  BitMatrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  if (!in.read(reinterpret_cast<char*>(m.data().data()),
               static_cast<std::streamsize>(m.data().size()))) {
    throw IoError("matrix: truncated cell data");
  }
  for (auto v : m.data())
    if (v > 1) throw IoError("matrix: cell value is not 0/1");
  return m;
}

void writeLabelsCsv(std::ostream& out, const std::vector<std::int64_t>& ids,
                    const std::vector<AnomalyClass>& labels) {
  out << "id,label\n";
  for (std::size_t i = 0; i < ids.size(); ++i) out << ids[i] << ',' << classCode(labels[i]) << '\n';
}

void readLabelsCsv(std::istream& in, std::vector<std::int64_t>& ids,
                   std::vector<AnomalyClass>& labels) {
  std::string line;
  if (!std::getline(in, line) || line != "id,label") throw IoError("labels: missing header");
  ids.clear();
  labels.clear();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError("labels: malformed line '" + line + "'");
    ids.push_back(parseNumber<std::int64_t>(line.substr(0, comma), "id"));
    labels.push_back(classFromCode(parseNumber<int>(line.substr(comma + 1), "label")));
  }
}

void writeDedupMapTsv(std::ostream& out, const std::vector<IndicatorSpec>& original,
                      const DedupResult& dedup) {
  out << "original_index\toriginal_name\tkept_index\tkept_name\n";
  for (std::size_t c = 0; c < original.size(); ++c) {
    const auto kept = dedup.representative[c];
    out << c << '\t' << original[c].name << '\t' << kept << '\t'
        << dedup.matrix.catalog[kept].name << '\n';
  }
}

void writeMatrixCsv(std::ostream& out, const IndicatorMatrix& matrix) {
  out << "id,label";
  for (const auto& s : matrix.catalog) out << ",\"" << s.name << '"';
  out << '\n';
  for (std::size_t r = 0; r < matrix.cells.rows(); ++r) {
    out << matrix.observationIds[r] << ',' << classCode(matrix.labels[r]);
    for (auto v : matrix.cells.row(r)) out << ',' << static_cast<int>(v);
    out << '\n';
  }
}

void saveIndicatorMatrix(const std::filesystem::path& dir, const IndicatorMatrix& matrix) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  {
    auto f = openOut(dir / "catalog.tsv", false);
    writeCatalogTsv(f, matrix.catalog);
  }
  {
    auto f = openOut(dir / "matrix.bin", true);
    writeBitMatrixBinary(f, matrix.cells);
  }
  {
    auto f = openOut(dir / "labels.csv", false);
    writeLabelsCsv(f, matrix.observationIds, matrix.labels);
  }
}

IndicatorMatrix loadIndicatorMatrix(const std::filesystem::path& dir) {
  IndicatorMatrix m;
  try {
    auto catalogFile = openIn(dir / "catalog.tsv", false);
    m.catalog = readCatalogTsv(catalogFile);
    auto matrixFile = openIn(dir / "matrix.bin", true);
    m.cells = readBitMatrixBinary(matrixFile);
    auto labelsFile = openIn(dir / "labels.csv", false);
    readLabelsCsv(labelsFile, m.observationIds, m.labels);
  } catch (const IoError& e) {
    throw IoError(dir.string() + ": " + e.what());
  }
  if (m.cells.cols() != m.catalog.size() || m.cells.rows() != m.labels.size()) {
    throw IoError(dir.string() + ": catalog, matrix and labels disagree in shape");
  }
  return m;
}

}  // namespace bindiag
