#include "bindiag/signal_sim.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "bindiag/error.hpp"
#include "bindiag/parallel.hpp"

namespace bindiag {

namespace {

constexpr double kSigmaLow = 1.01, kSigmaHigh = 5.0;
constexpr double kMeanLowA = 1.01, kMeanHighA = 5.0;
constexpr double kMeanLowB = 0.505, kMeanHighB = 2.5;
constexpr double kSlopeLow = 0.02, kSlopeHigh = 3.0;

void checkLength(int m) {
  if (m < kMinLength || m > kMaxLength) {
    throw InvalidInput("signal length " + std::to_string(m) +
                       " outside [100, 200]");
  }
}

// Closed interval [low, high].
double uniformClosed(Rng& rng, double low, double high) {
  std::uniform_real_distribution<double> dist(
      low, std::nextafter(high, std::numeric_limits<double>::infinity()));
  return dist(rng);
}

int changeLow(int m) { return (2 * m) / 10; }
int changeHigh(int m) { return (8 * m) / 10; }

// Fills values with N(0,1) before j_s and N(mean(j), sd^2) from j_s on.
template <typename MeanFn>
Signal shifted(Rng& rng, int m, AnomalyClass label, double param,
               const ShiftOverride& fixed, double sd, MeanFn meanAt) {
  Signal s;
  s.label = label;
  s.shiftParam = param;
  const int js = fixed.changeIndex ? *fixed.changeIndex : drawChangeIndex(rng, m);
  s.changeIndex = js;
  s.values.resize(static_cast<std::size_t>(m));
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int j = 1; j <= m; ++j) {
    const double z = noise(rng);
    s.values[static_cast<std::size_t>(j - 1)] =
        j < js ? z : meanAt(j - js) + sd * z;
  }
  return s;
}

}  // namespace

std::string_view className(AnomalyClass cls) {
  switch (cls) {
    case AnomalyClass::NoAnomaly: return "no change";
    case AnomalyClass::VarianceShift: return "variance";
    case AnomalyClass::MeanShift: return "mean";
    case AnomalyClass::SlopeShift: return "trend";
  }
  return "?";
}

AnomalyClass classFromCode(int code) {
  if (code < 0 || code >= kNumClasses) {
    throw InvalidInput("unknown class code " + std::to_string(code));
  }
  return static_cast<AnomalyClass>(code);
}

void validateSignal(const Signal& signal) {
  const int m = signal.length();
  checkLength(m);
  const bool normal = signal.label == AnomalyClass::NoAnomaly;
  if (normal != !signal.changeIndex.has_value() ||
      normal != !signal.shiftParam.has_value()) {
    throw InvalidInput("signal " + std::to_string(signal.id) +
                       ": change metadata inconsistent with label");
  }
  if (signal.changeIndex &&
      (*signal.changeIndex < changeLow(m) || *signal.changeIndex > changeHigh(m))) {
    throw InvalidInput("signal " + std::to_string(signal.id) +
                       ": change index out of range");
  }
}

std::string_view variantName(DatasetVariant variant) {
  return variant == DatasetVariant::A ? "A" : "B";
}

DatasetVariant parseVariant(std::string_view text) {
  if (text.size() == 1) {
    const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    if (c == 'A') return DatasetVariant::A;
    if (c == 'B') return DatasetVariant::B;
  }
  throw InvalidInput("dataset variant must be A or B, got '" + std::string(text) + "'");
}

Rng signalRng(std::uint64_t seed, std::int64_t id) {
  const auto uid = static_cast<std::uint64_t>(id);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(uid), static_cast<std::uint32_t>(uid >> 32)};
  return Rng(seq);
}

int drawLength(Rng& rng) {
  std::uniform_int_distribution<int> dist(kMinLength, kMaxLength);
  return dist(rng);
}

int drawChangeIndex(Rng& rng, int m) {
  std::uniform_int_distribution<int> dist(changeLow(m), changeHigh(m));
  return dist(rng);
}

Signal genNormal(Rng& rng, int m) {
  checkLength(m);
  Signal s;
  s.values.resize(static_cast<std::size_t>(m));
  std::normal_distribution<double> noise(0.0, 1.0);
  for (auto& v : s.values) v = noise(rng);
  return s;
}

Signal genVarianceShift(Rng& rng, int m, const ShiftOverride& fixed) {
  checkLength(m);
  const double sigma = fixed.shift ? *fixed.shift : uniformClosed(rng, kSigmaLow, kSigmaHigh);
  return shifted(rng, m, AnomalyClass::VarianceShift, sigma, fixed, sigma,
                 [](int) { return 0.0; });
}

Signal genMeanShift(Rng& rng, int m, DatasetVariant variant, const ShiftOverride& fixed) {
  checkLength(m);
  double mu = 0.0;
  if (fixed.shift) {
    mu = *fixed.shift;
  } else if (variant == DatasetVariant::A) {
    mu = uniformClosed(rng, kMeanLowA, kMeanHighA);
  } else {
    mu = uniformClosed(rng, kMeanLowB, kMeanHighB);
  }
  return shifted(rng, m, AnomalyClass::MeanShift, mu, fixed, 1.0,
                 [mu](int) { return mu; });
}

Signal genSlopeShift(Rng& rng, int m, const ShiftOverride& fixed) {
  checkLength(m);
  const double slope = fixed.shift ? *fixed.shift : uniformClosed(rng, kSlopeLow, kSlopeHigh);
  return shifted(rng, m, AnomalyClass::SlopeShift, slope, fixed, 1.0,
                 [slope](int offset) { return slope * offset; });
}

std::vector<Signal> genDataset(const DatasetSpec& spec) {
  if (spec.countNormal < 0 || spec.countPerAnomaly < 0) {
    throw InvalidInput("dataset counts must be non-negative");
  }
  const auto normals = static_cast<std::size_t>(spec.countNormal);
  const auto perAnomaly = static_cast<std::size_t>(spec.countPerAnomaly);
  const std::size_t total = normals + 3 * perAnomaly;
  std::vector<Signal> out(total);
  parallelFor(total, [&](std::size_t i) {
    Rng rng = signalRng(spec.seed, static_cast<std::int64_t>(i));
    const int m = drawLength(rng);
    Signal s;
    if (i < normals) {
      s = genNormal(rng, m);
    } else {
      switch ((i - normals) / perAnomaly) {
        case 0: s = genVarianceShift(rng, m); break;
        case 1: s = genMeanShift(rng, m, spec.variant); break;
        default: s = genSlopeShift(rng, m); break;
      }
    }
    s.id = static_cast<std::int64_t>(i);
    out[i] = std::move(s);
  });
  return out;
}

}  // namespace bindiag
