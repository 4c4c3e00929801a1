#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

namespace bindiag {

/// Generative class of a signal. The integer codes are the serialized form.
enum class AnomalyClass : std::uint8_t {
  NoAnomaly = 0,
  VarianceShift = 1,
  MeanShift = 2,
  SlopeShift = 3,
};

inline constexpr int kNumClasses = 4;
inline constexpr int kMinLength = 100;
inline constexpr int kMaxLength = 200;

std::string_view className(AnomalyClass cls);
AnomalyClass classFromCode(int code);
inline int classCode(AnomalyClass cls) { return static_cast<int>(cls); }

/// One simulated observation. changeIndex is the 1-based position j_s of the
/// first shifted value; values[j_s - 1] onward follow the shifted regime.
struct Signal {
  std::int64_t id = 0;
  std::vector<double> values;
  AnomalyClass label = AnomalyClass::NoAnomaly;
  std::optional<int> changeIndex;
  std::optional<double> shiftParam;

  int length() const { return static_cast<int>(values.size()); }
};

/// Throws InvalidInput if the label/metadata/length invariants do not hold.
void validateSignal(const Signal& signal);

enum class DatasetVariant { A, B };

std::string_view variantName(DatasetVariant variant);
/// Parses "A"/"B" (case-insensitive). Throws InvalidInput otherwise.
DatasetVariant parseVariant(std::string_view text);

struct DatasetSpec {
  DatasetVariant variant = DatasetVariant::A;
  int countNormal = 3000;
  int countPerAnomaly = 1000;
  std::uint64_t seed = 20170101;
};

using Rng = std::mt19937_64;

/// Independent stream for signal `id`; a signal's content depends only on
/// (seed, id).
Rng signalRng(std::uint64_t seed, std::int64_t id);

/// Draws m uniformly from {100, ..., 200}.
int drawLength(Rng& rng);

/// Draws j_s uniformly from {floor(2m/10), ..., floor(8m/10)}.
int drawChangeIndex(Rng& rng, int m);

/// Fixes parts of the generative draw; used by calibration tests.
struct ShiftOverride {
  std::optional<int> changeIndex;
  std::optional<double> shift;
};

Signal genNormal(Rng& rng, int m);
Signal genVarianceShift(Rng& rng, int m, const ShiftOverride& fixed = {});
Signal genMeanShift(Rng& rng, int m, DatasetVariant variant,
                    const ShiftOverride& fixed = {});
Signal genSlopeShift(Rng& rng, int m, const ShiftOverride& fixed = {});

/// Signals are ordered by id: countNormal normal signals, then
/// countPerAnomaly of each anomaly class in code order.
std::vector<Signal> genDataset(const DatasetSpec& spec);

}  // namespace bindiag
