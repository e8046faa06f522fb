#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "rdm/dataset.hpp"

namespace rdm {

enum class SynthKind {
  Copied,       // second view is an exact copy of the first
  Noisy,        // second view is the first plus N(0, sigma^2) noise
  Independent,  // two independent standard-normal views
  Intervals,    // one uniform view; the class is the interval of x0
};

std::optional<SynthKind> parse_synth_kind(std::string_view name);

struct SynthOptions {
  SynthKind kind = SynthKind::Copied;
  std::size_t entities = 300;
  std::size_t attributes = 12;  // per view
  std::uint64_t seed = 0;
  double sigma = 0.05;
  std::size_t classes = 3;  // Intervals only
};

struct SynthData {
  MultiViewDataset dataset;
  std::optional<TargetColumn> predictions;  // Intervals only
};

/// Two-view fixtures "a*" / "b*" (standard normal), or for Intervals one view
/// "x*" uniform on [0, 1) whose class is floor(x0 * classes).
SynthData synthesize(const SynthOptions& options);

}  // namespace rdm
