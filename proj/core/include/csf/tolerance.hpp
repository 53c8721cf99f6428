#pragma once

#include <algorithm>

namespace csf {

// Relative/absolute tolerance pair used by every approximate decision.
// A quantity of magnitude `scale` is treated as zero below
// abs + rel * scale.
struct Tolerance {
  double rel = 1e-9;
  double abs = 1e-12;

  double threshold(double scale) const { return abs + rel * scale; }

  // Threshold for predicates on operators of norm >= 1 (projections,
  // unitaries), where the natural scale never drops below 1.
  double unit_threshold(double scale) const {
    return abs + rel * std::max(1.0, scale);
  }
};

}  // namespace csf
