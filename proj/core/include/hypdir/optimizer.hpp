#pragma once

// Local minimization of the spine radius over the basepoint position.

#include <cstddef>
#include <string>
#include <vector>

#include "hypdir/domain.hpp"

namespace hypdir {

struct OptimizerParams {
  double initial_step = 0.1;
  double step_shrink = 0.5;
  double min_step = 1e-6;
  int max_iterations = 200;
  /// Worker threads for the probe builds; 0 picks the hardware concurrency.
  unsigned threads = 1;

  /// Throws InvalidArgument when the invariants fail.
  void validate() const;
};

struct TracePoint {
  MinkowskiPoint point;
  double spine_radius = 0.0;
  double step = 0.0;
};

struct ProbeFailure {
  MinkowskiPoint point;
  std::string message;
};

struct OptimizerResult {
  MinkowskiPoint x_star;
  DomainBuild build;
  /// Accepted points, starting with x0; spine radius strictly decreasing.
  std::vector<TracePoint> trace;
  std::vector<ProbeFailure> failed_probes;
  int iterations = 0;
  double final_step = 0.0;
  /// Smallest spine radius among the last stencil minus the final value
  /// (non-negative at a stencil minimum; +inf when every probe failed).
  double stencil_gap = 0.0;
};

/// Pattern search over +-3 tangent directions at the current point. A probe
/// is accepted when it lowers the spine radius by more than eps_equal; the
/// first such direction in fixed order wins. Otherwise the step shrinks.
/// Probe builds skip the volume. The final domain is rebuilt with `build`.
OptimizerResult minimize_spine_radius(const std::vector<MoebiusElement>& generators,
                                      const MinkowskiPoint& x0, const OptimizerParams& params = {},
                                      const BuildOptions& build = {});

}  // namespace hypdir
