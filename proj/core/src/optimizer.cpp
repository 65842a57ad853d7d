#include "hypdir/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <optional>
#include <thread>

namespace hypdir {

void OptimizerParams::validate() const {
  if (!(initial_step > 0.0) || !(min_step > 0.0) || !(min_step < initial_step)) {
    throw Error(ErrorCode::InvalidArgument, "optimizer: need 0 < min_step < initial_step");
  }
  if (!(step_shrink > 0.0 && step_shrink < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "optimizer: step_shrink must lie in (0, 1)");
  }
  if (max_iterations < 0) {
    throw Error(ErrorCode::InvalidArgument, "optimizer: max_iterations must be >= 0");
  }
}

namespace {

struct Probe {
  MinkowskiPoint point;
  std::optional<double> spine;
  std::string failure;
};

Probe run_probe(const std::vector<MoebiusElement>& generators, const MinkowskiPoint& p,
                const BuildOptions& options) {
  Probe probe{p, std::nullopt, {}};
  try {
    const DomainBuild b = build_domain(generators, p, options);
    probe.spine = b.stats.spine_radius;
  } catch (const std::exception& e) {
    probe.failure = e.what();
  }
  return probe;
}

}  // namespace

OptimizerResult minimize_spine_radius(const std::vector<MoebiusElement>& generators,
                                      const MinkowskiPoint& x0, const OptimizerParams& params,
                                      const BuildOptions& build) {
  params.validate();
  BuildOptions probe_options = build;
  probe_options.compute_volume = false;

  OptimizerResult result;
  MinkowskiPoint current = x0;
  const DomainBuild start = build_domain(generators, x0, probe_options);
  double current_spine = start.stats.spine_radius;
  double step = params.initial_step;
  result.trace.push_back({current, current_spine, step});

  unsigned threads = params.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

  double last_stencil_min = std::numeric_limits<double>::infinity();
  int iter = 0;
  for (; iter < params.max_iterations && step >= params.min_step; ++iter) {
    const auto frame = tangent_frame(current);
    std::vector<MinkowskiPoint> points;
    for (const Vec4& t : frame) {
      points.push_back(exp_map(current, t, step));
      points.push_back(exp_map(current, -1.0 * t, step));
    }

    std::vector<Probe> probes(points.size());
    if (threads > 1) {
      std::vector<std::future<Probe>> futures;
      for (const auto& p : points) {
        futures.push_back(std::async(std::launch::async, run_probe, std::cref(generators), p,
                                     std::cref(probe_options)));
      }
      for (std::size_t i = 0; i < futures.size(); ++i) probes[i] = futures[i].get();
    } else {
      for (std::size_t i = 0; i < points.size(); ++i) {
        probes[i] = run_probe(generators, points[i], probe_options);
      }
    }

    last_stencil_min = std::numeric_limits<double>::infinity();
    std::optional<std::size_t> accepted;
    for (std::size_t i = 0; i < probes.size(); ++i) {
      if (!probes[i].spine) {
        result.failed_probes.push_back({probes[i].point, probes[i].failure});
        continue;
      }
      last_stencil_min = std::min(last_stencil_min, *probes[i].spine);
      if (!accepted && *probes[i].spine < current_spine - build.tol.eps_equal) accepted = i;
    }
    if (accepted) {
      current = probes[*accepted].point;
      current_spine = *probes[*accepted].spine;
      result.trace.push_back({current, current_spine, step});
    } else {
      step *= params.step_shrink;
    }
  }

  result.iterations = iter;
  result.final_step = step;
  result.x_star = current;
  result.stencil_gap = last_stencil_min - current_spine;
  result.build = build_domain(generators, current, build);
  return result;
}

}  // namespace hypdir
