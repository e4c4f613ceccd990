#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "tn/tensor.hpp"

namespace tn {

/// Open coordinate box lo < x < hi.
struct DomainBox {
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Vec& x) const;
  // Box shrunk by max(margin, fraction * width) on every side.
  DomainBox inner(double margin = 1e-2, double fraction = 0.1) const;
  std::string describe() const;
};

inline constexpr std::uint64_t kDefaultSeed = 42;

/// Shifted Halton points in a box (Cranley-Patterson rotation drawn from the seed).
std::vector<Vec> sample_box(const DomainBox& box, int count, std::uint64_t seed = kDefaultSeed);

/// Uniform vectors in [lo,hi]^dim from a seeded engine.
std::vector<Vec> sample_uniform(int dim, int count, double lo, double hi, std::uint64_t seed);

/// Worker count: TN_NEUTRAL_THREADS if set and positive, else hardware concurrency.
int thread_count();

/// Runs body(i) for i in [0,count). Each index must write only its own slot.
/// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(int count, const std::function<void(int)>& body);

}  // namespace tn
