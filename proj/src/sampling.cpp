#include "tn/sampling.hpp"

#include <atomic>
#include <cstdlib>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace tn {

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
    i /= static_cast<std::uint64_t>(base);
    f *= inv;
  }
  return r;
}

}  // namespace

bool DomainBox::contains(const Vec& x) const {
  if (x.size() != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (!(x[i] > lo[i] && x[i] < hi[i])) return false;
  return true;
}

DomainBox DomainBox::inner(double margin, double fraction) const {
  DomainBox b = *this;
  for (int i = 0; i < dim(); ++i) {
    const double m = std::max(margin, fraction * (hi[i] - lo[i]));
    b.lo[i] = lo[i] + m;
    b.hi[i] = hi[i] - m;
    if (!(b.lo[i] < b.hi[i])) throw std::invalid_argument("domain box too thin to sample: " + describe());
  }
  return b;
}

std::string DomainBox::describe() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < dim(); ++i) os << (i ? ", " : "") << "(" << lo[i] << ", " << hi[i] << ")";
  os << "]";
  return os.str();
}

std::vector<Vec> sample_box(const DomainBox& box, int count, std::uint64_t seed) {
  const int d = box.dim();
  if (d > static_cast<int>(std::size(kPrimes))) throw std::invalid_argument("sample_box: dimension too large");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> shift(static_cast<std::size_t>(d));
  for (auto& s : shift) s = u(rng);
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Vec x(d);
    for (int i = 0; i < d; ++i) {
      double t = radical_inverse(static_cast<std::uint64_t>(k + 1), kPrimes[i]) + shift[static_cast<std::size_t>(i)];
      t -= std::floor(t);
      x[i] = box.lo[i] + t * (box.hi[i] - box.lo[i]);
    }
    out.push_back(std::move(x));
  }
  return out;
}

std::vector<Vec> sample_uniform(int dim, int count, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = u(rng);
    out.push_back(std::move(v));
  }
  return out;
}

int thread_count() {
  if (const char* env = std::getenv("TN_NEUTRAL_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int count, const std::function<void(int)>& body) {
  const int workers = std::min(thread_count(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  auto run = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  // Lowest failing index wins so error reports do not depend on scheduling.
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace tn
