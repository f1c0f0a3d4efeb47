#include "symvp/sampling.hpp"

namespace symvp {

namespace {
std::atomic<int> g_threads{1};
}

void setThreadCount(int k) { g_threads.store(k < 1 ? 1 : k); }
int threadCount() { return g_threads.load(); }

Vector uniformBox(Rng& rng, int dim, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  Vector x(dim);
  for (int i = 0; i < dim; ++i) x[i] = u(rng);
  return x;
}

Vector gaussianDirection(Rng& rng, int dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vector x(dim);
  double s = 0.0;
  do {
    for (int i = 0; i < dim; ++i) x[i] = n(rng);
    s = x.norm();
  } while (s < 1e-12);
  return x / s;
}

}  // namespace symvp
