#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "terra/rng.hpp"

using namespace terra;

TEST_CASE("identical seeds give identical streams") {
  Rng a(123), b(123);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("derived substreams differ by name and parameters") {
  uint64_t root = 42;
  CHECK(derive_seed(root, "world") != derive_seed(root, "resolve"));
  CHECK(derive_seed(root, "policy", 1, 2) != derive_seed(root, "policy", 1, 3));
  CHECK(derive_seed(root, "policy", 1, 2) != derive_seed(root, "policy", 2, 2));
  CHECK(derive_seed(root, "world") == derive_seed(root, "world"));
}

TEST_CASE("index is unbiased over a small range") {
  Rng rng(7);
  int counts[5] = {0};
  const int n = 100000;
  for (int i = 0; i < n; ++i) counts[rng.index(5)]++;
  for (int c : counts) CHECK(std::abs(c - n / 5) < 800);
}

TEST_CASE("normal moments") {
  Rng rng(11);
  double sum = 0, sq = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double x = rng.normal(0.0, 0.3);
    sum += x;
    sq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sq / n - 0.09) < 0.005);
}

TEST_CASE("poisson mean matches the rate") {
  Rng rng(13);
  double sum = 0;
  const int n = 50000;
  for (int i = 0; i < n; ++i) sum += rng.poisson(3.5);
  CHECK(sum / n == doctest::Approx(3.5).epsilon(0.02));
  CHECK(rng.poisson(0.0) == 0);
}

TEST_CASE("shuffle is a permutation") {
  Rng rng(17);
  std::vector<int> v{1, 2, 3, 4, 5, 6, 7};
  auto w = v;
  rng.shuffle(w);
  std::sort(w.begin(), w.end());
  CHECK(w == v);
}
