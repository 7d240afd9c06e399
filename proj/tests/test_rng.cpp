// Copyright (c) 2026 the dcen authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <algorithm>
#include <vector>

#include "dcen/rng.hpp"

using dcen::Rng;

TEST_CASE("same seed gives the same draw sequence") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
}

TEST_CASE("uniform stays in [0,1) and covers the range") {
  Rng rng(7);
  double mn = 1.0, mx = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    mn = std::min(mn, u);
    mx = std::max(mx, u);
  }
  CHECK(mn < 0.01);
  CHECK(mx > 0.99);
}

TEST_CASE("uniform_int is in range and roughly balanced") {
  Rng rng(3);
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 10000; ++i) {
    const auto v = rng.uniform_int(5);
    REQUIRE(v < 5);
    ++counts[static_cast<std::size_t>(v)];
  }
  for (int c : counts) CHECK(c > 1700);  // expectation 2000
}

TEST_CASE("normal has sane first moments") {
  Rng rng(11);
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.03);
  CHECK(std::abs(sq / n - 1.0) < 0.05);
}

TEST_CASE("fork produces a decorrelated stream, deterministically") {
  Rng a(99);
  Rng child1 = a.fork();
  Rng b(99);
  Rng child2 = b.fork();
  for (int i = 0; i < 10; ++i) CHECK(child1.next_u64() == child2.next_u64());

  Rng parent(99);
  Rng child = parent.fork();
  CHECK(parent.next_u64() != child.next_u64());
}

TEST_CASE("state round-trips through set_state") {
  Rng a(5);
  for (int i = 0; i < 17; ++i) a.next_u64();
  Rng b;
  b.set_state(a.state());
  for (int i = 0; i < 20; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("shuffle is a permutation and seed-stable") {
  Rng a(13), b(13);
  std::vector<int> va{0, 1, 2, 3, 4, 5, 6, 7}, vb = va;
  a.shuffle(va);
  b.shuffle(vb);
  CHECK(va == vb);
  std::vector<int> sorted = va;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
}
