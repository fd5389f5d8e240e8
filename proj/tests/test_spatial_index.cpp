// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <thread>

#include "oracles.hpp"
#include "rbffd/error.hpp"
#include "rbffd/spatial_index.hpp"

using namespace rbffd;

namespace {

std::vector<Point2> random_points(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point2> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng)};
  return pts;
}

}  // namespace

TEST_CASE("empty input is rejected") {
  std::vector<Point2> none;
  CHECK_THROWS_AS(NeighborIndex{none}, Error);
}

TEST_CASE("single node") {
  const std::vector<Point2> one{{0.3, 0.7}};
  const NeighborIndex index(one);
  CHECK(index.k_nearest(0, 1) == std::vector<std::size_t>{0});
}

TEST_CASE("unit-square corners break ties by id") {
  const std::vector<Point2> corners{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  const NeighborIndex index(corners);
  CHECK(index.k_nearest(0, 2) == std::vector<std::size_t>{0, 1});
  CHECK(index.k_nearest(3, 3) == std::vector<std::size_t>{3, 1, 2});
  CHECK(index.k_nearest(0, 4) == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("k out of range") {
  const std::vector<Point2> corners{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  const NeighborIndex index(corners);
  try {
    (void)index.k_nearest(0, 5);
    FAIL("expected KTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::KTooLarge);
  }
  CHECK_THROWS_AS((void)index.k_nearest(0, 0), Error);
}

TEST_CASE("queries match brute force on random point sets") {
  std::mt19937_64 rng(42);
  for (std::size_t n : {100u, 1000u, 2000u}) {
    const auto pts = random_points(rng, n);
    const NeighborIndex index(pts);
    for (std::size_t q = 0; q < n; q += n / 50) {
      for (std::size_t k : {1u, 10u, 28u, 69u}) {
        CHECK(index.k_nearest(q, k) == oracle::brute_knn(pts, pts[q], k));
      }
    }
  }
}

TEST_CASE("k = N returns every id sorted by distance") {
  std::mt19937_64 rng(5);
  const auto pts = random_points(rng, 100);
  const NeighborIndex index(pts);
  CHECK(index.k_nearest(17, 100) == oracle::brute_knn(pts, pts[17], 100));
}

TEST_CASE("lattice ties are resolved exactly") {
  // Integer lattice: many exactly-equal distances.
  std::vector<Point2> pts;
  for (int j = 0; j < 20; ++j) {
    for (int i = 0; i < 20; ++i) pts.push_back({double(i), double(j)});
  }
  const NeighborIndex index(pts);
  for (std::size_t q = 0; q < pts.size(); q += 7) {
    for (std::size_t k : {5u, 13u, 21u, 45u}) CHECK(index.k_nearest(q, k) == oracle::brute_knn(pts, pts[q], k));
  }
}

TEST_CASE("concurrent queries agree with sequential ones") {
  std::mt19937_64 rng(9);
  const auto pts = random_points(rng, 1500);
  const NeighborIndex index(pts);
  std::vector<std::vector<std::size_t>> seq(pts.size()), par(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) seq[i] = index.k_nearest(i, 20);
  std::vector<std::thread> workers;
  for (int t = 0; t < 4; ++t) {
    workers.emplace_back([&, t] {
      for (std::size_t i = static_cast<std::size_t>(t); i < pts.size(); i += 4) par[i] = index.k_nearest(i, 20);
    });
  }
  for (auto& w : workers) w.join();
  CHECK(seq == par);
}
