#include "doctest.h"

#include <numeric>
#include <random>
#include <thread>

#include "fixtures.hpp"
#include "tukey/cuts.hpp"
#include "tukey/elastic.hpp"

using namespace tukey;
using tukey::testing::make_system;

namespace {

std::size_t exhaustive_best(const std::vector<double>& v) {
  std::size_t best = 0;
  const std::size_t n = v.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double sum = 0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (mask >> j & 1) {
        sum += v[j];
        ++count;
      }
    if (sum < 1.0) best = std::max(best, count);
  }
  return best;
}

}  // namespace

TEST_CASE("pseudo-knapsack examples") {
  const std::vector<double> a{0.05, 0.1, 0.2, 0.3, 0.4};
  CHECK(pseudo_knapsack_select(a) == std::vector<Index>{0, 1, 2, 3});
  const std::vector<double> zeros(7, 0.0);
  CHECK(pseudo_knapsack_select(zeros).size() == 7);
  const std::vector<double> ones{1.0, 1.0};
  CHECK(pseudo_knapsack_select(ones).empty());
}

TEST_CASE("pseudo-knapsack matches exhaustive search") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> len(0, 12);
  for (int t = 0; t < 300; ++t) {
    std::vector<double> v(static_cast<std::size_t>(len(rng)));
    // Mix in exact zeros, ones and halves to hit the boundary.
    for (auto& x : v) {
      const double r = u(rng);
      x = r < 0.1 ? 0.0 : r < 0.2 ? 1.0 : r < 0.3 ? 0.5 : u(rng) * (t % 3 == 0 ? 0.3 : 1.0);
    }
    const auto chosen = pseudo_knapsack_select(v);
    double sum = 0;
    for (Index j : chosen) sum += v[static_cast<std::size_t>(j)];
    CHECK(sum < 1.0);
    CHECK(chosen.size() == exhaustive_best(v));
  }
}

TEST_CASE("bis cut examples") {
  const auto line = make_system({{1.0}, {-1.0}});
  const Index both[] = {0, 1};
  const auto cut = bis_cut(line, both, make_bounds(line));
  REQUIRE(cut);
  CHECK(cut->members == std::vector<Index>{0, 1});

  const auto one = make_system({{1, 0}});
  const Index first[] = {0};
  CHECK_FALSE(bis_cut(one, first, make_bounds(one)));

  const auto simplex = testing::simplex_rows();
  const Index all[] = {0, 1, 2};
  const auto c3 = bis_cut(simplex, all, make_bounds(simplex));
  REQUIRE(c3);
  CHECK(c3->members == std::vector<Index>{0, 1, 2});

  CHECK_THROWS_AS(bis_cut(simplex, std::span<const Index>{}, make_bounds(simplex)), std::invalid_argument);
}

TEST_CASE("bis cuts are small infeasible subsystems") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 50; ++t) {
    const Index d = 2 + t % 4;
    const auto sys = testing::gaussian_system(rng, 10 + t % 8, d);
    std::vector<Index> all(static_cast<std::size_t>(sys.size()));
    std::iota(all.begin(), all.end(), Index{0});
    const auto bounds = make_bounds(sys);
    if (find_direction(sys, all, bounds)) continue;
    const auto cut = bis_cut(sys, all, bounds);
    REQUIRE(cut);
    CHECK(static_cast<Index>(cut->members.size()) <= d + 1);
    CHECK_FALSE(find_direction(sys, cut->members, bounds));
  }
}

TEST_CASE("generate cuts") {
  const auto simplex = testing::simplex_rows();
  const auto bounds = make_bounds(simplex);
  const Eigen::VectorXd third = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
  auto cuts = generate_cuts(simplex, third, {}, {}, bounds, true);
  REQUIRE(cuts.size() == 1);
  CHECK(cuts[0].members == std::vector<Index>{0, 1, 2});

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(3);
  cuts = generate_cuts(simplex, ones, {}, {}, bounds, true);
  REQUIRE(cuts.size() == 1);
  CHECK(cuts[0].activity(ones) >= 1);

  const Index cover[] = {2};
  CHECK(generate_cuts(simplex, third, cover, {}, bounds, true).empty());
  CHECK(generate_cuts(simplex, third, cover, {}, bounds, false).empty());

  // A knapsack-selected infeasible subset gives a cut violated by the LP point.
  const auto square = testing::square_rows();
  const Eigen::VectorXd low = Eigen::VectorXd::Constant(4, 0.2);
  cuts = generate_cuts(square, low, {}, {}, make_bounds(square), true);
  REQUIRE(cuts.size() == 1);
  CHECK(cuts[0].activity(low) < 1);
}

TEST_CASE("cut pool deduplicates") {
  CutPool pool;
  auto [a, fresh_a] = pool.insert(make_cut({2, 0, 1}));
  auto [b, fresh_b] = pool.insert(make_cut({0, 1, 2}));
  auto [c, fresh_c] = pool.insert(make_cut({0, 3}));
  CHECK(fresh_a);
  CHECK_FALSE(fresh_b);
  CHECK(fresh_c);
  CHECK(a == b);
  CHECK(c != a);
  CHECK(pool.size() == 2);
  CHECK(pool.get(a).members == std::vector<Index>{0, 1, 2});
  CHECK_THROWS_AS(make_cut({}), std::invalid_argument);
}

TEST_CASE("cut pool concurrent inserts") {
  CutPool pool;
  std::vector<std::thread> threads;
  for (int w = 0; w < 4; ++w)
    threads.emplace_back([&pool] {
      for (Index j = 0; j < 200; ++j) pool.insert(make_cut({j % 50, j % 50 + 1}));
    });
  for (auto& t : threads) t.join();
  CHECK(pool.size() == 50);
}
