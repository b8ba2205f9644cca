#include "doctest.h"

#include "fixtures.hpp"
#include "tukey/elastic.hpp"

using namespace tukey;
using tukey::testing::make_system;

namespace {

ParamBounds bounds_for(const InfeasibleSystem& sys) { return make_bounds(sys); }

bool cover_is_feasible(const InfeasibleSystem& sys, const HeuristicCover& hc) {
  const auto e = solve_elastic(sys, std::span<const Index>(hc.cover), bounds_for(sys));
  return e.sinf <= 1e-9 && e.ninf == 0;
}

bool direction_certifies(const InfeasibleSystem& sys, const HeuristicCover& hc) {
  std::vector<bool> in_cover(static_cast<std::size_t>(sys.size()), false);
  for (Index j : hc.cover) in_cover[static_cast<std::size_t>(j)] = true;
  for (Index j = 0; j < sys.size(); ++j)
    if (!in_cover[static_cast<std::size_t>(j)] && sys.rows.row(j).dot(hc.direction) <= 0) return false;
  return true;
}

}  // namespace

TEST_CASE("elastic program on the simplex around the origin") {
  const auto sys = testing::simplex_rows();
  const auto e = solve_elastic(sys, std::vector<bool>{}, bounds_for(sys));
  CHECK(e.sinf > 0);
  CHECK(e.ninf == 1);
  CHECK(e.violated().size() == 1);
  // Summing the three rows gives 0 >= 3, so at least 3 units of violation are
  // needed in total; one row can absorb it all.
  CHECK(e.sinf == doctest::Approx(3.0));
}

TEST_CASE("elastic program trivial cases") {
  const auto one = make_system({{1, 0}});
  const auto e = solve_elastic(one, std::vector<bool>{}, bounds_for(one));
  CHECK(e.sinf == 0);
  CHECK(e.ninf == 0);

  const auto sys = testing::simplex_rows();
  const auto none = solve_elastic(sys, std::vector<bool>{true, true, true}, bounds_for(sys));
  CHECK(none.sinf == 0);
  CHECK(none.ninf == 0);
  CHECK(none.sensitivities.isZero());
}

TEST_CASE("weights scale the elastic objective") {
  const auto sys = make_system({{1, 0}, {0, 1}, {-1, -1}}, {3, 3, 1});
  const auto e = solve_elastic(sys, std::vector<bool>{}, bounds_for(sys));
  REQUIRE(e.ninf == 1);
  CHECK(e.violated().front() == 2);
  CHECK(e.sinf == doctest::Approx(3.0));
}

TEST_CASE("find_direction") {
  const auto sys = testing::simplex_rows();
  const Index two[] = {0, 1};
  const auto x = find_direction(sys, two, bounds_for(sys));
  REQUIRE(x);
  CHECK((*x)[0] >= 1 - 1e-9);
  CHECK((*x)[1] >= 1 - 1e-9);
  const Index all[] = {0, 1, 2};
  CHECK_FALSE(find_direction(sys, all, bounds_for(sys)));
}

TEST_CASE("chinneck cover examples") {
  for (auto variant : {CoverVariant::kFull, CoverVariant::kFast}) {
    const auto simplex = testing::simplex_rows();
    auto hc = chinneck_cover(simplex, variant, 1, bounds_for(simplex));
    CHECK(hc.cover.size() == 1);
    CHECK(hc.weight == 1);
    CHECK(cover_is_feasible(simplex, hc));
    CHECK(direction_certifies(simplex, hc));

    const auto square = testing::square_rows();
    hc = chinneck_cover(square, variant, 1, bounds_for(square));
    CHECK(hc.cover.size() == 2);
    CHECK(cover_is_feasible(square, hc));
    CHECK(direction_certifies(square, hc));

    const auto feasible = make_system({{1, 0}, {2, 0}, {3, 1}});
    hc = chinneck_cover(feasible, variant, 1, bounds_for(feasible));
    CHECK(hc.cover.empty());
    CHECK(hc.weight == 0);
  }
  const auto sys = testing::simplex_rows();
  CHECK_THROWS_AS(chinneck_cover(sys, CoverVariant::kFast, 0, bounds_for(sys)), std::invalid_argument);
}

TEST_CASE("chinneck covers are feasible on random clouds") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    const Index n = 8 + t % 10, d = 2 + t % 3;
    const auto sys = testing::gaussian_system(rng, n, d);
    for (auto variant : {CoverVariant::kFull, CoverVariant::kFast}) {
      const auto hc = chinneck_cover(sys, variant, 1, bounds_for(sys));
      CHECK(std::is_sorted(hc.cover.begin(), hc.cover.end()));
      CHECK(hc.weight == sys.weight_of(hc.cover));
      CHECK(cover_is_feasible(sys, hc));
      CHECK(direction_certifies(sys, hc));
    }
  }
}

TEST_CASE("fast variant with k = n sees every violated row") {
  std::mt19937_64 rng(5);
  const auto sys = testing::gaussian_system(rng, 12, 3);
  const auto full = chinneck_cover(sys, CoverVariant::kFull, 1, bounds_for(sys));
  const auto fast = chinneck_cover(sys, CoverVariant::kFast, static_cast<int>(sys.size()), bounds_for(sys));
  CHECK(cover_is_feasible(sys, fast));
  CHECK(fast.lp_solves >= 1);
  CHECK(full.lp_solves >= 1);
}
