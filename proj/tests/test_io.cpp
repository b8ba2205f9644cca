#include "doctest.h"

#include <fstream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "tukey/io.hpp"

using namespace tukey;

namespace {

std::string data(const std::string& name) { return std::string(TUKEY_TEST_DATA) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Eigen::MatrixXd parse(const std::string& text) {
  std::istringstream in(text);
  return read_point_matrix(in);
}

int error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

LpModel lp_from_mps(const MpsModel& m) {
  LpModel lp(static_cast<Index>(m.columns.size()), static_cast<Index>(m.rows.size()));
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    lp.senses[r] = m.senses[r] == 'G' ? RowSense::kGreaterEqual : m.senses[r] == 'L' ? RowSense::kLessEqual : RowSense::kEqual;
    lp.rhs[static_cast<Index>(r)] = m.rhs[r];
  }
  lp.lower.setZero();
  for (std::size_t c = 0; c < m.columns.size(); ++c)
    for (auto [row, v] : m.coefficients[c]) {
      if (row < 0) lp.objective[static_cast<Index>(c)] = v;
      else lp.rows(row, static_cast<Index>(c)) = v;
    }
  for (const auto& b : m.bounds) {
    switch (b.type) {
      case MpsModel::Bound::kLower: lp.lower[b.column] = b.value; break;
      case MpsModel::Bound::kUpper: lp.upper[b.column] = b.value; break;
      case MpsModel::Bound::kFree: lp.lower[b.column] = -lp.upper[b.column]; break;
      case MpsModel::Bound::kBinary: lp.lower[b.column] = 0; lp.upper[b.column] = 1; break;
    }
  }
  return lp;
}

void check_same_lp(const LpModel& a, const LpModel& b) {
  CHECK(a.objective == b.objective);
  CHECK(a.rows == b.rows);
  CHECK(a.rhs == b.rhs);
  CHECK(a.lower == b.lower);
  CHECK(a.upper == b.upper);
  CHECK(a.senses == b.senses);
}

}  // namespace

TEST_CASE("point files") {
  const auto m = parse("3 2\n1 0\n0 1\n-1 -1\n");
  REQUIRE(m.rows() == 3);
  CHECK(m(2, 1) == -1);

  QueryChoice origin;
  origin.coords = Eigen::Vector2d::Zero();
  const auto sys = build_system(make_point_set(m, origin));
  CHECK(sys.size() == 3);
  CHECK(sys.zero_offset == 0);

  const auto lone = make_point_set(parse("1 1\n5\n"));
  CHECK(lone.size() == 0);
  CHECK(lone.query[0] == 5);
  CHECK(build_system(lone).empty());

  QueryChoice second;
  second.index = 1;
  const auto ps = make_point_set(m, second);
  CHECK(ps.size() == 2);
  CHECK(ps.query == Eigen::Vector2d(0, 1));
  CHECK(ps.points.row(1) == Eigen::RowVector2d(-1, -1));
  second.index = 3;
  CHECK_THROWS_AS(make_point_set(m, second), std::invalid_argument);
}

TEST_CASE("point file errors carry the line") {
  CHECK(error_line("3 2\n1 0\n0 1\n") == 4);
  CHECK(error_line("2 2\n1 0\n0 1\n5 5\n") == 4);
  CHECK(error_line("2 2\n1 0\n0 1 2\n") == 3);
  CHECK(error_line("2 2\n1 x\n0 1\n") == 2);
  CHECK(error_line("2\n") == 1);
  CHECK(error_line("") == 1);
  CHECK(error_line("a b\n") == 1);
}

TEST_CASE("point files round trip") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int t = 0; t < 20; ++t) {
    const Eigen::MatrixXd m = Eigen::MatrixXd::NullaryExpr(1 + t, 1 + t % 5, [&] { return g(rng) * std::pow(10.0, t % 7 - 3); });
    std::ostringstream out;
    write_point_matrix(out, m);
    CHECK(parse(out.str()) == m);
  }
}

TEST_CASE("golden MPS for the simplex instance") {
  const auto sys = build_system(read_points(data("simplex.txt")));
  const auto bounds = make_bounds(sys);
  CHECK(bounds.bigM == doctest::Approx(std::sqrt(2.0)));
  CHECK(bounds.epsilon == 1e-5);
  const auto mip = MipModel::depth(sys, bounds);
  std::ostringstream out;
  write_mps(out, to_mps(mip));
  CHECK(out.str() == slurp(data("simplex_depth.mps")));
}

TEST_CASE("MPS round trip is exact") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    auto sys = testing::gaussian_system(rng, 6 + t, 2 + t % 4);
    if (t % 3 == 0) sys.weights[0] = 3;
    const auto bounds = make_bounds(sys);
    for (bool guess : {false, true}) {
      const MipModel mip = guess ? MipModel::guess_form(sys, bounds, 2) : MipModel::depth(sys, bounds);
      const MpsModel m = to_mps(mip);
      std::stringstream io;
      write_mps(io, m);
      const MpsModel back = read_mps(io);
      CHECK(back == m);
      check_same_lp(lp_from_mps(back), mip.relaxation());
    }
  }
}

TEST_CASE("MPS structure") {
  auto sys = testing::simplex_rows();
  sys.weights = {2, 1, 4};
  const auto bounds = make_bounds(sys);
  const auto depth = to_mps(MipModel::depth(sys, bounds));
  const auto guess = to_mps(MipModel::guess_form(sys, bounds, 2));
  CHECK(guess.rows.size() == depth.rows.size() + 1);
  CHECK(guess.senses.back() == 'L');
  CHECK(guess.columns.back() == "eps");
  CHECK(guess.columns.size() == depth.columns.size() + 1);
  // Objective coefficients of the binaries are the weights.
  for (int j = 0; j < 3; ++j) {
    const auto& col = depth.coefficients[static_cast<std::size_t>(2 + j)];
    REQUIRE(col.front().first == -1);
    CHECK(col.front().second == sys.weights[static_cast<std::size_t>(j)]);
  }
  std::istringstream bad("NAME X\nROWS\n N COST\nRANGES\n");
  CHECK_THROWS_AS(read_mps(bad), ParseError);
}

TEST_CASE("result JSON") {
  DepthResult r;
  r.depth = 3;
  r.cover = {0, 4};
  r.direction = Eigen::Vector2d(1, -0.5);
  r.solver = "branch-and-cut";
  r.margin = std::numeric_limits<double>::infinity();
  const auto j = to_json(r, testing::simplex_rows());
  CHECK(j["version"] == kResultSchemaVersion);
  CHECK(j["depth"] == 3);
  CHECK(j["cover"] == nlohmann::json::array({0, 4}));
  CHECK(j["margin"].is_null());
  CHECK(j["status"] == "optimal");
  CHECK(j["certificate"] == "verified");
  CHECK(j["stats"].contains("nodes"));
}
