#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "tukey/engine.hpp"
#include "tukey/mip.hpp"
#include "tukey/model.hpp"

namespace tukey {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Text format: a header `n d`, then n lines of d reals.
Eigen::MatrixXd read_point_matrix(std::istream& in);
Eigen::MatrixXd read_point_matrix(const std::string& path);
void write_point_matrix(std::ostream& out, const Eigen::MatrixXd& points);

/// Query selection. With neither field set the first point is the query.
struct QueryChoice {
  std::optional<Index> index;
  std::optional<Eigen::VectorXd> coords;
};

/// A member query is dropped from the data, so the count never includes
/// the query itself.
PointSet make_point_set(const Eigen::MatrixXd& points, const QueryChoice& query = {});
PointSet read_points(const std::string& path, const QueryChoice& query = {});

/// Column-oriented MPS content.
struct MpsModel {
  enum class Bound { kLower, kUpper, kFree, kBinary };

  std::string name;
  std::string objective_row = "COST";
  std::vector<std::string> rows;
  std::vector<char> senses;  // 'G', 'L', 'E'
  std::vector<std::string> columns;
  std::vector<bool> integer;
  /// coefficients[c] lists (row, value); row -1 is the objective.
  std::vector<std::vector<std::pair<int, double>>> coefficients;
  std::vector<double> rhs;
  struct BoundEntry {
    Bound type;
    int column;
    double value;
    bool operator==(const BoundEntry&) const = default;
  };
  std::vector<BoundEntry> bounds;

  bool operator==(const MpsModel&) const = default;
};

MpsModel to_mps(const MipModel& mip, const std::string& name = "TUKEY");
/// Fixed-column layout; numbers use the shortest text that parses back to the
/// same double and may run past their field.
void write_mps(std::ostream& out, const MpsModel& model);
void write_mps(const std::string& path, const MipModel& mip, const std::string& name = "TUKEY");
MpsModel read_mps(std::istream& in);

inline constexpr int kResultSchemaVersion = 1;

nlohmann::json to_json(const DepthResult& r, const InfeasibleSystem& sys);
nlohmann::json to_json(const EngineConfig& cfg);

}  // namespace tukey
