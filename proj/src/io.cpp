#include "tukey/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace tukey {

namespace {

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T value{};
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || end != s.data() + s.size()) return std::nullopt;
  return value;
}

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

}  // namespace

Eigen::MatrixXd read_point_matrix(std::istream& in) {
  std::string line;
  int lineno = 0;
  Index n = -1, d = -1, filled = 0;
  Eigen::MatrixXd points;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = tokens(line);
    if (tok.empty()) continue;
    if (n < 0) {
      if (tok.size() != 2) throw ParseError("header must be 'n d'", lineno);
      const auto pn = parse_number<long>(tok[0]), pd = parse_number<long>(tok[1]);
      if (!pn || !pd || *pn < 0 || *pd < 1) throw ParseError("bad header counts", lineno);
      n = *pn;
      d = *pd;
      points.resize(n, d);
      continue;
    }
    if (filled == n) throw ParseError("more than " + std::to_string(n) + " points", lineno);
    if (static_cast<Index>(tok.size()) != d)
      throw ParseError("expected " + std::to_string(d) + " values, found " + std::to_string(tok.size()), lineno);
    for (Index i = 0; i < d; ++i) {
      const auto v = parse_number<double>(tok[static_cast<std::size_t>(i)]);
      if (!v || !std::isfinite(*v)) throw ParseError("bad number '" + std::string(tok[static_cast<std::size_t>(i)]) + "'", lineno);
      points(filled, i) = *v;
    }
    ++filled;
  }
  if (n < 0) throw ParseError("missing header", lineno + 1);
  if (filled < n)
    throw ParseError("expected " + std::to_string(n) + " points, found " + std::to_string(filled), lineno + 1);
  return points;
}

Eigen::MatrixXd read_point_matrix(const std::string& path) {
  auto in = open_in(path);
  return read_point_matrix(in);
}

void write_point_matrix(std::ostream& out, const Eigen::MatrixXd& points) {
  out << points.rows() << ' ' << points.cols() << '\n';
  for (Index j = 0; j < points.rows(); ++j) {
    for (Index i = 0; i < points.cols(); ++i) out << (i ? " " : "") << format_number(points(j, i));
    out << '\n';
  }
}

PointSet make_point_set(const Eigen::MatrixXd& points, const QueryChoice& query) {
  PointSet ps;
  ps.dim = points.cols();
  if (query.coords) {
    if (query.coords->size() != ps.dim) throw std::invalid_argument("query has wrong dimension");
    ps.points = points;
    ps.query = *query.coords;
    return ps;
  }
  const Index q = query.index.value_or(0);
  if (q < 0 || q >= points.rows()) throw std::invalid_argument("query index out of range");
  ps.query = points.row(q).transpose();
  ps.points.resize(points.rows() - 1, ps.dim);
  ps.points.topRows(q) = points.topRows(q);
  ps.points.bottomRows(points.rows() - 1 - q) = points.bottomRows(points.rows() - 1 - q);
  return ps;
}

PointSet read_points(const std::string& path, const QueryChoice& query) {
  return make_point_set(read_point_matrix(path), query);
}

MpsModel to_mps(const MipModel& mip, const std::string& name) {
  const LpModel lp = mip.relaxation();
  MpsModel m;
  m.name = name;
  const Index d = mip.dim(), n = mip.num_binaries();
  for (Index r = 0; r < lp.num_rows(); ++r) {
    m.rows.push_back(r < n ? "R" + std::to_string(r + 1) : "CARD");
    const RowSense s = lp.senses[static_cast<std::size_t>(r)];
    m.senses.push_back(s == RowSense::kGreaterEqual ? 'G' : s == RowSense::kLessEqual ? 'L' : 'E');
    m.rhs.push_back(lp.rhs[r]);
  }
  for (Index c = 0; c < lp.num_columns(); ++c) {
    const bool binary = c >= d && c < d + n;
    m.columns.push_back(c < d ? "x" + std::to_string(c + 1) : binary ? "s" + std::to_string(c - d + 1) : "eps");
    m.integer.push_back(binary);
    std::vector<std::pair<int, double>> entries;
    if (lp.objective[c] != 0) entries.emplace_back(-1, lp.objective[c]);
    for (Index r = 0; r < lp.num_rows(); ++r)
      if (lp.rows(r, c) != 0) entries.emplace_back(static_cast<int>(r), lp.rows(r, c));
    if (entries.empty()) entries.emplace_back(-1, 0.0);
    m.coefficients.push_back(std::move(entries));
    const int ci = static_cast<int>(c);
    if (binary) {
      m.bounds.push_back({MpsModel::Bound::kBinary, ci, 0});
    } else if (std::isinf(lp.lower[c]) && std::isinf(lp.upper[c])) {
      m.bounds.push_back({MpsModel::Bound::kFree, ci, 0});
    } else {
      if (lp.lower[c] != 0) m.bounds.push_back({MpsModel::Bound::kLower, ci, lp.lower[c]});
      if (!std::isinf(lp.upper[c])) m.bounds.push_back({MpsModel::Bound::kUpper, ci, lp.upper[c]});
    }
  }
  return m;
}

namespace {

// Places each field at its 1-based start column; an overlong field pushes the
// next one right by a single space.
std::string fixed_line(std::initializer_list<std::pair<std::size_t, std::string_view>> fields) {
  std::string out;
  for (const auto& [col, text] : fields) {
    if (text.empty()) continue;
    if (out.size() < col - 1) out.append(col - 1 - out.size(), ' ');
    else if (!out.empty()) out.push_back(' ');
    out.append(text);
  }
  return out;
}

}  // namespace

void write_mps(std::ostream& out, const MpsModel& m) {
  out << "NAME          " << m.name << '\n';
  out << "ROWS\n";
  out << fixed_line({{2, "N"}, {5, m.objective_row}}) << '\n';
  for (std::size_t r = 0; r < m.rows.size(); ++r) out << fixed_line({{2, std::string_view(&m.senses[r], 1)}, {5, m.rows[r]}}) << '\n';
  out << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  auto emit_marker = [&](const char* kind) {
    const std::string name = "MARKER" + std::to_string(marker++);
    out << fixed_line({{5, name}, {15, "'MARKER'"}, {40, kind}}) << '\n';
  };
  for (std::size_t c = 0; c < m.columns.size(); ++c) {
    if (m.integer[c] != in_int) {
      emit_marker(m.integer[c] ? "'INTORG'" : "'INTEND'");
      in_int = m.integer[c];
    }
    for (const auto& [row, value] : m.coefficients[c]) {
      const std::string& rname = row < 0 ? m.objective_row : m.rows[static_cast<std::size_t>(row)];
      out << fixed_line({{5, m.columns[c]}, {15, rname}, {25, format_number(value)}}) << '\n';
    }
  }
  if (in_int) emit_marker("'INTEND'");
  out << "RHS\n";
  for (std::size_t r = 0; r < m.rows.size(); ++r)
    if (m.rhs[r] != 0) out << fixed_line({{5, "RHS"}, {15, m.rows[r]}, {25, format_number(m.rhs[r])}}) << '\n';
  out << "BOUNDS\n";
  for (const auto& b : m.bounds) {
    const std::string& col = m.columns[static_cast<std::size_t>(b.column)];
    switch (b.type) {
      case MpsModel::Bound::kLower: out << fixed_line({{2, "LO"}, {5, "BND"}, {15, col}, {25, format_number(b.value)}}) << '\n'; break;
      case MpsModel::Bound::kUpper: out << fixed_line({{2, "UP"}, {5, "BND"}, {15, col}, {25, format_number(b.value)}}) << '\n'; break;
      case MpsModel::Bound::kFree: out << fixed_line({{2, "FR"}, {5, "BND"}, {15, col}}) << '\n'; break;
      case MpsModel::Bound::kBinary: out << fixed_line({{2, "BV"}, {5, "BND"}, {15, col}}) << '\n'; break;
    }
  }
  out << "ENDATA\n";
}

void write_mps(const std::string& path, const MipModel& mip, const std::string& name) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_mps(out, to_mps(mip, name));
  if (!out) throw std::runtime_error("write failed: " + path);
}

MpsModel read_mps(std::istream& in) {
  MpsModel m;
  std::map<std::string, int, std::less<>> row_index, col_index;
  std::string line, section;
  int lineno = 0;
  bool in_int = false, objective_seen = false;
  auto need_number = [&](std::string_view s) {
    const auto v = parse_number<double>(s);
    if (!v) throw ParseError("bad number '" + std::string(s) + "'", lineno);
    return *v;
  };
  auto row_of = [&](std::string_view name) {
    if (name == m.objective_row) return -1;
    auto it = row_index.find(name);
    if (it == row_index.end()) throw ParseError("unknown row '" + std::string(name) + "'", lineno);
    return it->second;
  };
  auto col_of = [&](std::string_view name) {
    auto it = col_index.find(name);
    if (it == col_index.end()) throw ParseError("unknown column '" + std::string(name) + "'", lineno);
    return it->second;
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '*') continue;
    const auto tok = tokens(line);
    if (tok.empty()) continue;
    if (!std::isspace(static_cast<unsigned char>(line[0]))) {
      section = std::string(tok[0]);
      if (section == "NAME") m.name = tok.size() > 1 ? std::string(tok[1]) : "";
      else if (section == "ENDATA") break;
      else if (section != "ROWS" && section != "COLUMNS" && section != "RHS" && section != "BOUNDS")
        throw ParseError("unsupported section " + section, lineno);
      continue;
    }
    if (section == "ROWS") {
      if (tok.size() != 2) throw ParseError("row line needs sense and name", lineno);
      if (tok[0] == "N") {
        if (objective_seen) throw ParseError("second objective row", lineno);
        objective_seen = true;
        m.objective_row = std::string(tok[1]);
      } else if (tok[0] == "G" || tok[0] == "L" || tok[0] == "E") {
        row_index.emplace(std::string(tok[1]), static_cast<int>(m.rows.size()));
        m.rows.emplace_back(tok[1]);
        m.senses.push_back(tok[0][0]);
        m.rhs.push_back(0);
      } else {
        throw ParseError("bad row sense", lineno);
      }
    } else if (section == "COLUMNS") {
      if (tok.size() >= 3 && tok[1] == "'MARKER'") {
        const auto kind = tok.back();
        if (kind == "'INTORG'") in_int = true;
        else if (kind == "'INTEND'") in_int = false;
        else throw ParseError("bad marker", lineno);
        continue;
      }
      if (tok.size() != 3 && tok.size() != 5) throw ParseError("column line needs 3 or 5 fields", lineno);
      auto it = col_index.find(tok[0]);
      if (it == col_index.end()) {
        it = col_index.emplace(std::string(tok[0]), static_cast<int>(m.columns.size())).first;
        m.columns.emplace_back(tok[0]);
        m.integer.push_back(in_int);
        m.coefficients.emplace_back();
      }
      for (std::size_t t = 1; t + 1 < tok.size(); t += 2)
        m.coefficients[static_cast<std::size_t>(it->second)].emplace_back(row_of(tok[t]), need_number(tok[t + 1]));
    } else if (section == "RHS") {
      if (tok.size() != 3 && tok.size() != 5) throw ParseError("rhs line needs 3 or 5 fields", lineno);
      for (std::size_t t = 1; t + 1 < tok.size(); t += 2) {
        const int r = row_of(tok[t]);
        if (r < 0) throw ParseError("objective constant not supported", lineno);
        m.rhs[static_cast<std::size_t>(r)] = need_number(tok[t + 1]);
      }
    } else if (section == "BOUNDS") {
      if (tok.size() < 3) throw ParseError("bound line too short", lineno);
      const int c = col_of(tok[2]);
      if (tok[0] == "LO" || tok[0] == "UP") {
        if (tok.size() != 4) throw ParseError("bound needs a value", lineno);
        m.bounds.push_back({tok[0] == "LO" ? MpsModel::Bound::kLower : MpsModel::Bound::kUpper, c, need_number(tok[3])});
      } else if (tok[0] == "FR") {
        m.bounds.push_back({MpsModel::Bound::kFree, c, 0});
      } else if (tok[0] == "BV") {
        m.bounds.push_back({MpsModel::Bound::kBinary, c, 0});
      } else {
        throw ParseError("unsupported bound type " + std::string(tok[0]), lineno);
      }
    } else {
      throw ParseError("data outside a section", lineno);
    }
  }
  if (!objective_seen) throw ParseError("no objective row", lineno);
  return m;
}

nlohmann::json to_json(const DepthResult& r, const InfeasibleSystem& sys) {
  using nlohmann::json;
  auto number = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json j;
  j["schema"] = "tukey-depth-result";
  j["version"] = kResultSchemaVersion;
  j["solver"] = r.solver;
  j["depth"] = r.depth;
  j["status"] = to_string(r.status);
  j["certificate"] = to_string(r.certificate);
  j["cover"] = r.cover;
  j["direction"] = std::vector<double>(r.direction.data(), r.direction.data() + r.direction.size());
  j["epsilon"] = number(r.epsilon);
  j["margin"] = number(r.margin);
  j["lower_bound"] = r.lower_bound;
  j["upper_bound"] = r.upper_bound;
  j["heuristic_weight"] = r.heuristic_weight;
  j["instance"] = {{"dim", sys.dim},
                   {"distinct_rows", sys.size()},
                   {"total_weight", sys.total_weight()},
                   {"zero_offset", sys.zero_offset}};
  j["stats"] = {{"nodes", r.stats.nodes},         {"lp_solves", r.stats.lp_solves},
                {"cuts", r.stats.cuts},           {"mips", r.stats.mips},
                {"heuristic_lp_solves", r.stats.heuristic_lp_solves}, {"wall_seconds", r.stats.wall_seconds}};
  return j;
}

nlohmann::json to_json(const EngineConfig& cfg) {
  return {{"rule", to_string(cfg.rule)},
          {"selection", to_string(cfg.selection)},
          {"knapsack", to_string(cfg.knapsack)},
          {"strong_k", cfg.strong_k},
          {"cut_improve", cfg.cut_improve},
          {"c", cfg.c},
          {"epsilon", cfg.epsilon},
          {"int_tol", cfg.int_tol},
          {"cert_tol", cfg.cert_tol},
          {"eps_pos", cfg.eps_pos},
          {"heuristic", cfg.heuristic == CoverVariant::kFast ? "fast" : "full"},
          {"heuristic_k", cfg.heuristic_k},
          {"workers", cfg.workers},
          {"time_limit", cfg.time_limit},
          {"node_limit", cfg.node_limit}};
}

}  // namespace tukey
