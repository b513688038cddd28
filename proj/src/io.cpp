#include "mdu/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mdu/version.hpp"

namespace mdu {

namespace {

using json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::vector<std::vector<std::string>> read_csv_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    rows.push_back(split_csv(line));
  }
  if (rows.empty()) throw DataError(path + ": no data");
  return rows;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtod(s.c_str(), &end);
  return errno == 0 && end == s.c_str() + s.size();
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool response_token(const std::string& s) {
  return s.empty() || s == "0" || s == "1" || s == "NA";
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path dir = target.parent_path();
  if (dir.empty()) dir = ".";
  fs::path temp = dir / (target.filename().string() + ".tmp" +
                         std::to_string(static_cast<unsigned long>(::getpid())));
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + temp.string());
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(temp, ec);
      throw DataError("write failed for " + temp.string());
    }
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) {
    fs::remove(temp, ec);
    throw DataError("cannot move output into place at " + path);
  }
}

ResponseMatrix load_response_csv(const std::string& path) {
  auto rows = read_csv_rows(path);

  // A leading ID column announces itself with a non-numeric cell in every row;
  // a header row with a non-numeric cell anywhere after the optional ID.
  bool id_column = true;
  for (const auto& row : rows)
    if (response_token(row.front())) {
      id_column = false;
      break;
    }
  const std::size_t first_col = id_column ? 1 : 0;
  bool header = false;
  for (std::size_t c = first_col; c < rows[0].size(); ++c)
    if (!response_token(rows[0][c])) {
      header = true;
      break;
    }

  const std::size_t first_row = header ? 1 : 0;
  if (first_row >= rows.size()) throw DataError(path + ": header but no data rows");
  const std::size_t n = rows.size() - first_row;
  if (rows[first_row].size() <= first_col) throw DataError(path + ": no data columns");
  const std::size_t j = rows[first_row].size() - first_col;

  BinaryMatrix values(n, j), mask(n, j);
  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = rows[r + first_row];
    if (row.size() - first_col != j)
      throw DataError(path + ": row " + std::to_string(r + first_row + 1) + " has " +
                      std::to_string(row.size() - first_col) + " cells, expected " +
                      std::to_string(j));
    for (std::size_t c = 0; c < j; ++c) {
      const std::string& cell = row[c + first_col];
      if (!response_token(cell))
        throw DataError(path + ": row " + std::to_string(r + first_row + 1) + ", column " +
                        std::to_string(c + first_col + 1) + ": expected 0, 1, NA or empty, got '" +
                        cell + "'");
      const bool observed = cell == "0" || cell == "1";
      mask(static_cast<Index>(r), static_cast<Index>(c)) = observed ? 1 : 0;
      values(static_cast<Index>(r), static_cast<Index>(c)) = cell == "1" ? 1 : 0;
    }
  }
  return ResponseMatrix(std::move(values), std::move(mask));
}

void save_response_csv(const ResponseMatrix& data, const std::string& path) {
  std::ostringstream out;
  for (Index i = 0; i < data.n_persons(); ++i) {
    for (Index j = 0; j < data.n_items(); ++j) {
      if (j) out << ',';
      if (data.mask(i, j))
        out << (data.values(i, j) ? '1' : '0');
      else
        out << "NA";
    }
    out << '\n';
  }
  write_file_atomic(path, out.str());
}

void save_configuration(const Configuration& config, const std::string& path) {
  std::ostringstream out;
  out << "set,index";
  for (Index k = 0; k < config.dim(); ++k) out << ",coord_" << k + 1;
  out << '\n';
  auto rows = [&](const Matrix& m, const char* set_name) {
    for (Index r = 0; r < m.rows(); ++r) {
      out << set_name << ',' << r + 1;
      for (Index k = 0; k < m.cols(); ++k) out << ',' << format_double(m(r, k));
      out << '\n';
    }
  };
  rows(config.persons, "person");
  rows(config.items, "item");
  write_file_atomic(path, out.str());
}

Configuration load_configuration(const std::string& path, std::optional<double> expect_bound) {
  auto rows = read_csv_rows(path);
  if (rows[0].size() < 3 || rows[0][0] != "set" || rows[0][1] != "index")
    throw DataError(path + ": expected header 'set,index,coord_1,...'");
  const std::size_t dim = rows[0].size() - 2;
  std::vector<Vector> persons, items;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != dim + 2)
      throw DataError(path + ": row " + std::to_string(r + 1) + " has " +
                      std::to_string(row.size()) + " cells, expected " + std::to_string(dim + 2));
    Vector point(static_cast<Index>(dim));
    for (std::size_t k = 0; k < dim; ++k) {
      double v;
      if (!parse_double(row[k + 2], v))
        throw DataError(path + ": row " + std::to_string(r + 1) + ": bad coordinate '" +
                        row[k + 2] + "'");
      point(static_cast<Index>(k)) = v;
    }
    double idx;
    if (!parse_double(row[1], idx) || idx < 1)
      throw DataError(path + ": row " + std::to_string(r + 1) + ": bad index '" + row[1] + "'");
    if (row[0] == "person")
      persons.push_back(std::move(point));
    else if (row[0] == "item")
      items.push_back(std::move(point));
    else
      throw DataError(path + ": row " + std::to_string(r + 1) + ": set must be person or item");
  }
  if (persons.empty() || items.empty())
    throw DataError(path + ": need at least one person row and one item row");

  Matrix P(static_cast<Index>(persons.size()), static_cast<Index>(dim));
  for (std::size_t r = 0; r < persons.size(); ++r) P.row(static_cast<Index>(r)) = persons[r];
  Matrix A(static_cast<Index>(items.size()), static_cast<Index>(dim));
  for (std::size_t r = 0; r < items.size(); ++r) A.row(static_cast<Index>(r)) = items[r];

  double bound = 0.0;
  for (Index r = 0; r < P.rows(); ++r) bound = std::max(bound, P.row(r).norm());
  for (Index r = 0; r < A.rows(); ++r) bound = std::max(bound, A.row(r).norm());
  if (expect_bound) {
    if (bound > *expect_bound + kBoundTol)
      throw DataError(path + ": a point lies outside the radius-" +
                      std::to_string(*expect_bound) + " ball (max norm " + std::to_string(bound) +
                      ")");
    bound = *expect_bound;
  }
  return Configuration(std::move(P), std::move(A), bound);
}

void save_labels_csv(const LabelTable& labels, const std::string& path) {
  std::ostringstream out;
  out << "set,index,label\n";
  for (std::size_t i = 0; i < labels.person_labels.size(); ++i)
    out << "person," << i + 1 << ',' << labels.person_labels[i] << '\n';
  for (std::size_t j = 0; j < labels.item_labels.size(); ++j)
    out << "item," << j + 1 << ',' << labels.item_labels[j] << '\n';
  write_file_atomic(path, out.str());
}

LabelTable load_labels_csv(const std::string& path) {
  auto rows = read_csv_rows(path);
  std::size_t first = rows[0].size() >= 3 && rows[0][0] == "set" ? 1 : 0;
  LabelTable table;
  for (std::size_t r = first; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 3)
      throw DataError(path + ": row " + std::to_string(r + 1) + " must be set,index,label");
    double label;
    if (!parse_double(row[2], label) || label < 1)
      throw DataError(path + ": row " + std::to_string(r + 1) + ": bad label '" + row[2] + "'");
    if (row[0] == "person")
      table.person_labels.push_back(static_cast<int>(label));
    else if (row[0] == "item")
      table.item_labels.push_back(static_cast<int>(label));
    else
      throw DataError(path + ": row " + std::to_string(r + 1) + ": set must be person or item");
  }
  if (table.person_labels.empty() && table.item_labels.empty())
    throw DataError(path + ": no label rows");
  return table;
}

std::vector<double> load_column_csv(const std::string& path) {
  auto rows = read_csv_rows(path);
  std::vector<double> values;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != 1)
      throw DataError(path + ": expected a single column, row " + std::to_string(r + 1) +
                      " has " + std::to_string(rows[r].size()) + " cells");
    double v;
    if (!parse_double(rows[r][0], v)) {
      if (r == 0) continue;  // header
      throw DataError(path + ": row " + std::to_string(r + 1) + ": bad number '" + rows[r][0] +
                      "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw DataError(path + ": no numeric rows");
  return values;
}

std::string RunReport::to_json() const {
  json j;
  j["version"] = version;
  j["seed"] = seed;
  j["options"] = {{"dim", options.dim},
                  {"bound", options.bound},
                  {"delta", options.delta},
                  {"max_iters", options.max_iters},
                  {"tol", options.tol},
                  {"n_starts", options.n_starts},
                  {"armijo_c", options.armijo_c},
                  {"shrink", options.shrink},
                  {"max_halvings", options.max_halvings},
                  {"threads", options.threads}};
  j["final_objective"] = final_objective;
  j["iterations"] = iterations;
  j["converged"] = converged;
  j["start_index"] = start_index;
  j["per_start_objectives"] = per_start_objectives;
  j["per_start_iterations"] = per_start_iterations;
  j["per_start_converged"] = per_start_converged;
  j["wall_seconds"] = wall_seconds;
  return j.dump(2) + "\n";
}

RunReport RunReport::from_json(const std::string& text) {
  try {
    json j = json::parse(text);
    RunReport r;
    r.version = j.at("version").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    const json& o = j.at("options");
    r.options.dim = o.at("dim").get<Index>();
    r.options.bound = o.at("bound").get<double>();
    r.options.delta = o.at("delta").get<double>();
    r.options.max_iters = o.at("max_iters").get<int>();
    r.options.tol = o.at("tol").get<double>();
    r.options.n_starts = o.at("n_starts").get<int>();
    r.options.armijo_c = o.at("armijo_c").get<double>();
    r.options.shrink = o.at("shrink").get<double>();
    r.options.max_halvings = o.at("max_halvings").get<int>();
    r.options.threads = o.at("threads").get<int>();
    r.options.seed = r.seed;
    r.final_objective = j.at("final_objective").get<double>();
    r.iterations = j.at("iterations").get<int>();
    r.converged = j.at("converged").get<bool>();
    r.start_index = j.at("start_index").get<int>();
    r.per_start_objectives = j.at("per_start_objectives").get<std::vector<double>>();
    r.per_start_iterations = j.at("per_start_iterations").get<std::vector<int>>();
    r.per_start_converged = j.at("per_start_converged").get<std::vector<bool>>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("bad run report JSON: ") + e.what());
  }
}

StudySpec load_study_spec_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  try {
    json j = json::parse(in);
    StudySpec spec;
    if (j.contains("j_values")) spec.j_values = j.at("j_values").get<std::vector<Index>>();
    if (j.contains("n_rule")) spec.n_rule = j.at("n_rule").get<Index>();
    if (j.contains("true_dim")) spec.true_dim = j.at("true_dim").get<Index>();
    if (j.contains("fit_dim")) spec.fit_dim = j.at("fit_dim").get<Index>();
    if (j.contains("m_true")) spec.m_true = j.at("m_true").get<double>();
    if (j.contains("m_fit")) spec.m_fit = j.at("m_fit").get<double>();
    if (j.contains("delta")) spec.delta = j.at("delta").get<double>();
    if (j.contains("replications")) spec.replications = j.at("replications").get<int>();
    if (j.contains("n_starts")) spec.n_starts = j.at("n_starts").get<int>();
    if (j.contains("missing_n")) spec.missing_n = j.at("missing_n").get<double>();
    if (j.contains("missing_frac")) spec.missing_frac = j.at("missing_frac").get<double>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tol")) spec.tol = j.at("tol").get<double>();
    if (j.contains("max_iters")) spec.max_iters = j.at("max_iters").get<int>();
    if (j.contains("threads")) spec.threads = j.at("threads").get<int>();
    if (spec.missing_n && spec.missing_frac)
      throw DataError(path + ": set missing_n or missing_frac, not both");
    return spec;
  } catch (const json::exception& e) {
    throw DataError(path + ": bad study spec JSON: " + e.what());
  }
}

std::string study_report_csv(const StudyReport& report) {
  std::ostringstream out;
  out << "j,n_persons,observed_frac,replications,dist_q25,dist_q50,dist_q75,"
         "config_q25,config_q50,config_q75,dominance_rate,mean_fit_seconds,total_seconds\n";
  for (const auto& cell : report.cells) {
    double dom = 0.0;
    for (bool d : cell.dominance) dom += d ? 1.0 : 0.0;
    dom /= static_cast<double>(cell.dominance.size());
    out << cell.j << ',' << cell.n_persons << ',' << format_double(cell.observed_frac) << ','
        << cell.distance_losses.size();
    for (double q : cell.distance_quantiles) out << ',' << format_double(q);
    for (double q : cell.config_quantiles) out << ',' << format_double(q);
    out << ',' << format_double(dom) << ',' << format_double(cell.mean_fit_seconds) << ','
        << format_double(cell.total_seconds) << '\n';
  }
  return out.str();
}

std::string study_report_summary(const StudyReport& report) {
  const StudySpec& s = report.spec;
  std::ostringstream out;
  out << "study: K=" << s.true_dim << " fit K+=" << s.fit_dim << "  M_true=" << s.m_true
      << " M_fit=" << s.m_fit << " delta=" << s.delta << "  replications=" << s.replications
      << " starts=" << s.n_starts << " seed=" << s.seed << '\n';
  for (const auto& cell : report.cells) {
    int dom = 0;
    for (bool d : cell.dominance) dom += d ? 1 : 0;
    out << "  J=" << cell.j << " N=" << cell.n_persons << " observed=" << cell.observed_frac * 100
        << "%  distance loss " << cell.distance_quantiles[0] << '/' << cell.distance_quantiles[1]
        << '/' << cell.distance_quantiles[2] << "  config loss " << cell.config_quantiles[0] << '/'
        << cell.config_quantiles[1] << '/' << cell.config_quantiles[2] << "  dominance " << dom
        << '/' << cell.dominance.size() << "  " << cell.total_seconds << " s\n";
  }
  return out.str();
}

}  // namespace mdu
