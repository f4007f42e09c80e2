#include "pmlfs/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pmlfs/errors.hpp"
#include "pmlfs/rng.hpp"

namespace pmlfs {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string> default_names(std::string_view prefix, std::size_t n) {
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) names[i] = std::string(prefix) + std::to_string(i);
  return names;
}

}  // namespace

void validate(const PmlDataset& ds) {
  if (ds.x.rows() != ds.y.rows()) {
    throw DataError("feature matrix has " + std::to_string(ds.x.rows()) +
                    " rows but label matrix has " + std::to_string(ds.y.rows()));
  }
  if (ds.x.rows() == 0) throw DataError("dataset has no instances");
  if (!all_finite(ds.x)) throw DataError("feature matrix contains non-finite values");
  for (std::size_t i = 0; i < ds.y.rows(); ++i) {
    bool any = false;
    for (std::size_t j = 0; j < ds.y.cols(); ++j) {
      const double v = ds.y(i, j);
      if (v != 0.0 && v != 1.0) {
        throw DataError("label (" + std::to_string(i) + ", " + std::to_string(j) +
                        ") is not 0/1");
      }
      any = any || v == 1.0;
    }
    if (!any) throw DataError("instance " + std::to_string(i) + " has no candidate label");
  }
  if (ds.feature_names.size() != ds.x.cols() || ds.label_names.size() != ds.y.cols()) {
    throw DataError("name lists do not match matrix widths");
  }
}

PmlDataset make_dataset(Matrix x, Matrix y, std::vector<std::string> feature_names,
                        std::vector<std::string> label_names) {
  PmlDataset ds{std::move(x), std::move(y), std::move(feature_names), std::move(label_names)};
  if (ds.feature_names.empty()) ds.feature_names = default_names("f", ds.x.cols());
  if (ds.label_names.empty()) ds.label_names = default_names("l", ds.y.cols());
  validate(ds);
  return ds;
}

PmlDataset subset(const PmlDataset& ds, std::span<const std::size_t> rows) {
  return PmlDataset{select_rows(ds.x, rows), select_rows(ds.y, rows), ds.feature_names,
                    ds.label_names};
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());

  CsvTable table;
  std::vector<double> values;
  std::size_t width = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_line(line);
    double first;
    if (rows == 0 && table.header.empty() && !parse_double(cells.front(), first)) {
      table.header = std::move(cells);
      width = table.header.size();
      continue;
    }
    if (width == 0) width = cells.size();
    if (cells.size() != width) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(width) + " columns, found " + std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v;
      if (!parse_double(cells[c], v) || !std::isfinite(v)) {
        throw DataError(path.string() + ":" + std::to_string(line_no) + ": column " +
                        std::to_string(c + 1) + ": invalid number '" + cells[c] + "'");
      }
      values.push_back(v);
    }
    ++rows;
  }
  table.values = Matrix(rows, width, std::move(values));
  return table;
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_csv(const std::filesystem::path& path, const Matrix& values,
               std::span<const std::string> header) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  if (!header.empty()) {
    for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
    out << '\n';
  }
  for (std::size_t i = 0; i < values.rows(); ++i) {
    for (std::size_t j = 0; j < values.cols(); ++j) {
      out << (j ? "," : "") << format_number(values(i, j));
    }
    out << '\n';
  }
}

namespace {

void require_binary(const Matrix& labels, const std::filesystem::path& path) {
  for (std::size_t i = 0; i < labels.rows(); ++i) {
    for (std::size_t j = 0; j < labels.cols(); ++j) {
      const double v = labels(i, j);
      if (v != 0.0 && v != 1.0) {
        throw DataError(path.string() + ": row " + std::to_string(i + 1) + ", column " +
                        std::to_string(j + 1) + ": label must be 0 or 1");
      }
    }
  }
}

}  // namespace

Matrix load_label_csv(const std::filesystem::path& path) {
  auto table = read_csv(path);
  require_binary(table.values, path);
  return std::move(table.values);
}

PmlDataset load_csv_pair(const std::filesystem::path& x_path, const std::filesystem::path& y_path) {
  auto x = read_csv(x_path);
  auto y = read_csv(y_path);
  if (x.values.rows() != y.values.rows()) {
    throw DataError(x_path.string() + " has " + std::to_string(x.values.rows()) + " rows but " +
                    y_path.string() + " has " + std::to_string(y.values.rows()));
  }
  require_binary(y.values, y_path);
  return make_dataset(std::move(x.values), std::move(y.values), std::move(x.header),
                      std::move(y.header));
}

PmlDataset normalize_minmax(const PmlDataset& ds) {
  PmlDataset out = ds;
  for (std::size_t j = 0; j < ds.x.cols(); ++j) {
    double lo = ds.x.rows() ? ds.x(0, j) : 0.0;
    double hi = lo;
    for (std::size_t i = 0; i < ds.x.rows(); ++i) {
      lo = std::min(lo, ds.x(i, j));
      hi = std::max(hi, ds.x(i, j));
    }
    const double range = hi - lo;
    for (std::size_t i = 0; i < ds.x.rows(); ++i) {
      out.x(i, j) = range > 0.0 ? (ds.x(i, j) - lo) / range : 0.0;
    }
  }
  return out;
}

PartialLabelData inject_candidate_noise(const PmlDataset& ds, double rate, std::uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw ConfigError("noise rate must lie in [0, 1], got " + format_number(rate));
  }
  PartialLabelData out{ds, ds.y};
  Rng rng(seed);
  for (double& v : out.partial.y.data()) {
    const double u = rng.uniform();
    if (v == 0.0 && u < rate) v = 1.0;
  }
  return out;
}

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] == fold) idx.push_back(i);
  return idx;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] != fold) idx.push_back(i);
  return idx;
}

FoldPlan make_folds(std::size_t n, std::size_t n_folds, std::uint64_t seed) {
  if (n_folds < 2) throw ConfigError("need at least 2 folds, got " + std::to_string(n_folds));
  if (n < n_folds) {
    throw ConfigError("cannot split " + std::to_string(n) + " instances into " +
                      std::to_string(n_folds) + " folds");
  }
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  Rng rng(seed);
  rng.shuffle(perm);

  FoldPlan plan{n_folds, std::vector<std::size_t>(n), seed};
  for (std::size_t pos = 0; pos < n; ++pos) plan.assignments[perm[pos]] = pos % n_folds;
  return plan;
}

PlantedDataset make_planted_dataset(const PlantedConfig& cfg) {
  if (cfg.n_informative == 0 || cfg.n_informative > cfg.d || cfg.l == 0 ||
      cfg.n_distractor_groups == 0 || cfg.n_informative == cfg.d) {
    throw ConfigError("planted dataset needs 0 < informative < d and at least one label");
  }
  Rng rng(cfg.seed);
  const std::size_t n_inf = cfg.n_informative;

  Matrix signal(cfg.n, n_inf);
  Matrix distractor(cfg.n, cfg.n_distractor_groups);
  for (double& v : signal.data()) v = rng.uniform();
  for (double& v : distractor.data()) v = rng.uniform();

  // column_of[j] is the source of feature j: signal s < n_inf, else a distractor group.
  std::vector<std::size_t> column_of(cfg.d);
  for (std::size_t j = 0; j < cfg.d; ++j) column_of[j] = j;
  rng.shuffle(column_of);
  std::vector<std::size_t> informative;
  for (std::size_t j = 0; j < cfg.d; ++j)
    if (column_of[j] < n_inf) informative.push_back(j);

  Matrix x(cfg.n, cfg.d);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    for (std::size_t j = 0; j < cfg.d; ++j) {
      const std::size_t src = column_of[j];
      const double base = src < n_inf ? signal(i, src)
                                      : distractor(i, (src - n_inf) % cfg.n_distractor_groups);
      x(i, j) = base + cfg.feature_noise * rng.uniform();
    }
  }

  // Label j fires on the upper tail of one informative signal, or of the
  // mean of two neighbouring signals once every signal has its own label.
  Matrix y(cfg.n, cfg.l);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    for (std::size_t j = 0; j < cfg.l; ++j) {
      const std::size_t a = j % n_inf;
      const std::size_t b = (j + 1 + j / n_inf) % n_inf;
      const double s = j < n_inf ? signal(i, a) : 0.5 * (signal(i, a) + signal(i, b));
      const double threshold = j < n_inf ? 0.7 : 0.62;
      y(i, j) = s > threshold ? 1.0 : 0.0;
    }
    bool any = false;
    for (double v : y.row(i)) any = any || v == 1.0;
    if (!any) {
      // Every instance needs a candidate; give it the label of its strongest signal.
      std::size_t best = 0;
      for (std::size_t a = 1; a < n_inf; ++a)
        if (signal(i, a) > signal(i, best)) best = a;
      y(i, best % cfg.l) = 1.0;
    }
  }
  return {normalize_minmax(make_dataset(std::move(x), std::move(y))), std::move(informative)};
}

}  // namespace pmlfs
