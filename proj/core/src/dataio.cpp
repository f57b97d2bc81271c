#include "l1ksvm/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "l1ksvm/error.hpp"
#include "l1ksvm/rng.hpp"

namespace l1ksvm {

namespace {

char delimiter(TableFormat f) { return f == TableFormat::tsv ? '\t' : ','; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits one record. Double quotes group a field and "" escapes a quote;
// quoted fields may not span lines.
std::vector<std::string> split_record(std::string_view line, char delim, std::size_t line_no) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"' && trim(cur).empty()) {
      cur.clear();
      quoted = was_quoted = true;
    } else if (ch == delim) {
      out.push_back(was_quoted ? cur : std::string(trim(cur)));
      cur.clear();
      was_quoted = false;
    } else {
      cur.push_back(ch);
    }
  }
  if (quoted) throw LoadError(line_no, "unterminated quoted field");
  out.push_back(was_quoted ? cur : std::string(trim(cur)));
  return out;
}

double parse_cell(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    return std::numeric_limits<double>::quiet_NaN();
  return v;
}

std::string quote_if_needed(const std::string& s, char delim) {
  if (s.find_first_of(std::string{delim, '"', '\n'}) == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q.push_back('"');
    q.push_back(c);
  }
  q.push_back('"');
  return q;
}

void append_double(std::string& out, double v) {
  if (!std::isfinite(v)) {
    // Invalid cells are written back as empty fields.
    return;
  }
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

}  // namespace

TableFormat format_from_extension(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return (ext == ".tsv" || ext == ".tab" || ext == ".txt") ? TableFormat::tsv : TableFormat::csv;
}

ExpressionMatrix parse_expression_table(std::string_view text, const LoadOptions& opts) {
  const char delim = delimiter(opts.format);
  std::size_t pos = 0;
  std::size_t line_no = 0;
  auto next_line = [&](std::string_view& line) {
    while (pos < text.size()) {
      const auto end = text.find('\n', pos);
      line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
      pos = end == std::string_view::npos ? text.size() : end + 1;
      ++line_no;
      if (!trim(line).empty()) return true;
    }
    return false;
  };

  std::string_view line;
  if (!next_line(line)) throw LoadError(1, "empty file: missing header");
  if (line.size() >= 3 && line.substr(0, 3) == "\xEF\xBB\xBF") line.remove_prefix(3);
  const auto header = split_record(line, delim, line_no);
  const std::size_t header_line = line_no;

  std::ptrdiff_t id_col = -1;
  std::ptrdiff_t label_col = -1;
  std::vector<std::size_t> feature_cols;
  std::vector<std::string> feature_names;
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto& name = header[c];
    if (name.empty()) throw LoadError(header_line, "empty column name at position " + std::to_string(c + 1));
    if (!seen.emplace(name, c).second) throw LoadError(header_line, "duplicate column name '" + name + "'");
    if (name == opts.id_column) {
      id_col = static_cast<std::ptrdiff_t>(c);
    } else if (name == opts.label_column) {
      label_col = static_cast<std::ptrdiff_t>(c);
    } else {
      feature_cols.push_back(c);
      feature_names.push_back(name);
    }
  }
  if (label_col < 0) throw LoadError(header_line, "missing label column '" + opts.label_column + "'");
  if (id_col < 0) throw LoadError(header_line, "missing sample id column '" + opts.id_column + "'");
  if (feature_cols.empty()) throw LoadError(header_line, "header declares no feature columns");

  std::vector<std::vector<double>> rows;
  std::vector<std::string> ids;
  std::vector<int> labels;
  std::vector<std::string> class_names;
  std::unordered_map<std::string, int> class_of;
  std::unordered_map<std::string, std::size_t> id_line;

  while (next_line(line)) {
    const auto fields = split_record(line, delim, line_no);
    if (fields.size() != header.size())
      throw LoadError(line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                   std::to_string(fields.size()));
    const auto& id = fields[id_col];
    if (id.empty()) throw LoadError(line_no, "empty sample id");
    if (auto [it, fresh] = id_line.emplace(id, line_no); !fresh)
      throw LoadError(line_no, "duplicate sample id '" + id + "' (first seen on line " + std::to_string(it->second) + ")");
    const auto& label = fields[label_col];
    if (label.empty()) throw LoadError(line_no, "empty label");
    auto [it, fresh] = class_of.emplace(label, static_cast<int>(class_names.size()));
    if (fresh) class_names.push_back(label);
    labels.push_back(it->second);
    ids.push_back(id);
    std::vector<double> row(feature_cols.size());
    for (std::size_t k = 0; k < feature_cols.size(); ++k) row[k] = parse_cell(fields[feature_cols[k]]);
    rows.push_back(std::move(row));
  }

  Eigen::MatrixXd values(rows.size(), feature_names.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < feature_names.size(); ++j) values(i, j) = rows[i][j];
  return ExpressionMatrix(std::move(values), std::move(feature_names), std::move(ids), std::move(labels),
                          std::move(class_names));
}

ExpressionMatrix load_expression_table(const std::filesystem::path& path, const LoadOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open expression table '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_expression_table(ss.str(), opts);
}

std::string format_expression_table(const ExpressionMatrix& m, TableFormat format) {
  const char delim = delimiter(format);
  std::string out;
  out.reserve(16 * (m.n_features() + 2) * (m.n_samples() + 1));
  out += "sample_id";
  out += delim;
  out += "label";
  for (const auto& f : m.feature_names()) {
    out += delim;
    out += quote_if_needed(f, delim);
  }
  out += '\n';
  for (std::size_t i = 0; i < m.n_samples(); ++i) {
    out += quote_if_needed(m.sample_ids()[i], delim);
    out += delim;
    out += quote_if_needed(m.label_name(i), delim);
    for (std::size_t j = 0; j < m.n_features(); ++j) {
      out += delim;
      append_double(out, m.values()(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_expression_table(const std::filesystem::path& path, const ExpressionMatrix& m, TableFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << format_expression_table(m, format);
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

ExpressionMatrix filter_features(const ExpressionMatrix& m, std::string_view required_prefix) {
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < m.n_features(); ++j) {
    if (!m.feature_names()[j].starts_with(required_prefix)) continue;
    if (!m.values().col(j).allFinite()) continue;
    keep.push_back(j);
  }
  if (keep.empty()) throw Error("filter_features: no feature with prefix '" + std::string(required_prefix) + "' survives");
  return m.select_features(keep);
}

ExpressionMatrix balance_classes(const ExpressionMatrix& m, std::size_t n_per_class, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < m.n_classes(); ++c) {
    const auto rows = m.rows_of_class(static_cast<int>(c));
    if (rows.size() < n_per_class)
      throw Error("balance_classes: class '" + m.class_names()[c] + "' has " + std::to_string(rows.size()) +
                  " samples, need " + std::to_string(n_per_class));
    for (auto k : sample_without_replacement(rng, rows.size(), n_per_class)) keep.push_back(rows[k]);
  }
  std::sort(keep.begin(), keep.end());
  return m.select_rows(keep);
}

ExpressionMatrix make_scenario(const ExpressionMatrix& m, std::string_view class_a, std::string_view class_b) {
  if (class_a == class_b) throw Error("make_scenario: degenerate scenario '" + std::string(class_a) + "' vs itself");
  const int a = m.class_index(class_a);
  const int b = m.class_index(class_b);
  if (a < 0) throw Error("make_scenario: unknown class '" + std::string(class_a) + "'");
  if (b < 0) throw Error("make_scenario: unknown class '" + std::string(class_b) + "'");
  Eigen::Index n = 0;
  for (int l : m.labels()) n += (l == a || l == b);
  Eigen::MatrixXd values(n, m.n_features());
  std::vector<std::string> ids;
  std::vector<int> labels;
  Eigen::Index k = 0;
  for (std::size_t i = 0; i < m.n_samples(); ++i) {
    const int l = m.labels()[i];
    if (l != a && l != b) continue;
    values.row(k++) = m.values().row(i);
    ids.push_back(m.sample_ids()[i]);
    labels.push_back(l == b ? 1 : 0);
  }
  return ExpressionMatrix(std::move(values), m.feature_names(), std::move(ids), std::move(labels),
                          {std::string(class_a), std::string(class_b)});
}

ScenarioSplit split_train_test(const ExpressionMatrix& m, std::size_t n_train_per_class, std::uint64_t seed) {
  if (m.n_classes() != 2) throw Error("split_train_test: matrix is not binary");
  Rng rng(seed);
  std::vector<bool> in_train(m.n_samples(), false);
  for (int c = 0; c < 2; ++c) {
    const auto rows = m.rows_of_class(c);
    if (rows.size() <= n_train_per_class)
      throw Error("split_train_test: class '" + m.class_names()[c] + "' has " + std::to_string(rows.size()) +
                  " samples; need more than " + std::to_string(n_train_per_class) + " to leave a test set");
    for (auto k : sample_without_replacement(rng, rows.size(), n_train_per_class)) in_train[rows[k]] = true;
  }
  std::vector<std::size_t> train_rows, test_rows;
  for (std::size_t i = 0; i < m.n_samples(); ++i) (in_train[i] ? train_rows : test_rows).push_back(i);
  return {m.select_rows(train_rows), m.select_rows(test_rows), m.class_names()[0], m.class_names()[1],
          n_train_per_class};
}

std::uint64_t split_digest(const ScenarioSplit& split) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0xff;
    h *= 0x100000001b3ULL;
  };
  for (const auto& id : split.train.sample_ids()) feed(id);
  feed("|");
  for (const auto& id : split.test.sample_ids()) feed(id);
  return h;
}

}  // namespace l1ksvm
