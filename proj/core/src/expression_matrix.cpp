#include "l1ksvm/expression_matrix.hpp"

#include <unordered_set>

#include "l1ksvm/error.hpp"

namespace l1ksvm {

namespace {

void require_unique(const std::vector<std::string>& names, const char* what) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(names.size());
  for (const auto& n : names) {
    if (!seen.insert(n).second) throw Error(std::string("duplicate ") + what + " '" + n + "'");
  }
}

}  // namespace

ExpressionMatrix::ExpressionMatrix(Eigen::MatrixXd values, std::vector<std::string> feature_names,
                                   std::vector<std::string> sample_ids, std::vector<int> labels,
                                   std::vector<std::string> class_names)
    : values_(std::move(values)),
      feature_names_(std::move(feature_names)),
      sample_ids_(std::move(sample_ids)),
      labels_(std::move(labels)),
      class_names_(std::move(class_names)) {
  if (static_cast<std::size_t>(values_.rows()) != sample_ids_.size() ||
      sample_ids_.size() != labels_.size())
    throw Error("expression matrix: row count, sample ids and labels disagree");
  if (static_cast<std::size_t>(values_.cols()) != feature_names_.size())
    throw Error("expression matrix: column count and feature names disagree");
  for (int l : labels_) {
    if (l < 0 || static_cast<std::size_t>(l) >= class_names_.size())
      throw Error("expression matrix: label index out of range");
  }
  require_unique(feature_names_, "feature name");
  require_unique(sample_ids_, "sample id");
  require_unique(class_names_, "class name");
}

ExpressionMatrix ExpressionMatrix::empty_like(const ExpressionMatrix& like) {
  return ExpressionMatrix(Eigen::MatrixXd(0, like.n_features()), like.feature_names_, {}, {},
                          like.class_names_);
}

int ExpressionMatrix::class_index(std::string_view name) const noexcept {
  for (std::size_t c = 0; c < class_names_.size(); ++c)
    if (class_names_[c] == name) return static_cast<int>(c);
  return -1;
}

std::vector<std::size_t> ExpressionMatrix::rows_of_class(int cls) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == cls) rows.push_back(i);
  return rows;
}

std::size_t ExpressionMatrix::class_count(int cls) const noexcept {
  std::size_t n = 0;
  for (int l : labels_) n += (l == cls);
  return n;
}

bool ExpressionMatrix::all_finite() const noexcept { return values_.allFinite(); }

ExpressionMatrix ExpressionMatrix::select_rows(std::span<const std::size_t> rows) const {
  Eigen::MatrixXd v(rows.size(), values_.cols());
  std::vector<std::string> ids;
  std::vector<int> labels;
  ids.reserve(rows.size());
  labels.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= n_samples()) throw Error("select_rows: row index out of range");
    v.row(k) = values_.row(rows[k]);
    ids.push_back(sample_ids_[rows[k]]);
    labels.push_back(labels_[rows[k]]);
  }
  return ExpressionMatrix(std::move(v), feature_names_, std::move(ids), std::move(labels),
                          class_names_);
}

ExpressionMatrix ExpressionMatrix::select_features(std::span<const std::size_t> cols) const {
  Eigen::MatrixXd v(values_.rows(), cols.size());
  std::vector<std::string> names;
  names.reserve(cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (cols[k] >= n_features()) throw Error("select_features: column index out of range");
    v.col(k) = values_.col(cols[k]);
    names.push_back(feature_names_[cols[k]]);
  }
  return ExpressionMatrix(std::move(v), std::move(names), sample_ids_, labels_, class_names_);
}

std::vector<double> ExpressionMatrix::signed_targets() const {
  if (n_classes() != 2) throw Error("expected a binary matrix, found " + std::to_string(n_classes()) + " classes");
  std::vector<double> y(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) y[i] = labels_[i] == 1 ? 1.0 : -1.0;
  return y;
}

ExpressionMatrix concat_rows(const ExpressionMatrix& a, const ExpressionMatrix& b) {
  if (a.feature_names() != b.feature_names()) throw Error("concat_rows: feature names differ");
  if (a.class_names() != b.class_names()) throw Error("concat_rows: class names differ");
  Eigen::MatrixXd v(a.n_samples() + b.n_samples(), a.n_features());
  v.topRows(a.n_samples()) = a.values();
  v.bottomRows(b.n_samples()) = b.values();
  std::vector<std::string> ids = a.sample_ids();
  ids.insert(ids.end(), b.sample_ids().begin(), b.sample_ids().end());
  std::vector<int> labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  return ExpressionMatrix(std::move(v), a.feature_names(), std::move(ids), std::move(labels),
                          a.class_names());
}

}  // namespace l1ksvm
