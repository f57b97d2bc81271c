#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace l1ksvm {

// Dense samples x features table with per-sample class labels.
//
// Labels are stored as indices into class_names(). Class order is meaningful:
// for binary matrices class_names()[0] is the negative class (y = -1) and
// class_names()[1] the positive class (y = +1). Invalid cells (missing,
// non-numeric, NaN, Inf) are held as NaN until filter_features drops them.
//
// Immutable after construction; the constructor enforces the shape and
// uniqueness invariants.
class ExpressionMatrix {
 public:
  ExpressionMatrix() = default;
  ExpressionMatrix(Eigen::MatrixXd values, std::vector<std::string> feature_names,
                   std::vector<std::string> sample_ids, std::vector<int> labels,
                   std::vector<std::string> class_names);

  // Empty matrix sharing schema (features and classes) with `like`.
  static ExpressionMatrix empty_like(const ExpressionMatrix& like);

  const Eigen::MatrixXd& values() const noexcept { return values_; }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  const std::vector<std::string>& sample_ids() const noexcept { return sample_ids_; }
  const std::vector<int>& labels() const noexcept { return labels_; }
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }

  std::size_t n_samples() const noexcept { return sample_ids_.size(); }
  std::size_t n_features() const noexcept { return feature_names_.size(); }
  std::size_t n_classes() const noexcept { return class_names_.size(); }

  const std::string& label_name(std::size_t row) const { return class_names_[labels_[row]]; }
  // -1 when absent.
  int class_index(std::string_view name) const noexcept;
  std::vector<std::size_t> rows_of_class(int cls) const;
  std::size_t class_count(int cls) const noexcept;

  bool all_finite() const noexcept;

  ExpressionMatrix select_rows(std::span<const std::size_t> rows) const;
  ExpressionMatrix select_features(std::span<const std::size_t> cols) const;

  // +1 for the positive class, -1 for the negative one. Requires two classes.
  std::vector<double> signed_targets() const;

 private:
  Eigen::MatrixXd values_;
  std::vector<std::string> feature_names_;
  std::vector<std::string> sample_ids_;
  std::vector<int> labels_;
  std::vector<std::string> class_names_;
};

// Row-wise union. Both inputs must share feature names and class names.
ExpressionMatrix concat_rows(const ExpressionMatrix& a, const ExpressionMatrix& b);

}  // namespace l1ksvm
