#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "l1ksvm/expression_matrix.hpp"

namespace l1ksvm {

enum class TableFormat { csv, tsv };

// Picks tsv for ".tsv"/".tab"/".txt" extensions, csv otherwise.
TableFormat format_from_extension(const std::filesystem::path& path);

struct LoadOptions {
  TableFormat format = TableFormat::csv;
  std::string label_column = "label";
  std::string id_column = "sample_id";
};

// Reads a labeled expression table. Every column other than the id and label
// columns is a feature. Missing or non-numeric cells become NaN.
// Throws LoadError (with line number) on malformed input.
ExpressionMatrix load_expression_table(const std::filesystem::path& path, const LoadOptions& opts = {});
ExpressionMatrix parse_expression_table(std::string_view text, const LoadOptions& opts = {});

// Canonical layout: header `sample_id,label,<features...>`, shortest
// round-trip decimal formatting, "." separator.
void write_expression_table(const std::filesystem::path& path, const ExpressionMatrix& m,
                            TableFormat format = TableFormat::csv);
std::string format_expression_table(const ExpressionMatrix& m, TableFormat format = TableFormat::csv);

// Keeps columns named with `required_prefix` that are finite in every sample.
ExpressionMatrix filter_features(const ExpressionMatrix& m, std::string_view required_prefix);

// Exactly n_per_class samples of every class, drawn without replacement;
// original relative row order is kept.
ExpressionMatrix balance_classes(const ExpressionMatrix& m, std::size_t n_per_class, std::uint64_t seed);

// Binary matrix of the samples labeled class_a or class_b; class_b becomes the
// positive class.
ExpressionMatrix make_scenario(const ExpressionMatrix& m, std::string_view class_a, std::string_view class_b);

struct ScenarioSplit {
  ExpressionMatrix train;
  ExpressionMatrix test;
  std::string class_a;
  std::string class_b;
  std::size_t n_train_per_class = 0;
};

// Stratified: n_train_per_class of each class into train, the rest to test.
ScenarioSplit split_train_test(const ExpressionMatrix& m, std::size_t n_train_per_class, std::uint64_t seed);

// FNV-1a over the train then test sample ids; equal digests mean equal partitions.
std::uint64_t split_digest(const ScenarioSplit& split);

}  // namespace l1ksvm
