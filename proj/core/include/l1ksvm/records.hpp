#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "l1ksvm/harness.hpp"

namespace l1ksvm {

// One row per (scenario, method, size); scenario "*" pools all scenarios.
struct SummaryRow {
  Protocol protocol = Protocol::bootstrap;
  std::string scenario;
  Method method = Method::l1ksvm_aug;
  std::size_t size = 0;
  std::size_t n_records = 0;
  std::size_t n_ok = 0;
  std::size_t n_failed = 0;
  std::size_t n_degenerate = 0;
  double acc_mean = 0.0;  // percent
  double acc_std = 0.0;   // percent, sample std
  double tp_pct = 0.0;
  double tn_pct = 0.0;
  double fp_pct = 0.0;
  double fn_pct = 0.0;
  double features_mean = 0.0;
  double features_std = 0.0;
};

inline constexpr const char* kPooledScenario = "*";

// Means over usable records; feature counts also include "no features"
// failures (count 0). Groups with no usable record are skipped and reported
// through `warnings`. Result is independent of record order.
std::vector<SummaryRow> aggregate_records(std::span<const RunRecord> records, Protocol protocol,
                                          std::vector<std::string>* warnings = nullptr);

// Records CSV, versioned by a leading "# l1ksvm-records v1 protocol=..." line:
// scenario,method,size,repeat,seed,tp,tn,fp,fn,n_test,accuracy,n_features,flags
std::string format_records_csv(std::span<const RunRecord> records, Protocol protocol);
void write_records_csv(const std::filesystem::path& path, std::span<const RunRecord> records, Protocol protocol);
std::vector<RunRecord> read_records_csv(const std::filesystem::path& path, Protocol* protocol = nullptr);
std::vector<RunRecord> parse_records_csv(std::string_view text, Protocol* protocol = nullptr);

// Summary CSV, versioned by a leading "# l1ksvm-summary v1" line.
std::string format_summary_csv(std::span<const SummaryRow> rows);
void write_summary_csv(const std::filesystem::path& path, std::span<const SummaryRow> rows);
std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path);
std::vector<SummaryRow> parse_summary_csv(std::string_view text);

}  // namespace l1ksvm
