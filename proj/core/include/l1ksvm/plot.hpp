#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "l1ksvm/records.hpp"

namespace l1ksvm {

struct Figure {
  std::string name;  // file name without directory, e.g. "accuracy_a_vs_b.svg"
  std::string svg;
};

// One accuracy-vs-size figure per scenario (line per method, shaded +-1 std
// band) and one pooled feature-count figure. Throws on an empty summary.
std::vector<Figure> render_figures(std::span<const SummaryRow> rows);

// Writes the figures into out_dir and returns the written paths.
std::vector<std::filesystem::path> render_plots(std::span<const SummaryRow> rows, const std::filesystem::path& out_dir);

}  // namespace l1ksvm
