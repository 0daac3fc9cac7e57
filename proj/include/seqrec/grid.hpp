#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "seqrec/metrics.hpp"

namespace seqrec {

// One cartesian sweep: modes x max_n values x sizes.
struct GridSweep {
  std::vector<TrainMode> modes;
  std::vector<std::size_t> max_n_values;
  std::vector<std::size_t> sizes;
};

struct GridAxes {
  std::vector<GridSweep> sweeps;

  // sg x max_n in [1, 10] at size 100, then sg x size in
  // {10, 50, 100, 150, 200, 250} at max_n 5.
  static GridAxes standard();
};

// Stable identifier of a cell, e.g. "mode=skipgram;size=100;max_n=5".
std::string cell_id(const TrainConfig& cfg);

// Every cell of every sweep applied to `base`, duplicates removed, in sweep
// order.
std::vector<TrainConfig> enumerate_cells(const TrainConfig& base,
                                         const GridAxes& axes);

struct GridResult {
  TrainConfig config;
  std::optional<MetricsReport> report;
  std::string error;  // set when the cell failed
};

struct GridOptions {
  SegmentationConfig segmentation;
  bool non_seq = false;
  RecommendOptions recommend;
  // Cells whose id is listed here are skipped (restart support).
  std::vector<std::string> completed;
  std::function<void(const GridResult&)> on_cell;
};

// Trains and evaluates each cell independently; a failing cell is recorded
// and the sweep continues.
std::vector<GridResult> grid_search(const SplitDataset& split,
                                    const TrainConfig& base,
                                    const GridAxes& axes,
                                    const GridOptions& options);

nlohmann::json to_json(const GridResult& result);
void write_grid_csv_header(std::ostream& out);
void write_grid_csv_row(const GridResult& result, const RecommendOptions& rec,
                        std::ostream& out);

}  // namespace seqrec
