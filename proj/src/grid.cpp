#include "seqrec/grid.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "seqrec/errors.hpp"

namespace seqrec {

GridAxes GridAxes::standard() {
  const std::vector<TrainMode> modes{TrainMode::skipgram, TrainMode::cbow};
  GridAxes axes;
  axes.sweeps.push_back({modes, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, {100}});
  axes.sweeps.push_back({modes, {5}, {10, 50, 100, 150, 200, 250}});
  return axes;
}

std::string cell_id(const TrainConfig& cfg) {
  std::ostringstream os;
  os << "mode=" << to_string(cfg.mode) << ";size=" << cfg.size
     << ";max_n=" << cfg.max_n;
  return os.str();
}

std::vector<TrainConfig> enumerate_cells(const TrainConfig& base,
                                         const GridAxes& axes) {
  if (axes.sweeps.empty()) throw ArgumentError("grid: no axes");
  std::vector<TrainConfig> cells;
  std::set<std::string> seen;
  for (const auto& sweep : axes.sweeps) {
    for (auto mode : sweep.modes) {
      for (auto max_n : sweep.max_n_values) {
        for (auto size : sweep.sizes) {
          TrainConfig cfg = base;
          cfg.mode = mode;
          cfg.max_n = max_n;
          cfg.size = size;
          if (seen.insert(cell_id(cfg)).second) cells.push_back(cfg);
        }
      }
    }
  }
  return cells;
}

std::vector<GridResult> grid_search(const SplitDataset& split,
                                    const TrainConfig& base,
                                    const GridAxes& axes,
                                    const GridOptions& options) {
  std::vector<GridResult> results;
  for (const auto& cfg : enumerate_cells(base, axes)) {
    if (std::find(options.completed.begin(), options.completed.end(),
                  cell_id(cfg)) != options.completed.end())
      continue;
    GridResult result;
    result.config = cfg;
    try {
      cfg.validate();
      SegmentationConfig seg = options.segmentation;
      seg.min_n = cfg.min_n;
      seg.max_n = cfg.max_n;
      const auto corpus = build_corpus(split.train, seg, options.non_seq);
      const auto model = train(corpus, cfg);
      result.report = evaluate(model, split, options.recommend);
    } catch (const std::exception& e) {
      result.error = e.what();
    }
    if (options.on_cell) options.on_cell(result);
    results.push_back(std::move(result));
  }
  return results;
}

nlohmann::json to_json(const GridResult& result) {
  nlohmann::json j;
  j["cell"] = cell_id(result.config);
  if (result.report)
    j["report"] = to_json(*result.report);
  else
    j["error"] = result.error;
  return j;
}

void write_grid_csv_header(std::ostream& out) {
  out << "mode,use_subwords,size,min_n,max_n,window,epochs,negatives,"
         "initial_lr,seed,rec_type,k,n,precision_at_k,ndcg_at_k,hit_rate,"
         "n_users_evaluated,n_cold_users,error\n";
}

void write_grid_csv_row(const GridResult& result, const RecommendOptions& rec,
                        std::ostream& out) {
  const auto& c = result.config;
  out << to_string(c.mode) << ',' << (c.use_subwords ? 1 : 0) << ',' << c.size
      << ',' << c.min_n << ',' << c.max_n << ',' << c.window << ','
      << c.epochs << ',' << c.negatives << ',' << c.initial_lr << ','
      << c.seed << ',' << to_string(rec.type) << ',' << rec.k << ','
      << rec.neighbors << ',';
  if (result.report) {
    const auto& r = *result.report;
    out << r.precision_at_k << ',' << r.ndcg_at_k << ',' << r.hit_rate << ','
        << r.n_users_evaluated << ',' << r.n_cold_users << ",\n";
  } else {
    std::string err = result.error;
    std::replace(err.begin(), err.end(), '"', '\'');
    out << ",,,,,\"" << err << "\"\n";
  }
}

}  // namespace seqrec
