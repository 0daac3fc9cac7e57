// seqrec: ingest check-ins, learn session embeddings, recommend, evaluate.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "seqrec/errors.hpp"
#include "seqrec/grid.hpp"
#include "seqrec/ingest.hpp"
#include "seqrec/metrics.hpp"
#include "seqrec/model_io.hpp"
#include "seqrec/recommend.hpp"
#include "seqrec/sessions.hpp"

namespace fs = std::filesystem;
using namespace seqrec;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Raised for problems the user can fix by changing arguments.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input, train, test, model, output, output_dir;
  std::string export_text, dump_sessions;

  double ratio = 0.8;
  std::size_t min_venue_visits = 5;
  std::size_t min_user_checkins = 10;

  std::string delta_t = "18000";
  std::string mode = "skipgram";
  std::size_t size = 100, min_n = 1, max_n = 5, window = 5, epochs = 5;
  std::size_t negatives = 5, min_count = 1, workers = 1;
  double lr = 0.025;
  std::uint64_t seed = 1;
  bool no_subwords = false;
  bool non_seq = false;

  std::string rec_type = "seq-single-avg";
  std::size_t n = 10, k = 10, seq_outputs = 1;
  bool exclude_visited = false;

  std::vector<std::string> grid_modes{"skipgram", "cbow"};
  std::vector<std::size_t> grid_max_n{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<std::size_t> grid_sizes{10, 50, 100, 150, 200, 250};
  std::size_t grid_fixed_size = 100;
  std::size_t grid_fixed_max_n = 5;
  bool resume = false;
};

// Accepts plain seconds or a number with an s/m/h suffix.
std::chrono::seconds parse_duration(const std::string& text) {
  if (text.empty()) throw UsageError("empty --delta-t");
  std::int64_t scale = 1;
  std::string digits = text;
  switch (text.back()) {
    case 's': digits.pop_back(); break;
    case 'm': scale = 60; digits.pop_back(); break;
    case 'h': scale = 3600; digits.pop_back(); break;
    default: break;
  }
  std::size_t used = 0;
  long long value = 0;
  try {
    value = std::stoll(digits, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != digits.size() || value <= 0)
    throw UsageError("invalid --delta-t '" + text + "'");
  return std::chrono::seconds(value * scale);
}

const std::string& require(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string("missing required ") + flag);
  return value;
}

const std::string& require_file(const std::string& value, const char* flag) {
  require(value, flag);
  if (!fs::is_regular_file(value))
    throw UsageError(std::string(flag) + ": no such file '" + value + "'");
  return value;
}

SegmentationConfig segmentation(const Options& o) {
  SegmentationConfig seg;
  seg.delta_t = parse_duration(o.delta_t);
  seg.min_n = o.min_n;
  seg.max_n = o.max_n;
  try {
    seg.validate();
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
  return seg;
}

TrainConfig train_config(const Options& o) {
  TrainConfig cfg;
  try {
    cfg.mode = parse_train_mode(o.mode);
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
  cfg.use_subwords = !o.no_subwords;
  cfg.size = o.size;
  cfg.min_n = o.min_n;
  cfg.max_n = o.max_n;
  cfg.window = o.window;
  cfg.epochs = o.epochs;
  cfg.negatives = o.negatives;
  cfg.initial_lr = o.lr;
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  cfg.min_count = o.min_count;
  try {
    cfg.validate();
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

RecommendOptions recommend_options(const Options& o) {
  RecommendOptions r;
  try {
    r.type = parse_rec_type(o.rec_type);
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
  if (o.n < 1 || o.k < 1) throw UsageError("--n and --k must be at least 1");
  r.neighbors = o.n;
  r.k = o.k;
  r.seq_outputs = o.seq_outputs;
  r.exclude_visited = o.exclude_visited;
  return r;
}

// stdout when the path is empty or "-".
class OutputSink {
 public:
  explicit OutputSink(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void write_split(const SplitDataset& split, const std::string& dir) {
  fs::create_directories(dir);
  write_checkin_file(split.train, (fs::path(dir) / "train.tsv").string());
  write_checkin_file(split.test, (fs::path(dir) / "test.tsv").string());
  std::ofstream sidecar(fs::path(dir) / "split.json");
  sidecar << split_sidecar_json(split) << '\n';
}

nlohmann::json counts(const Dataset& ds) {
  return {{"users", ds.user_count()},
          {"venues", ds.venue_count()},
          {"checkins", ds.checkin_count()}};
}

SplitDataset split_or_usage(const Dataset& ds, double ratio) {
  try {
    return temporal_split(ds, ratio);
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
}

int cmd_ingest(const Options& o) {
  const auto raw = parse_checkin_file(require_file(o.input, "--input"));
  const auto filtered =
      filter_dataset(raw, {o.min_venue_visits, o.min_user_checkins});
  const auto split = split_or_usage(filtered, o.ratio);
  const auto& dir = require(o.output_dir, "--output-dir");
  fs::create_directories(dir);
  write_checkin_file(filtered, (fs::path(dir) / "filtered.tsv").string());
  write_split(split, dir);

  auto summary = counts(filtered);
  summary["raw"] = counts(raw);
  summary["train_users"] = split.train.user_count();
  summary["users_dropped"] = split.users_dropped;
  std::cout << summary.dump() << '\n';
  return kExitOk;
}

int cmd_split(const Options& o) {
  const auto ds = parse_checkin_file(require_file(o.input, "--input"));
  const auto split = split_or_usage(ds, o.ratio);
  write_split(split, require(o.output_dir, "--output-dir"));
  std::cout << split_sidecar_json(split) << '\n';
  return kExitOk;
}

int cmd_estimate_dt(const Options& o) {
  const auto ds = parse_checkin_file(require_file(o.input, "--input"));
  const auto stats = estimate_delta_t(ds);
  nlohmann::json j{{"mean_seconds", stats.mean_seconds},
                   {"stddev_seconds", stats.stddev_seconds},
                   {"users_measured", stats.users_measured}};
  std::cout << j.dump() << '\n';
  return kExitOk;
}

int cmd_train(const Options& o) {
  const auto cfg = train_config(o);
  const auto seg = segmentation(o);
  const auto& model_path = require(o.model, "--model");
  const auto ds = parse_checkin_file(require_file(o.train, "--train"));

  if (!o.dump_sessions.empty()) {
    std::ofstream dump(o.dump_sessions, std::ios::binary);
    write_session_dump(segment_dataset(ds, seg.delta_t), dump);
  }

  const auto corpus = build_corpus(ds, seg, o.non_seq);
  const auto model = train(corpus, cfg, [](const EpochStats& s) {
    std::cerr << "epoch " << s.epoch << " loss " << s.mean_loss << " lr "
              << s.learning_rate << " pairs " << s.pairs << '\n';
  });
  save_model(model, model_path);
  if (!o.export_text.empty()) {
    std::ofstream txt(o.export_text, std::ios::binary);
    export_text(model, txt);
  }
  std::cerr << "saved " << model_path << " ("
            << model.vocabulary.session_count() << " tokens, "
            << model.vocabulary.ngram_count() << " n-grams)\n";
  return kExitOk;
}

EmbeddingModel load_checked(const Options& o, RecType type) {
  auto model = load_model(require_file(o.model, "--model"));
  try {
    check_compatible(model, type);
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
  return model;
}

int cmd_recommend(const Options& o) {
  const auto options = recommend_options(o);
  const auto model = load_checked(o, options.type);
  const auto ds = parse_checkin_file(require_file(o.train, "--train"));
  const NeighborIndex index(model);

  OutputSink sink(o.output);
  std::size_t cold = 0;
  for (const auto& [user, history] : ds.histories) {
    const auto queries = build_queries(model, history);
    try {
      sink.stream() << to_json(recommend_for_user(index, user, queries, options)).dump()
                    << '\n';
    } catch (const ColdUserError&) {
      ++cold;
    }
  }
  if (cold) std::cerr << cold << " cold users without recommendations\n";
  return kExitOk;
}

int cmd_evaluate(const Options& o) {
  const auto options = recommend_options(o);
  const auto model = load_checked(o, options.type);
  SplitDataset split;
  split.train = parse_checkin_file(require_file(o.train, "--train"));
  split.test = parse_checkin_file(require_file(o.test, "--test"));
  const auto report = evaluate(model, split, options);
  OutputSink sink(o.output);
  sink.stream() << to_json(report).dump(2) << '\n';
  return kExitOk;
}

int cmd_grid(const Options& o) {
  const auto base = train_config(o);
  const auto seg = segmentation(o);
  const auto rec = recommend_options(o);
  SplitDataset split;
  split.train = parse_checkin_file(require_file(o.train, "--train"));
  split.test = parse_checkin_file(require_file(o.test, "--test"));
  const auto& dir = require(o.output_dir, "--output-dir");
  fs::create_directories(dir);

  GridAxes axes;
  std::vector<TrainMode> modes;
  try {
    for (const auto& m : o.grid_modes) modes.push_back(parse_train_mode(m));
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
  axes.sweeps.push_back({modes, o.grid_max_n, {o.grid_fixed_size}});
  axes.sweeps.push_back({modes, {o.grid_fixed_max_n}, o.grid_sizes});

  const auto jsonl_path = fs::path(dir) / "grid.jsonl";
  const auto csv_path = fs::path(dir) / "grid.csv";
  GridOptions options;
  options.segmentation = seg;
  options.non_seq = o.non_seq;
  options.recommend = rec;
  if (o.resume && fs::exists(jsonl_path)) {
    std::ifstream in(jsonl_path);
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) {
        auto j = nlohmann::json::parse(line);
        if (j.contains("report")) options.completed.push_back(j["cell"]);
      }
  }

  const bool append = o.resume && fs::exists(csv_path);
  std::ofstream jsonl(jsonl_path, append ? std::ios::app : std::ios::trunc);
  std::ofstream csv(csv_path, append ? std::ios::app : std::ios::trunc);
  if (!append) write_grid_csv_header(csv);

  std::size_t failed = 0;
  options.on_cell = [&](const GridResult& r) {
    jsonl << to_json(r).dump() << '\n' << std::flush;
    write_grid_csv_row(r, rec, csv);
    csv.flush();
    if (!r.report) ++failed;
    std::cerr << cell_id(r.config) << ": "
              << (r.report ? "p@k=" + std::to_string(r.report->precision_at_k)
                           : "error: " + r.error)
              << '\n';
  };
  const auto results = grid_search(split, base, axes, options);
  std::cerr << results.size() << " cells run, " << failed << " failed\n";
  return kExitOk;
}

void add_shared_options(CLI::App& app, Options& o) {
  app.add_option("--input", o.input, "Check-in TSV (user, venue, timestamp)");
  app.add_option("--train", o.train, "Training split TSV");
  app.add_option("--test", o.test, "Test split TSV");
  app.add_option("--model", o.model, "Model file");
  app.add_option("--output", o.output, "Output file (default stdout)");
  app.add_option("--output-dir", o.output_dir, "Output directory");
  app.add_option("--export-text", o.export_text, "Also write text vectors");
  app.add_option("--dump-sessions", o.dump_sessions, "Write the session dump");

  app.add_option("--ratio", o.ratio, "Train fraction of each history");
  app.add_option("--min-venue-visits", o.min_venue_visits);
  app.add_option("--min-user-checkins", o.min_user_checkins,
                 "Users with at most this many check-ins are dropped");

  app.add_option("--delta-t", o.delta_t, "Session gap, seconds or 5h/30m");
  app.add_option("--mode", o.mode, "skipgram or cbow");
  app.add_option("--size", o.size, "Vector dimension");
  app.add_option("--min-n", o.min_n);
  app.add_option("--max-n", o.max_n);
  app.add_option("--window", o.window);
  app.add_option("--epochs", o.epochs);
  app.add_option("--negatives", o.negatives);
  app.add_option("--lr", o.lr, "Initial learning rate");
  app.add_option("--min-count", o.min_count);
  app.add_option("--seed", o.seed);
  app.add_option("--workers", o.workers);
  app.add_flag("--no-subwords", o.no_subwords, "Whole-token (Word2Vec) model");
  app.add_flag("--non-seq", o.non_seq, "Single check-ins instead of sessions");

  app.add_option("--rec-type", o.rec_type,
                 "seq, seq-single-max, seq-single-avg or non-seq");
  app.add_option("--n", o.n, "Neighbors per query");
  app.add_option("--k", o.k, "Recommendation list size");
  app.add_option("--seq-outputs", o.seq_outputs, "Sequences emitted by seq");
  app.add_flag("--exclude-visited", o.exclude_visited);

  app.add_option("--grid-modes", o.grid_modes);
  app.add_option("--grid-max-n", o.grid_max_n);
  app.add_option("--grid-sizes", o.grid_sizes);
  app.add_option("--grid-fixed-size", o.grid_fixed_size,
                 "Size used while sweeping max_n");
  app.add_option("--grid-fixed-max-n", o.grid_fixed_max_n,
                 "max_n used while sweeping size");
  app.add_flag("--resume", o.resume, "Skip cells already in grid.jsonl");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Session-embedding venue recommender"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_config("--config", "", "Flat TOML file; flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);

  Options o;
  add_shared_options(app, o);

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const Options&);
  };
  const Command commands[] = {
      {"ingest", "Filter raw check-ins and split them", cmd_ingest},
      {"split", "Split a filtered TSV into train and test", cmd_split},
      {"estimate-dt", "Same-day gap statistics", cmd_estimate_dt},
      {"train", "Train a model", cmd_train},
      {"recommend", "Write recommendations as JSON lines", cmd_recommend},
      {"evaluate", "Score a model on a split", cmd_evaluate},
      {"grid", "Train and evaluate a parameter grid", cmd_grid},
  };
  for (const auto& c : commands) app.add_subcommand(c.name, c.help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  for (const auto& c : commands) {
    if (!app.got_subcommand(c.name)) continue;
    try {
      return c.run(o);
    } catch (const UsageError& e) {
      std::cerr << "seqrec " << c.name << ": " << e.what() << '\n';
      return kExitUsage;
    } catch (const ArgumentError& e) {
      std::cerr << "seqrec " << c.name << ": " << e.what() << '\n';
      return kExitUsage;
    } catch (const std::exception& e) {
      std::cerr << "seqrec " << c.name << ": " << e.what() << '\n';
      return kExitRuntime;
    }
  }
  return kExitUsage;
}
