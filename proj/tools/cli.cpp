#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "folkseg/annotation.hpp"
#include "folkseg/boundary_eval.hpp"
#include "folkseg/errors.hpp"
#include "folkseg/features.hpp"
#include "folkseg/format.hpp"
#include "folkseg/manova.hpp"
#include "folkseg/segmenter.hpp"
#include "folkseg/synth.hpp"
#include "folkseg/wav.hpp"

#ifndef FOLKSEG_VERSION
#define FOLKSEG_VERSION "dev"
#endif

namespace folkseg::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Stream seed for the simulated predictions, kept apart from the
// reference corpus streams.
constexpr std::uint64_t kJitterStream = 0x6a6974746572ULL;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
};

void write_output(const Context& ctx, const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    ctx.out << text;
    ctx.out.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw DataError("cannot write '" + path + "'");
  file << text;
  if (!file) throw DataError("error writing '" + path + "'");
}

ParseOptions parse_options(const Context& ctx, double min_duration) {
  ParseOptions opts;
  opts.min_duration_s = min_duration;
  opts.on_warning = [&ctx](const std::string& msg) { ctx.err << "warning: " << msg << "\n"; };
  return opts;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string ref, pred, out;
  double tolerance = kDefaultToleranceS;
  std::string group_by = "category";
  std::string aggregation = "macro";
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  std::string format = "csv";
  double min_duration = kDefaultMinDurationS;
};

int cmd_eval(const Context& ctx, const EvalArgs& a) {
  const Corpus ref = read_annotations_file(a.ref, parse_options(ctx, a.min_duration));
  const Corpus pred = read_annotations_file(a.pred, parse_options(ctx, a.min_duration));

  EvalOptions opts;
  opts.tolerance_s = a.tolerance;
  opts.group_by = a.group_by == "fold"       ? GroupBy::fold
                  : a.group_by == "category" ? GroupBy::category
                                             : GroupBy::none;
  opts.aggregation = a.aggregation == "micro" ? Aggregation::micro : Aggregation::macro;
  FoldAssignment folds;
  if (opts.group_by == GroupBy::fold) {
    folds = stratified_folds(ref, a.folds, a.seed);
    opts.folds = &folds;
  }
  const auto summary = evaluate_corpus(ref, pred, opts);

  std::string text;
  if (a.format == "json") {
    json rows = json::array();
    for (const auto& s : summary) {
      rows.push_back({{"group", s.group},
                      {"n_songs", s.n_songs},
                      {"mean_precision", s.mean_precision},
                      {"mean_recall", s.mean_recall},
                      {"mean_f1", s.mean_f1}});
    }
    json doc{{"tolerance_s", a.tolerance},
             {"group_by", to_string(opts.group_by)},
             {"aggregation", to_string(opts.aggregation)},
             {"groups", rows}};
    text = doc.dump(2) + "\n";
  } else {
    text = "group,n_songs,mean_precision,mean_recall,mean_f1\n";
    for (const auto& s : summary) {
      text += csv_join({s.group, std::to_string(s.n_songs), format_number(s.mean_precision),
                        format_number(s.mean_recall), format_number(s.mean_f1)});
      text += '\n';
    }
  }
  write_output(ctx, a.out, text);
  return kOk;
}

// ------------------------------------------------------------ features

struct FeatureArgs {
  std::string ann, out;
  double window = kDefaultWindowS;
  double bin_width = kDefaultBinWidth;
  bool include_partial = false;
  std::string entropy_base = "2";
  double min_duration = kDefaultMinDurationS;
};

int cmd_features(const Context& ctx, const FeatureArgs& a) {
  const Corpus corpus = read_annotations_file(a.ann, parse_options(ctx, a.min_duration));
  FeatureOptions opts;
  opts.window_len_s = a.window;
  opts.bin_width = a.bin_width;
  opts.include_partial = a.include_partial;
  opts.entropy_base = a.entropy_base == "e" ? EntropyBase::nats : EntropyBase::bits;

  if (!a.include_partial) {
    for (const auto& r : corpus.records) {
      if (r.duration_s < a.window) {
        ctx.err << "warning: song '" << r.song_id << "' (" << format_number(r.duration_s)
                << " s) is shorter than one " << format_number(a.window)
                << " s window; no rows\n";
      }
    }
  }
  const FeatureTable table = extract_features(corpus, opts);
  if (table.rows.empty()) ctx.err << "warning: feature table is empty\n";
  write_output(ctx, a.out, write_feature_csv(table));
  return kOk;
}

// -------------------------------------------------------------- manova

struct ManovaArgs {
  std::string features;
  std::string posthoc = "holm";
  bool per_song = false;
  std::string format = "text";
  std::string out, out_omnibus, out_posthoc, out_means;
};

json manova_json(const ManovaReport& r) {
  json means = json::array();
  for (std::size_t i = 0; i < r.groups.size(); ++i) {
    json m{{"group", r.groups[i]}, {"n", r.group_sizes[i]}};
    for (Eigen::Index j = 0; j < r.group_means[i].size(); ++j) {
      m[r.variables[static_cast<std::size_t>(j)]] = r.group_means[i](j);
    }
    means.push_back(std::move(m));
  }
  json posthoc = json::array();
  for (const auto& row : r.posthoc) {
    posthoc.push_back({{"group_a", row.group_a},
                       {"group_b", row.group_b},
                       {"t2", number_or_null(row.test.t2)},
                       {"f", number_or_null(row.test.f)},
                       {"df1", number_or_null(row.test.df1)},
                       {"df2", number_or_null(row.test.df2)},
                       {"p_raw", number_or_null(row.test.p_value)},
                       {"p_holm", number_or_null(row.p_holm)},
                       {"singular", row.singular}});
  }
  auto matrix = [](const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  return json{{"p", r.p},
              {"g", r.g},
              {"n", r.n},
              {"variables", r.variables},
              {"within", matrix(r.within)},
              {"between", matrix(r.between)},
              {"lambda", r.lambda},
              {"f", number_or_null(r.f_stat)},
              {"df1", r.df1},
              {"df2", r.df2},
              {"p_value", r.p_value},
              {"group_means", means},
              {"posthoc", posthoc},
              {"notes", r.notes}};
}

int cmd_manova(const Context& ctx, const ManovaArgs& a) {
  const FeatureTable table = read_feature_csv_file(a.features);
  ManovaOptions opts;
  opts.posthoc = a.posthoc == "holm";
  const ManovaReport report = manova(table, a.per_song, opts);

  std::string text;
  if (a.format == "json") {
    text = manova_json(report).dump(2) + "\n";
  } else if (a.format == "csv") {
    text = manova_omnibus_csv(report);
    if (opts.posthoc) text += "\n" + manova_posthoc_csv(report);
  } else {
    text = format_manova_text(report);
  }
  write_output(ctx, a.out, text);
  if (!a.out_omnibus.empty()) write_output(ctx, a.out_omnibus, manova_omnibus_csv(report));
  if (!a.out_posthoc.empty()) write_output(ctx, a.out_posthoc, manova_posthoc_csv(report));
  if (!a.out_means.empty()) write_output(ctx, a.out_means, manova_means_csv(report));
  return kOk;
}

// ------------------------------------------------------------ simulate

struct SimulateArgs {
  std::string profiles;
  std::size_t songs_per_category = 20;
  std::uint64_t seed = 0;
  std::string jitter;
  std::string out;
};

JitterSpec parse_jitter(const std::string& text) {
  const auto parts = csv_split(text);
  if (parts.size() != 3) throw UsageError("--jitter expects sigma,drop,insert");
  JitterSpec spec;
  try {
    spec.sigma_s = parse_number(parts[0]);
    spec.p_drop = parse_number(parts[1]);
    spec.p_insert = parse_number(parts[2]);
  } catch (const ParseError& e) {
    throw UsageError(std::string("--jitter: ") + e.what());
  }
  validate_jitter(spec);
  return spec;
}

int cmd_simulate(const Context& ctx, const SimulateArgs& a) {
  const auto paths = csv_split(a.out);
  if (paths.empty() || paths.size() > 2 || paths[0].empty()) {
    throw UsageError("--out expects ref.jsonl[,pred.jsonl]");
  }
  if (!a.jitter.empty() && paths.size() != 2) {
    throw UsageError("--jitter needs a second --out path for the predicted corpus");
  }
  const auto profiles = a.profiles.empty() ? default_profiles() : read_profiles_file(a.profiles);
  const Corpus ref = generate_corpus(profiles, a.songs_per_category, a.seed);
  write_output(ctx, paths[0], write_annotations(ref));
  if (paths.size() == 2) {
    const JitterSpec spec = a.jitter.empty() ? JitterSpec{} : parse_jitter(a.jitter);
    write_output(ctx, paths[1], write_annotations(jitter_corpus(ref, spec, mix_seed(a.seed, kJitterStream))));
  }
  return kOk;
}

// ------------------------------------------------------------- segment

struct SegmentArgs {
  std::string audio, out;
  std::string method = "energy";
  std::string category = "unknown";
  SegmenterConfig config;
};

bool has_wav_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".wav";
}

int cmd_segment(const Context& ctx, const SegmentArgs& a) {
  validate_config(a.config);
  std::error_code ec;
  if (!fs::is_directory(a.audio, ec)) throw DataError("'" + a.audio + "' is not a directory");

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(a.audio)) {
    if (!entry.is_regular_file()) continue;
    if (has_wav_extension(entry.path())) {
      files.push_back(entry.path());
    } else {
      ctx.err << "warning: skipping non-WAV file '" << entry.path().filename().string() << "'\n";
    }
  }
  std::sort(files.begin(), files.end());

  Corpus corpus;
  for (const auto& path : files) {
    AudioBuffer audio;
    try {
      audio = read_wav_file(path.string());
    } catch (const ParseError& e) {
      throw DataError("'" + path.filename().string() + "': " + e.what());
    }
    BoundaryRecord rec = segment_to_record(audio, path.stem().string(), a.category, a.config);
    validate_record(rec);
    corpus.records.push_back(std::move(rec));
  }
  write_output(ctx, a.out, write_annotations(corpus));
  return kOk;
}

// ----------------------------------------------------------- plot-data

struct PlotArgs {
  std::string features, out;
};

int cmd_plot_data(const Context& ctx, const PlotArgs& a) {
  const FeatureTable table = read_feature_csv_file(a.features);
  std::string text = "kind,category,motif_count,duration_entropy_bits\n";
  for (const auto& r : table.rows) {
    text += csv_join({"point", r.category, format_number(r.motif_count),
                      format_number(r.duration_entropy_bits)});
    text += '\n';
  }
  for (const auto& c : category_centroids(table)) {
    text += csv_join({"centroid", c.category, format_number(c.motif_count),
                      format_number(c.duration_entropy_bits)});
    text += '\n';
  }
  write_output(ctx, a.out, text);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const Context ctx{out, err};

  CLI::App app{"Motif-boundary evaluation, structural features and MANOVA for folk-song corpora",
               "folkseg"};
  app.set_version_flag("--version", std::string("folkseg ") + FOLKSEG_VERSION);
  app.require_subcommand(1);

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score predicted boundaries against references");
  eval_cmd->add_option("--ref", eval.ref, "Reference annotations (JSONL)")->required();
  eval_cmd->add_option("--pred", eval.pred, "Predicted annotations (JSONL)")->required();
  eval_cmd->add_option("--tolerance", eval.tolerance, "Hit window in seconds")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  eval_cmd->add_option("--group-by", eval.group_by, "Aggregation groups")
      ->capture_default_str()
      ->check(CLI::IsMember({"category", "fold", "none"}));
  eval_cmd->add_option("--aggregation", eval.aggregation, "macro (per-song mean) or micro")
      ->capture_default_str()
      ->check(CLI::IsMember({"macro", "micro"}));
  eval_cmd->add_option("--folds", eval.folds, "Fold count for --group-by fold")
      ->capture_default_str();
  eval_cmd->add_option("--seed", eval.seed, "Fold shuffling seed")->capture_default_str();
  eval_cmd->add_option("--format", eval.format, "Report format")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "json"}));
  eval_cmd->add_option("--min-duration", eval.min_duration,
                       "Skip songs not longer than this many seconds")
      ->capture_default_str();
  eval_cmd->add_option("--out", eval.out, "Output file (default stdout)");

  FeatureArgs feat;
  auto* feat_cmd = app.add_subcommand("features", "Per-window motif count and duration entropy");
  feat_cmd->add_option("--ann", feat.ann, "Annotations (JSONL)")->required();
  feat_cmd->add_option("--window", feat.window, "Window length in seconds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  feat_cmd->add_option("--bin-width", feat.bin_width, "Histogram bin width in log2 seconds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  feat_cmd->add_flag("--include-partial", feat.include_partial,
                     "Keep the trailing partial window (count rescaled)");
  feat_cmd->add_option("--entropy-base", feat.entropy_base, "2 for bits, e for nats")
      ->capture_default_str()
      ->check(CLI::IsMember({"2", "e"}));
  feat_cmd->add_option("--min-duration", feat.min_duration,
                       "Skip songs not longer than this many seconds")
      ->capture_default_str();
  feat_cmd->add_option("--out", feat.out, "Output CSV (default stdout)");

  ManovaArgs man;
  auto* man_cmd = app.add_subcommand("manova", "One-way MANOVA by category with post-hoc tests");
  man_cmd->add_option("--features", man.features, "Feature table CSV")->required();
  man_cmd->add_option("--posthoc", man.posthoc, "Post-hoc correction")
      ->capture_default_str()
      ->check(CLI::IsMember({"holm", "none"}));
  man_cmd->add_flag("--per-song", man.per_song, "Average windows within each song first");
  man_cmd->add_option("--format", man.format, "Report format")
      ->capture_default_str()
      ->check(CLI::IsMember({"text", "csv", "json"}));
  man_cmd->add_option("--out", man.out, "Report file (default stdout)");
  man_cmd->add_option("--out-omnibus", man.out_omnibus, "Omnibus CSV");
  man_cmd->add_option("--out-posthoc", man.out_posthoc, "Post-hoc CSV");
  man_cmd->add_option("--out-means", man.out_means, "Group means CSV");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a synthetic annotated corpus");
  sim_cmd->add_option("--profiles", sim.profiles, "Profile file (JSON); built-in set if omitted");
  sim_cmd->add_option("--songs-per-category", sim.songs_per_category)->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed)->capture_default_str();
  sim_cmd->add_option("--jitter", sim.jitter, "sigma,drop,insert for the predicted corpus");
  sim_cmd->add_option("--out", sim.out, "ref.jsonl[,pred.jsonl]")->required();

  SegmentArgs seg;
  auto* seg_cmd = app.add_subcommand("segment", "Energy-based boundaries for a directory of WAVs");
  seg_cmd->add_option("--audio", seg.audio, "Directory of 16-bit PCM WAV files")->required();
  seg_cmd->add_option("--method", seg.method)
      ->capture_default_str()
      ->check(CLI::IsMember({"energy"}));
  seg_cmd->add_option("--frame", seg.config.frame_s, "Frame length in seconds")
      ->capture_default_str();
  seg_cmd->add_option("--hop", seg.config.hop_s, "Hop in seconds")->capture_default_str();
  seg_cmd->add_option("--threshold-ratio", seg.config.threshold_ratio,
                      "Silence threshold relative to median frame RMS")
      ->capture_default_str();
  seg_cmd->add_option("--min-silence", seg.config.min_silence_s,
                      "Minimum silence length in seconds")
      ->capture_default_str();
  seg_cmd->add_option("--category", seg.category, "Category label for the output records")
      ->capture_default_str();
  seg_cmd->add_option("--out", seg.out, "Predicted annotations (default stdout)");

  PlotArgs plot;
  auto* plot_cmd = app.add_subcommand("plot-data", "Scatter points and category centroids");
  plot_cmd->add_option("--features", plot.features, "Feature table CSV")->required();
  plot_cmd->add_option("--out", plot.out, "Output CSV (default stdout)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (eval_cmd->parsed()) return cmd_eval(ctx, eval);
    if (feat_cmd->parsed()) return cmd_features(ctx, feat);
    if (man_cmd->parsed()) return cmd_manova(ctx, man);
    if (sim_cmd->parsed()) return cmd_simulate(ctx, sim);
    if (seg_cmd->parsed()) return cmd_segment(ctx, seg);
    if (plot_cmd->parsed()) return cmd_plot_data(ctx, plot);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}

}  // namespace folkseg::cli
