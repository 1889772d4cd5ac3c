// latentscope: instance-wise sample-quality scoring on generative-model
// latent spaces, plus the k-NN manifold baselines and analysis sweeps.
// Operates purely on embedding files; never touches images or model weights.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "latentscope/analysis.hpp"
#include "latentscope/density.hpp"
#include "latentscope/embeddings_io.hpp"
#include "latentscope/errors.hpp"
#include "latentscope/manifold.hpp"
#include "latentscope/synthetic.hpp"

namespace ls = latentscope;
using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

// Scores are printed with 9 significant digits: enough to distinguish
// rank-relevant differences while keeping outputs diff-stable.
std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

double round9(double v) {
  return std::strtod(fmt9(v).c_str(), nullptr);
}

struct CommonOptions {
  std::string format = "npy";
  std::size_t dims = 0;
  int element_width = 64;
  std::size_t threads = 0;
  std::size_t chunk_rows = 256;
  std::string out;
  std::string out_format = "csv";
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt, bool with_chunking = true) {
  cmd->add_option("--format", opt.format, "Embedding file format: npy, raw or csv")
      ->check(CLI::IsMember({"npy", "raw", "csv"}))
      ->capture_default_str();
  cmd->add_option("--dims", opt.dims, "Row width for raw-binary inputs");
  cmd->add_option("--element-width", opt.element_width,
                  "Stored element width in bits for raw/csv/npy outputs and raw inputs")
      ->check(CLI::IsMember({32, 64}))
      ->capture_default_str();
  cmd->add_option("--threads", opt.threads,
                  "Worker threads (0 = all cores); results do not depend on this")
      ->envname("LATENT_SCOPE_THREADS");
  if (with_chunking) {
    cmd->add_option("--chunk-rows", opt.chunk_rows, "Query rows per scoring block")
        ->capture_default_str();
  }
  cmd->add_option("--out", opt.out, "Output path (default: stdout)");
  cmd->add_option("--out-format", opt.out_format, "Report format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

ls::EmbeddingFormat make_format(const CommonOptions& opt) {
  ls::EmbeddingFormat format;
  format.kind = ls::parse_format_kind(opt.format);
  format.width = opt.element_width == 32 ? ls::ElementWidth::F32 : ls::ElementWidth::F64;
  format.raw_dims = opt.dims;
  return format;
}

ls::LatentMatrix load(const std::string& path, const CommonOptions& opt) {
  return ls::load_embeddings(path, make_format(opt));
}

void emit(const std::string& text, const CommonOptions& opt) {
  if (opt.out.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream file(opt.out, std::ios::binary | std::ios::trunc);
  if (!file) throw ls::IoError("cannot open output file: " + opt.out);
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
  file.flush();
  if (!file) throw ls::IoError("write failure on output file: " + opt.out);
}

// Line-based progress counter on stderr for long density runs.
ls::ProgressFn make_progress(std::size_t work_elements) {
  if (work_elements < 2'000'000'000ull) return {};
  auto state = std::make_shared<std::pair<std::mutex, std::size_t>>();
  return [state](std::size_t done, std::size_t total) {
    std::lock_guard lock(state->first);
    const std::size_t decile = done * 10 / total;
    if (decile > state->second || done == total) {
      state->second = decile;
      std::fprintf(stderr, "scored %zu/%zu query rows\n", done, total);
    }
  };
}

// A score file as written by `score`: one or two csv columns, optional
// header; the last column holds the scores.
ls::ScoreVector load_scores(const std::string& path) {
  ls::EmbeddingFormat format;
  format.kind = ls::FormatKind::Csv;
  const ls::LatentMatrix table = ls::load_embeddings(path, format);
  const std::size_t col = table.dims() - 1;
  ls::ScoreVector scores(table.rows());
  for (std::size_t r = 0; r < table.rows(); ++r) scores[r] = table.at(r, col);
  return scores;
}

// --- subcommand bodies -------------------------------------------------------

struct ScoreArgs {
  CommonOptions common;
  std::string train_path, query_path;
  double sigma = 20.0;
};

void run_score(const ScoreArgs& args) {
  const ls::LatentMatrix train = load(args.train_path, args.common);
  const ls::LatentMatrix query = load(args.query_path, args.common);
  ls::DensityConfig config{args.sigma, args.common.chunk_rows, args.common.threads};
  const auto progress = make_progress(query.rows() * train.rows() * train.dims());
  const ls::ScoreVector scores = ls::latent_density(query, train, config, progress);

  if (args.common.out_format == "json") {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["sigma"] = args.sigma;
    json arr = json::array();
    for (const double s : scores) arr.push_back(round9(s));
    doc["scores"] = std::move(arr);
    emit(doc.dump(2) + "\n", args.common);
  } else {
    std::string out = "index,latent_density_score\n";
    for (std::size_t i = 0; i < scores.size(); ++i) {
      out += std::to_string(i);
      out.push_back(',');
      out += fmt9(scores[i]);
      out.push_back('\n');
    }
    emit(out, args.common);
  }
}

struct MetricsArgs {
  CommonOptions common;
  std::string fake_path, real_path;
  std::size_t k = 3;
  std::size_t k_density = 5;
};

void run_metrics(const MetricsArgs& args) {
  const ls::LatentMatrix fake = load(args.fake_path, args.common);
  const ls::LatentMatrix real = load(args.real_path, args.common);
  const ls::MetricReport report =
      ls::compute_metrics(fake, real, args.k, args.k_density, args.common.threads);

  if (args.common.out_format == "csv") {
    std::string out = "precision,recall,density,coverage,k,k_density,n_fake,n_real\n";
    out += fmt9(report.precision) + "," + fmt9(report.recall) + "," + fmt9(report.density) +
           "," + fmt9(report.coverage) + "," + std::to_string(report.k_precision_recall) + "," +
           std::to_string(report.k_density_coverage) + "," + std::to_string(report.n_fake) +
           "," + std::to_string(report.n_real) + "\n";
    emit(out, args.common);
  } else {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["precision"] = round9(report.precision);
    doc["recall"] = round9(report.recall);
    doc["density"] = round9(report.density);
    doc["coverage"] = round9(report.coverage);
    doc["k"] = report.k_precision_recall;
    doc["k_density"] = report.k_density_coverage;
    doc["n_fake"] = report.n_fake;
    doc["n_real"] = report.n_real;
    emit(doc.dump(2) + "\n", args.common);
  }
}

struct KnnScoresArgs {
  CommonOptions common;
  std::string fake_path, real_path;
  std::size_t k = 3;
};

void run_knn_scores(const KnnScoresArgs& args) {
  const ls::LatentMatrix fake = load(args.fake_path, args.common);
  const ls::LatentMatrix real = load(args.real_path, args.common);
  const ls::ManifoldIndex index = ls::build_manifold(real, args.k, args.common.threads);
  const ls::ScoreVector realism = ls::realism_scores(fake, index, args.common.threads);
  const ls::RarityScores rarity = ls::rarity_scores(fake, index, args.common.threads);

  if (args.common.out_format == "json") {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["k"] = args.k;
    json jr = json::array(), jt = json::array(), jm = json::array();
    for (std::size_t i = 0; i < realism.size(); ++i) {
      // JSON has no +inf; the sentinel becomes null with in_manifold=true.
      if (std::isinf(realism[i])) jr.push_back(nullptr);
      else jr.push_back(round9(realism[i]));
      if (rarity[i]) jt.push_back(round9(*rarity[i]));
      else jt.push_back(nullptr);
      jm.push_back(rarity[i].has_value());
    }
    doc["realism"] = std::move(jr);
    doc["rarity"] = std::move(jt);
    doc["in_manifold"] = std::move(jm);
    emit(doc.dump(2) + "\n", args.common);
  } else {
    std::string out = "index,realism,rarity,in_manifold\n";
    for (std::size_t i = 0; i < realism.size(); ++i) {
      out += std::to_string(i) + "," + fmt9(realism[i]) + ",";
      if (rarity[i]) out += fmt9(*rarity[i]);
      out += rarity[i] ? ",1\n" : ",0\n";
    }
    emit(out, args.common);
  }
}

struct RankArgs {
  CommonOptions common;
  std::string scores_path, train_path, query_path;
  double sigma = 20.0;
  std::size_t top = 0, middle = 0, bottom = 0;
  bool top_set = false, middle_set = false, bottom_set = false;
};

void run_rank(const RankArgs& args) {
  ls::ScoreVector scores;
  if (!args.scores_path.empty()) {
    scores = load_scores(args.scores_path);
  } else if (!args.train_path.empty() && !args.query_path.empty()) {
    const ls::LatentMatrix train = load(args.train_path, args.common);
    const ls::LatentMatrix query = load(args.query_path, args.common);
    ls::DensityConfig config{args.sigma, args.common.chunk_rows, args.common.threads};
    scores = ls::latent_density(query, train, config);
  } else {
    throw ls::ConfigError("rank needs either --scores or both --query and --train");
  }
  if (!args.top_set && !args.middle_set && !args.bottom_set) {
    throw ls::ConfigError("rank needs at least one of --top, --middle, --bottom");
  }

  const ls::Ranking ranking = ls::rank_by_score(scores);
  auto join = [](const std::vector<std::size_t>& idx) {
    std::string line;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (i) line.push_back(',');
      line += std::to_string(idx[i]);
    }
    return line;
  };

  if (args.common.out_format == "json") {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    if (args.top_set) doc["top"] = ls::select(ranking, ls::Selection::TopK, args.top);
    if (args.middle_set) doc["middle"] = ls::select(ranking, ls::Selection::MiddleK, args.middle);
    if (args.bottom_set) doc["bottom"] = ls::select(ranking, ls::Selection::BottomK, args.bottom);
    emit(doc.dump(2) + "\n", args.common);
  } else {
    std::string out;
    if (args.top_set) out += join(ls::select(ranking, ls::Selection::TopK, args.top)) + "\n";
    if (args.middle_set)
      out += join(ls::select(ranking, ls::Selection::MiddleK, args.middle)) + "\n";
    if (args.bottom_set)
      out += join(ls::select(ranking, ls::Selection::BottomK, args.bottom)) + "\n";
    emit(out, args.common);
  }
}

struct CurveArgs {
  CommonOptions common;
  std::string fake_path, real_path;
  std::vector<std::size_t> ks;
  std::size_t k = 3;
  double sigma = 20.0;
};

void run_curve(const CurveArgs& args) {
  const ls::LatentMatrix fake = load(args.fake_path, args.common);
  const ls::LatentMatrix real = load(args.real_path, args.common);
  ls::DensityConfig config{args.sigma, args.common.chunk_rows, args.common.threads};
  const ls::ScoreVector scores = ls::latent_density(fake, real, config);
  const ls::Ranking ranking = ls::rank_by_score(scores);
  const auto curve =
      ls::topk_metric_curve(fake, real, ranking, args.ks, args.k, args.common.threads);

  if (args.common.out_format == "json") {
    json arr = json::array();
    for (const auto& p : curve) {
      arr.push_back({{"top_k", p.top_k},
                     {"precision", round9(p.precision)},
                     {"recall", round9(p.recall)},
                     {"mean_realism", std::isnan(p.mean_realism) ? json(nullptr)
                                                                 : json(round9(p.mean_realism))},
                     {"realism_excluded", p.realism_excluded}});
    }
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["k"] = args.k;
    doc["sigma"] = args.sigma;
    doc["points"] = std::move(arr);
    emit(doc.dump(2) + "\n", args.common);
  } else {
    std::string out = "top_k,precision,recall,mean_realism,realism_excluded\n";
    for (const auto& p : curve) {
      out += std::to_string(p.top_k) + "," + fmt9(p.precision) + "," + fmt9(p.recall) + "," +
             fmt9(p.mean_realism) + "," + std::to_string(p.realism_excluded) + "\n";
    }
    emit(out, args.common);
  }
}

struct TruncationArgs {
  CommonOptions common;
  std::string codes_path, train_path;
  std::vector<double> psis;
  double sigma = 20.0;
};

void run_truncation_sweep(const TruncationArgs& args) {
  const ls::LatentMatrix codes = load(args.codes_path, args.common);
  const ls::LatentMatrix train = load(args.train_path, args.common);
  ls::DensityConfig config{args.sigma, args.common.chunk_rows, args.common.threads};
  const auto sweep = ls::truncation_sweep(codes, train, args.psis, config);

  if (args.common.out_format == "json") {
    json arr = json::array();
    for (const auto& [psi, score] : sweep)
      arr.push_back({{"psi", psi}, {"mean_latent_density", round9(score)}});
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["sigma"] = args.sigma;
    doc["points"] = std::move(arr);
    emit(doc.dump(2) + "\n", args.common);
  } else {
    std::string out = "psi,mean_latent_density\n";
    for (const auto& [psi, score] : sweep) out += fmt9(psi) + "," + fmt9(score) + "\n";
    emit(out, args.common);
  }
}

struct SigmaSweepArgs {
  CommonOptions common;
  std::string query_path, train_path;
  std::vector<double> sigmas;
};

void run_sigma_sweep(const SigmaSweepArgs& args) {
  const ls::LatentMatrix query = load(args.query_path, args.common);
  const ls::LatentMatrix train = load(args.train_path, args.common);
  ls::DensityConfig config;
  config.chunk_rows = args.common.chunk_rows;
  config.threads = args.common.threads;
  const auto columns = ls::sigma_sweep(query, train, args.sigmas, config);

  if (args.common.out_format == "json") {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["sigmas"] = args.sigmas;
    json rows = json::array();
    for (std::size_t r = 0; r < query.rows(); ++r) {
      json row = json::array();
      for (const auto& col : columns) row.push_back(round9(col[r]));
      rows.push_back(std::move(row));
    }
    doc["scores"] = std::move(rows);
    emit(doc.dump(2) + "\n", args.common);
  } else {
    std::string out = "index";
    for (const double s : args.sigmas) out += ",sigma=" + fmt9(s);
    out.push_back('\n');
    for (std::size_t r = 0; r < query.rows(); ++r) {
      out += std::to_string(r);
      for (const auto& col : columns) {
        out.push_back(',');
        out += fmt9(col[r]);
      }
      out.push_back('\n');
    }
    emit(out, args.common);
  }
}

struct SigmaRecallArgs {
  CommonOptions common;
  std::string fake_path, real_path;
  std::vector<double> sigmas;
  double top_fraction = 0.2;
  std::size_t k = 3;
};

void run_sigma_recall(const SigmaRecallArgs& args) {
  const ls::LatentMatrix fake = load(args.fake_path, args.common);
  const ls::LatentMatrix real = load(args.real_path, args.common);
  ls::DensityConfig config;
  config.chunk_rows = args.common.chunk_rows;
  config.threads = args.common.threads;
  const auto result = ls::sigma_recall_analysis(fake, real, args.sigmas, args.top_fraction,
                                                args.k, config);

  if (args.common.out_format == "json") {
    json arr = json::array();
    for (const auto& [sigma, recall] : result)
      arr.push_back({{"sigma", sigma}, {"recall", round9(recall)}});
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["top_fraction"] = args.top_fraction;
    doc["k"] = args.k;
    doc["points"] = std::move(arr);
    emit(doc.dump(2) + "\n", args.common);
  } else {
    std::string out = "sigma,recall\n";
    for (const auto& [sigma, recall] : result) out += fmt9(sigma) + "," + fmt9(recall) + "\n";
    emit(out, args.common);
  }
}

struct EditArgs {
  CommonOptions common;
  std::string codes_path, direction_path, train_path;
  std::vector<double> alphas;
  double sigma = 20.0;
};

void run_edit(const EditArgs& args) {
  const ls::LatentMatrix codes = load(args.codes_path, args.common);
  const ls::LatentMatrix direction = load(args.direction_path, args.common);
  if (direction.rows() != 1) {
    throw ls::ValidationError("direction file must contain exactly one row, got " +
                              std::to_string(direction.rows()));
  }

  if (!args.train_path.empty()) {
    // Score each edit strength: mean latent density of codes + alpha*direction.
    const ls::LatentMatrix train = load(args.train_path, args.common);
    ls::DensityConfig config{args.sigma, args.common.chunk_rows, args.common.threads};
    std::string out = "alpha,mean_latent_density\n";
    json arr = json::array();
    for (const double alpha : args.alphas) {
      const ls::LatentMatrix edited = ls::apply_direction(codes, direction.row(0), alpha);
      const ls::ScoreVector scores = ls::latent_density(edited, train, config);
      double sum = 0.0;
      for (const double s : scores) sum += s;
      const double mean = sum / static_cast<double>(scores.size());
      out += fmt9(alpha) + "," + fmt9(mean) + "\n";
      arr.push_back({{"alpha", alpha}, {"mean_latent_density", round9(mean)}});
    }
    if (args.common.out_format == "json") {
      json doc;
      doc["schema_version"] = kSchemaVersion;
      doc["sigma"] = args.sigma;
      doc["points"] = std::move(arr);
      emit(doc.dump(2) + "\n", args.common);
    } else {
      emit(out, args.common);
    }
    return;
  }

  if (args.alphas.size() != 1 || args.common.out.empty()) {
    throw ls::ConfigError("edit without --train writes edited codes: pass exactly one "
                          "--alphas value and --out");
  }
  const ls::LatentMatrix edited = ls::apply_direction(codes, direction.row(0), args.alphas[0]);
  ls::save_embeddings(edited, args.common.out, make_format(args.common));
}

struct SynthArgs {
  CommonOptions common;
  std::string spec_path;
  std::size_t n = 0;
  std::optional<std::uint64_t> seed;
};

void run_synth(const SynthArgs& args) {
  const ls::MixtureModel model = ls::load_mixture(args.spec_path);
  const std::uint64_t seed = args.seed.value_or(model.seed);
  const ls::LatentMatrix draws = ls::sample_mixture(model, args.n, seed);
  if (args.common.out.empty()) {
    throw ls::ConfigError("synth writes an embedding file; pass --out");
  }
  ls::save_embeddings(draws, args.common.out, make_format(args.common));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Latent-space sample quality metrics over embedding files"};
  app.require_subcommand(1);

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand(
      "score", "Latent density score of each query code against a training set");
  score_cmd->add_option("--train", score.train_path, "Training-code embedding file")->required();
  score_cmd->add_option("--query", score.query_path, "Query-code embedding file")->required();
  score_cmd->add_option("--sigma", score.sigma, "Gaussian kernel bandwidth")
      ->capture_default_str();
  add_common_flags(score_cmd, score.common);

  MetricsArgs metrics;
  auto* metrics_cmd = app.add_subcommand(
      "metrics", "Precision/recall and density/coverage of a fake set against a real set");
  metrics_cmd->add_option("--fake", metrics.fake_path, "Fake-code embedding file")->required();
  metrics_cmd->add_option("--real", metrics.real_path, "Real-code embedding file")->required();
  metrics_cmd->add_option("--k", metrics.k, "Neighbor count for precision/recall")
      ->capture_default_str();
  metrics_cmd->add_option("--k-density", metrics.k_density, "Neighbor count for density/coverage")
      ->capture_default_str();
  metrics.common.out_format = "json";
  add_common_flags(metrics_cmd, metrics.common, false);

  KnnScoresArgs knn;
  auto* knn_cmd = app.add_subcommand(
      "knn-scores", "Per-sample realism and rarity scores against the real manifold");
  knn_cmd->add_option("--fake", knn.fake_path, "Fake-code embedding file")->required();
  knn_cmd->add_option("--real", knn.real_path, "Real-code embedding file")->required();
  knn_cmd->add_option("--k", knn.k, "Neighbor count for the real manifold")
      ->capture_default_str();
  add_common_flags(knn_cmd, knn.common, false);

  RankArgs rank;
  auto* rank_cmd =
      app.add_subcommand("rank", "Select top/middle/bottom samples by score");
  rank_cmd->add_option("--scores", rank.scores_path, "Score table from `score` (csv)");
  rank_cmd->add_option("--train", rank.train_path, "Training codes (to score on the fly)");
  rank_cmd->add_option("--query", rank.query_path, "Query codes (to score on the fly)");
  rank_cmd->add_option("--sigma", rank.sigma, "Bandwidth for on-the-fly scoring")
      ->capture_default_str();
  rank_cmd->add_option("--top", rank.top, "Select the best K");
  rank_cmd->add_option("--middle", rank.middle, "Select K around the median rank");
  rank_cmd->add_option("--bottom", rank.bottom, "Select the worst K, ascending score");
  add_common_flags(rank_cmd, rank.common);

  CurveArgs curve;
  auto* curve_cmd = app.add_subcommand(
      "curve", "Precision/recall/realism of top-k-by-density subsets for each k");
  curve_cmd->add_option("--fake", curve.fake_path, "Fake-code embedding file")->required();
  curve_cmd->add_option("--real", curve.real_path, "Real-code embedding file")->required();
  curve_cmd->add_option("--ks", curve.ks, "Strictly ascending top-k sizes")
      ->required()
      ->delimiter(',');
  curve_cmd->add_option("--k", curve.k, "Neighbor count for the manifolds")
      ->capture_default_str();
  curve_cmd->add_option("--sigma", curve.sigma, "Bandwidth for the density ranking")
      ->capture_default_str();
  add_common_flags(curve_cmd, curve.common);

  TruncationArgs trunc;
  auto* trunc_cmd = app.add_subcommand(
      "truncation-sweep", "Mean latent density of codes truncated toward the train mean");
  trunc_cmd->add_option("--codes", trunc.codes_path, "Codes to truncate")->required();
  trunc_cmd->add_option("--train", trunc.train_path, "Training-code embedding file")->required();
  trunc_cmd->add_option("--psis", trunc.psis, "Truncation parameters in [0,1]")
      ->required()
      ->delimiter(',');
  trunc_cmd->add_option("--sigma", trunc.sigma, "Gaussian kernel bandwidth")
      ->capture_default_str();
  add_common_flags(trunc_cmd, trunc.common);

  SigmaSweepArgs ssweep;
  auto* ssweep_cmd =
      app.add_subcommand("sigma-sweep", "Latent density scores per query for each sigma");
  ssweep_cmd->add_option("--query", ssweep.query_path, "Query-code embedding file")->required();
  ssweep_cmd->add_option("--train", ssweep.train_path, "Training-code embedding file")
      ->required();
  ssweep_cmd->add_option("--sigmas", ssweep.sigmas, "Bandwidths to sweep")
      ->required()
      ->delimiter(',');
  add_common_flags(ssweep_cmd, ssweep.common);

  SigmaRecallArgs srecall;
  auto* srecall_cmd = app.add_subcommand(
      "sigma-recall", "Recall of the top-fraction-by-density subset for each sigma");
  srecall_cmd->add_option("--fake", srecall.fake_path, "Fake-code embedding file")->required();
  srecall_cmd->add_option("--real", srecall.real_path, "Real-code embedding file")->required();
  srecall_cmd->add_option("--sigmas", srecall.sigmas, "Bandwidths to sweep")
      ->required()
      ->delimiter(',');
  srecall_cmd->add_option("--top-fraction", srecall.top_fraction, "Kept fraction in (0,1]")
      ->capture_default_str();
  srecall_cmd->add_option("--k", srecall.k, "Neighbor count for the recall manifold")
      ->capture_default_str();
  add_common_flags(srecall_cmd, srecall.common);

  EditArgs edit;
  auto* edit_cmd = app.add_subcommand(
      "edit", "Apply codes + alpha*direction; with --train, score each alpha");
  edit_cmd->add_option("--codes", edit.codes_path, "Codes to edit")->required();
  edit_cmd->add_option("--direction", edit.direction_path, "Single-row direction embedding")
      ->required();
  edit_cmd->add_option("--alphas", edit.alphas, "Edit strengths")->required()->delimiter(',');
  edit_cmd->add_option("--train", edit.train_path, "Training codes for density scoring");
  edit_cmd->add_option("--sigma", edit.sigma, "Gaussian kernel bandwidth")
      ->capture_default_str();
  add_common_flags(edit_cmd, edit.common);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand(
      "synth", "Draw deterministic samples from a Gaussian-mixture spec");
  synth_cmd->add_option("--spec", synth.spec_path, "Mixture spec JSON")->required();
  synth_cmd->add_option("--n", synth.n, "Number of samples")->required();
  synth_cmd->add_option("--seed", synth.seed, "Override the spec seed");
  add_common_flags(synth_cmd, synth.common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (score_cmd->parsed()) run_score(score);
    if (metrics_cmd->parsed()) run_metrics(metrics);
    if (knn_cmd->parsed()) run_knn_scores(knn);
    if (rank_cmd->parsed()) {
      rank.top_set = rank_cmd->count("--top") > 0;
      rank.middle_set = rank_cmd->count("--middle") > 0;
      rank.bottom_set = rank_cmd->count("--bottom") > 0;
      run_rank(rank);
    }
    if (curve_cmd->parsed()) run_curve(curve);
    if (trunc_cmd->parsed()) run_truncation_sweep(trunc);
    if (ssweep_cmd->parsed()) run_sigma_sweep(ssweep);
    if (srecall_cmd->parsed()) run_sigma_recall(srecall);
    if (edit_cmd->parsed()) run_edit(edit);
    if (synth_cmd->parsed()) run_synth(synth);
  } catch (const ls::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ls::NumericDomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const ls::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
