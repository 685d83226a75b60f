// Copyright 2026 The wordalign Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// wordalign: transcript-to-word-box alignment and evaluation.
//
//   wordalign simulate   --out-dir DIR [--seed S] [--pages P] ...
//   wordalign align      --proposals P --transcript T --out A [params]
//   wordalign search     --database P (--query Q ... | --queries-from TRUTH) [--out R]
//   wordalign eval-align --alignment A --truth TRUTH
//   wordalign eval-map   --results R --truth TRUTH [--iou-threshold 0.5]
//   wordalign embed      WORD...
//   wordalign render     --alignment A [--truth TRUTH] --out SVG
//   wordalign calibrate  [--target 0.8]
//
// Exit codes: 0 ok, 2 input validation, 3 numeric failure, 4 I/O.

#include <omp.h>

#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "wordalign/alignment.hpp"
#include "wordalign/error.hpp"
#include "wordalign/io.hpp"
#include "wordalign/log.hpp"
#include "wordalign/render.hpp"
#include "wordalign/retrieval.hpp"
#include "wordalign/synth.hpp"

namespace fs = std::filesystem;
using namespace wordalign;
using io::Json;

namespace {

struct ParamFlags {
  AlignmentParams params;
  std::string harvest_mode = "hard";
  std::string exponent_sign = "neg";

  void attach(CLI::App *app) {
    app->add_option("--epsilon", params.epsilon, "Residual likelihood for rule violations")
        ->capture_default_str();
    app->add_option("--top-k", params.top_k, "Candidate boxes kept per unique word")
        ->capture_default_str();
    app->add_option("--tau", params.tau, "Posterior threshold for weak annotations")
        ->capture_default_str();
    app->add_option("--harvest-mode", harvest_mode, "hard: argmax per position; soft: all above tau")
        ->check(CLI::IsMember({"hard", "soft"}))
        ->capture_default_str();
    app->add_option("--score-threshold", params.score_threshold, "Minimum wordness score")
        ->capture_default_str();
    app->add_option("--nms-overlap", params.nms_overlap, "IoU threshold of the score NMS")
        ->capture_default_str();
    app->add_option("--emission-exponent-sign", exponent_sign,
                    "neg (decaying Gaussian) or pos (growing exponent, for comparison only)")
        ->check(CLI::IsMember({"neg", "pos"}))
        ->capture_default_str();
  }

  AlignmentParams resolve() {
    params.harvest_mode = parse_harvest_mode(harvest_mode);
    params.emission_sign = parse_exponent_sign(exponent_sign);
    params.validate();
    return params;
  }
};

void emit(const std::string &out_path, const std::string &text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    io::write_file_atomic(out_path, text);
  }
}

/// Page objects of a file keyed by page_id, preserving order.
template <typename T, typename Parse>
std::vector<T> read_pages(const std::string &path, Parse parse, bool *was_array = nullptr) {
  std::vector<T> out;
  for (const auto &j : io::page_objects(io::read_json_file(path), was_array)) out.push_back(parse(j));
  return out;
}

GroundTruth read_truth(const std::string &path) {
  GroundTruth truth;
  truth.pages = read_pages<PageTruth>(path, io::truth_from_json);
  return truth;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string out_dir;
  std::uint64_t seed = 1;
  int pages = 1;
  double noise_sigma = kDefaultNoiseSigma;
  std::optional<double> target_cosine;
  double decoy_ratio = 3.0;
  int lines = 12;
  int words_min = 7;
  int words_max = 10;
};

int cmd_simulate(const SimulateArgs &args) {
  if (args.pages < 1) throw ValidationError("invalid parameter", "--pages must be positive");
  double sigma = args.noise_sigma;
  if (args.target_cosine) sigma = calibrate_noise_sigma(*args.target_cosine, default_vocabulary(), 4000, 17);
  Json proposals = Json::array(), transcripts = Json::array(), truths = Json::array();
  for (int p = 0; p < args.pages; ++p) {
    SynthConfig cfg;
    cfg.seed = args.seed + static_cast<std::uint64_t>(p);
    cfg.noise_sigma = sigma;
    cfg.decoy_ratio = args.decoy_ratio;
    cfg.lines = args.lines;
    cfg.words_per_line_min = args.words_min;
    cfg.words_per_line_max = args.words_max;
    auto page = generate_page(cfg);
    proposals.push_back(io::to_json(page.proposals));
    transcripts.push_back(io::to_json(page.transcript));
    truths.push_back(io::to_json(page.truth));
  }
  auto single = [&](const Json &arr) { return args.pages == 1 ? arr[0] : arr; };
  fs::path dir(args.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  io::write_file_atomic(dir / "proposals.json", io::dump(single(proposals)));
  io::write_file_atomic(dir / "transcript.json", io::dump(single(transcripts)));
  io::write_file_atomic(dir / "truth.json", io::dump(single(truths)));
  info("wrote " + std::to_string(args.pages) + " page(s) to " + dir.string());
  return 0;
}

struct AlignArgs {
  std::string proposals;
  std::string transcript;
  std::string out;
  int jobs = 1;
  ParamFlags flags;
};

int cmd_align(AlignArgs &args) {
  auto params = args.flags.resolve();
  auto proposal_pages = read_pages<ProposalSet>(args.proposals, io::proposals_from_json);
  bool was_array = false;
  auto transcripts = read_pages<Transcript>(args.transcript, io::transcript_from_json, &was_array);

  std::map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < proposal_pages.size(); ++i) by_id[proposal_pages[i].page.page_id] = i;
  std::vector<std::size_t> match;
  for (const auto &t : transcripts) {
    auto it = by_id.find(t.page_id());
    if (it == by_id.end())
      throw ValidationError("page_id mismatch",
                            "no proposals for transcript page '" + t.page_id() + "'");
    match.push_back(it->second);
  }

  const auto n = static_cast<std::ptrdiff_t>(transcripts.size());
  std::vector<Json> docs(transcripts.size());
  std::vector<std::exception_ptr> failures(transcripts.size());
  int jobs = std::max(1, args.jobs);
#pragma omp parallel for num_threads(jobs) schedule(dynamic) if (jobs > 1)
  for (std::ptrdiff_t p = 0; p < n; ++p) {
    try {
      const auto &t = transcripts[p];
      auto result = align_page(proposal_pages[match[p]], t, params);
      docs[p] = io::to_json(io::make_document(result, t));
    } catch (...) {
      failures[p] = std::current_exception();
    }
  }
  for (auto &f : failures)
    if (f) std::rethrow_exception(f);

  Json out = Json::array();
  for (auto &d : docs) out.push_back(std::move(d));
  emit(args.out, io::dump(was_array ? out : out[0]));
  return 0;
}

struct SearchArgs {
  std::string database;
  std::vector<std::string> queries;
  std::string queries_from;
  std::string out;
  ParamFlags flags;
};

int cmd_search(SearchArgs &args) {
  auto params = args.flags.resolve();
  auto pages = read_pages<ProposalSet>(args.database, io::proposals_from_json);
  std::vector<std::string> queries = args.queries;
  if (!args.queries_from.empty())
    for (const auto &label : read_truth(args.queries_from).unique_labels()) queries.push_back(label);
  if (queries.empty()) throw ValidationError("empty query set", "give --query or --queries-from");
  std::vector<RankedResult> results;
  for (const auto &q : queries) results.push_back(search_pages(q, pages, params));
  emit(args.out, io::dump(io::results_to_json(results)));
  return 0;
}

struct EvalAlignArgs {
  std::string alignment;
  std::string truth;
  std::string source = "posterior";
  std::string out;
};

int cmd_eval_align(const EvalAlignArgs &args) {
  auto docs = read_pages<io::AlignmentDocument>(args.alignment, io::alignment_from_json);
  auto truth = read_truth(args.truth);
  double sum = 0.0;
  Json per_page = Json::array();
  for (const auto &doc : docs) {
    const PageTruth *page = truth.find(doc.page_id);
    if (!page) throw ValidationError("page_id mismatch", "no ground truth for page '" + doc.page_id + "'");
    auto boxes = args.source == "viterbi" ? doc.viterbi_boxes() : doc.posterior_boxes();
    double acc = alignment_accuracy(boxes, *page);
    sum += acc;
    per_page.push_back({{"page_id", doc.page_id}, {"value", acc}});
  }
  if (docs.empty()) throw ValidationError("empty input", "alignment file has no pages");
  Json report;
  report["metric"] = "alignment_accuracy";
  report["value"] = sum / static_cast<double>(docs.size());
  report["t_o"] = 0.5;
  report["num_pages"] = docs.size();
  report["source"] = args.source;
  report["pages"] = std::move(per_page);
  emit(args.out, io::dump(report));
  return 0;
}

struct EvalMapArgs {
  std::string results;
  std::string truth;
  double t_o = 0.5;
  std::string out;
};

int cmd_eval_map(const EvalMapArgs &args) {
  if (!(args.t_o >= 0.0 && args.t_o < 1.0))
    throw ValidationError("invalid parameter", "--iou-threshold must lie in [0, 1)");
  auto results = io::results_from_json(io::read_json_file(args.results));
  auto truth = read_truth(args.truth);
  auto rep = mean_average_precision(results, truth, args.t_o);
  Json report;
  report["metric"] = "mAP";
  report["value"] = rep.value;
  report["t_o"] = args.t_o;
  report["num_queries"] = rep.num_queries;
  report["skipped"] = rep.skipped;
  emit(args.out, io::dump(report));
  return 0;
}

int cmd_embed(const std::vector<std::string> &tokens, const std::string &out) {
  Json list = Json::array();
  for (const auto &t : tokens) {
    auto word = normalize_token(t);
    auto v = dctow(word).values();
    list.push_back({{"token", t}, {"word", word}, {"embedding", std::vector<double>(v.begin(), v.end())}});
  }
  emit(out, io::dump(list));
  return 0;
}

struct RenderArgs {
  std::string alignment;
  std::string truth;
  std::string page_id;
  std::string out;
};

int cmd_render(const RenderArgs &args) {
  auto docs = read_pages<io::AlignmentDocument>(args.alignment, io::alignment_from_json);
  const io::AlignmentDocument *doc = nullptr;
  for (const auto &d : docs)
    if (args.page_id.empty() || d.page_id == args.page_id) {
      doc = &d;
      break;
    }
  if (!doc) throw ValidationError("page_id mismatch", "page '" + args.page_id + "' not in alignment");
  std::optional<GroundTruth> truth;
  if (!args.truth.empty()) truth = read_truth(args.truth);
  const PageTruth *page_truth = truth ? truth->find(doc->page_id) : nullptr;
  if (truth && !page_truth)
    throw ValidationError("page_id mismatch", "no ground truth for page '" + doc->page_id + "'");
  emit(args.out, render_svg(*doc, page_truth));
  return 0;
}

int cmd_calibrate(double target, std::size_t samples, std::uint64_t seed, const std::string &out) {
  double sigma = calibrate_noise_sigma(target, default_vocabulary(), samples, seed);
  Json report;
  report["target_cosine"] = target;
  report["noise_sigma"] = sigma;
  report["calibration_samples"] = samples;
  report["calibration_seed"] = seed;
  report["check_mean_cosine_1000"] = mean_true_cosine(sigma, default_vocabulary(), 1000, seed + 1);
  emit(out, io::dump(report));
  return 0;
}

void print_error(const std::string &code, const std::string &message, int exit_code) {
  Json j;
  j["error"] = code;
  j["message"] = message;
  j["exit_code"] = exit_code;
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Transcript-to-word-box alignment with an HMM over word proposals"};
  app.set_config("--config", "", "TOML/INI file mirroring the flags; flags take precedence");
  app.require_subcommand(1);
  bool verbose = false, quiet = false;
  app.add_flag("-v,--verbose", verbose, "Print progress to stderr");
  app.add_flag("-q,--quiet", quiet, "Suppress warnings");

  SimulateArgs sim;
  auto *simulate = app.add_subcommand("simulate", "Write synthetic proposals, transcript and ground truth");
  simulate->add_option("--out-dir", sim.out_dir, "Output directory")->required();
  simulate->add_option("--seed", sim.seed, "Seed of the first page")->capture_default_str();
  simulate->add_option("--pages", sim.pages, "Number of pages (seeds seed..seed+pages-1)")->capture_default_str();
  simulate->add_option("--noise-sigma", sim.noise_sigma, "Embedding noise scale")->capture_default_str();
  simulate->add_option("--target-cosine", sim.target_cosine, "Calibrate noise to this mean true-pair cosine");
  simulate->add_option("--decoy-ratio", sim.decoy_ratio, "Decoy proposals per true box")->capture_default_str();
  simulate->add_option("--lines", sim.lines, "Text lines per page")->capture_default_str();
  simulate->add_option("--words-min", sim.words_min, "Minimum words per line")->capture_default_str();
  simulate->add_option("--words-max", sim.words_max, "Maximum words per line")->capture_default_str();

  AlignArgs al;
  auto *align = app.add_subcommand("align", "Align a transcript with word proposals");
  align->add_option("--proposals", al.proposals, "Proposals JSON")->required();
  align->add_option("--transcript", al.transcript, "Transcript JSON")->required();
  align->add_option("--out", al.out, "Alignment JSON (default stdout)");
  align->add_option("--jobs", al.jobs, "Pages aligned in parallel")->capture_default_str();
  al.flags.attach(align);

  SearchArgs se;
  auto *search_cmd = app.add_subcommand("search", "Query-by-string search over proposals");
  search_cmd->add_option("--database", se.database, "Proposals JSON")->required();
  search_cmd->add_option("--query", se.queries, "Query string (repeatable)");
  search_cmd->add_option("--queries-from", se.queries_from, "Use every unique label of a truth file")
      ;
  search_cmd->add_option("--out", se.out, "Results JSON (default stdout)");
  se.flags.attach(search_cmd);

  EvalAlignArgs ea;
  auto *eval_align = app.add_subcommand("eval-align", "Alignment accuracy against ground truth");
  eval_align->add_option("--alignment", ea.alignment, "Alignment JSON")->required();
  eval_align->add_option("--truth", ea.truth, "Ground-truth JSON")->required();
  eval_align->add_option("--source", ea.source, "Box per position: posterior argmax or viterbi")
      ->check(CLI::IsMember({"posterior", "viterbi"}))
      ->capture_default_str();
  eval_align->add_option("--out", ea.out, "Report JSON (default stdout)");

  EvalMapArgs em;
  auto *eval_map = app.add_subcommand("eval-map", "Mean average precision of search results");
  eval_map->add_option("--results", em.results, "Results JSON")->required();
  eval_map->add_option("--truth", em.truth, "Ground-truth JSON")->required();
  eval_map->add_option("--iou-threshold", em.t_o, "Relevance IoU threshold t_o")->capture_default_str();
  eval_map->add_option("--out", em.out, "Report JSON (default stdout)");

  std::vector<std::string> tokens;
  std::string embed_out;
  auto *embed = app.add_subcommand("embed", "Print DCToW embeddings of words");
  embed->add_option("words", tokens, "Words to embed")->required();
  embed->add_option("--out", embed_out, "Output JSON (default stdout)");

  RenderArgs re;
  auto *render = app.add_subcommand("render", "Draw an alignment as SVG");
  render->add_option("--alignment", re.alignment, "Alignment JSON")->required();
  render->add_option("--truth", re.truth, "Ground-truth JSON, drawn dashed");
  render->add_option("--page-id", re.page_id, "Page to draw when the file holds several");
  render->add_option("--out", re.out, "SVG path")->required();

  double target = 0.8;
  std::size_t samples = 4000;
  std::uint64_t cal_seed = 17;
  std::string cal_out;
  auto *calibrate = app.add_subcommand("calibrate", "Fit the simulator noise to a mean true-pair cosine");
  calibrate->add_option("--target", target, "Target mean cosine")->capture_default_str();
  calibrate->add_option("--samples", samples, "Monte Carlo samples")->capture_default_str();
  calibrate->add_option("--seed", cal_seed, "Monte Carlo seed")->capture_default_str();
  calibrate->add_option("--out", cal_out, "Report JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    print_error("usage", e.what(), 2);
    return 2;
  }

  set_verbosity(quiet ? Verbosity::kQuiet : verbose ? Verbosity::kInfo : Verbosity::kWarn);
  try {
    if (*simulate) return cmd_simulate(sim);
    if (*align) return cmd_align(al);
    if (*search_cmd) return cmd_search(se);
    if (*eval_align) return cmd_eval_align(ea);
    if (*eval_map) return cmd_eval_map(em);
    if (*embed) return cmd_embed(tokens, embed_out);
    if (*render) return cmd_render(re);
    if (*calibrate) return cmd_calibrate(target, samples, cal_seed, cal_out);
  } catch (const Error &e) {
    int code = static_cast<int>(e.kind());
    print_error(e.code(), e.what(), code);
    return code;
  } catch (const std::exception &e) {
    print_error("numeric failure", e.what(), 3);
    return 3;
  }
  return 0;
}
