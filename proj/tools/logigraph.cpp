// SPDX-License-Identifier: Apache-2.0
#include "logigraph/checkpoint.hpp"
#include "logigraph/config.hpp"
#include "logigraph/graph.hpp"
#include "logigraph/synthgen.hpp"
#include "logigraph/trainer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace logigraph;

namespace {

struct Common {
  std::string library;
  std::string stopwords;

  DelimiterLibrary lib() const {
    return load_library(library.empty() ? std::nullopt : std::optional<std::string>(library));
  }
  std::optional<StopwordSet> stops() const {
    if (stopwords.empty()) return std::nullopt;
    return load_stopwords(stopwords);
  }
};

/// Flags that map onto config keys; only flags actually given are applied.
struct Overrides {
  std::vector<std::pair<std::string, std::string>> values;

  void bind(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_option_function<std::string>(
        flag, [this, key](const std::string& v) { values.emplace_back(key, v); }, help);
  }
  void apply(TrainConfig& cfg) const {
    for (const auto& [k, v] : values) apply_setting(cfg, k, v);
  }
};

void add_ablation_flags(CLI::App* app, Overrides& o, bool* no_graph) {
  o.bind(app, "--edges", "edges", "Edge set: paper, full, random[:p] or single");
  o.bind(app, "--nodes", "nodes", "Node granularity: edu, clause or sentence");
  o.bind(app, "--node-init", "node_init", "Initial node states: pooled or random");
  o.bind(app, "--layers", "layers", "Reasoning layers K");
  app->add_flag("--no-graph", *no_graph, "Bypass the reasoner; fusion receives zero logic embeddings");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot write " + path);
  out << text;
}


int run(int argc, char** argv) {
  CLI::App app{"Discourse-aware logic graphs for multiple-choice reasoning"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--library", common.library, "Delimiter library file (phrase<TAB>explicit|implicit)");
  app.add_option("--stopwords", common.stopwords, "Stopword list, one word per line");

  // segment
  auto* seg = app.add_subcommand("segment", "Print the EDUs of every sample");
  std::string seg_in, seg_format = "text", seg_nodes = "edu";
  int seg_cand = 0;
  seg->add_option("input", seg_in, "Samples (JSONL)")->required();
  seg->add_option("--candidate", seg_cand, "Candidate index");
  seg->add_option("--nodes", seg_nodes, "Granularity: edu, clause or sentence");
  seg->add_option("--format", seg_format, "text or json")->check(CLI::IsMember({"text", "json"}));

  // build-graph
  auto* bg = app.add_subcommand("build-graph", "Build logic graphs and export them");
  std::string bg_in, bg_format = "json", bg_out, bg_cand = "0", bg_sample;
  Overrides bg_over;
  bool bg_no_graph = false;
  bg->add_option("input", bg_in, "Samples (JSONL)")->required();
  bg->add_option("--candidate", bg_cand, "Candidate index or 'all'");
  bg->add_option("--format", bg_format, "json or dot")->check(CLI::IsMember({"json", "dot"}));
  bg->add_option("--out", bg_out, "Output directory; stdout when omitted");
  bg->add_option("--sample", bg_sample, "Only the sample with this id");
  bg_over.bind(bg, "--edges", "edges", "Edge set: paper, full, random[:p] or single");
  bg_over.bind(bg, "--nodes", "nodes", "Node granularity: edu, clause or sentence");
  bg_over.bind(bg, "--max-len", "max_len", "Sequence length limit");
  bg_over.bind(bg, "--seed", "seed", "Seed for random edges");

  // train
  auto* tr = app.add_subcommand("train", "Train a model");
  std::string tr_train, tr_dev, tr_config, tr_out = "model.ckpt", tr_log;
  Overrides tr_over;
  bool tr_no_graph = false;
  tr->add_option("train", tr_train, "Training samples (JSONL)")->required();
  tr->add_option("--dev", tr_dev, "Development samples (JSONL)");
  tr->add_option("--config", tr_config, "key = value config file");
  tr->add_option("--out", tr_out, "Checkpoint path");
  tr->add_option("--log", tr_log, "Metrics log (JSONL)");
  for (const auto& key : config_keys()) {
    if (key == "edges" || key == "nodes" || key == "node_init" || key == "layers" || key == "graph") continue;
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    tr_over.bind(tr, flag, key, "Config key " + key);
  }
  add_ablation_flags(tr, tr_over, &tr_no_graph);

  // eval / predict
  auto* ev = app.add_subcommand("eval", "Score a checkpoint on labelled samples");
  std::string ev_ckpt, ev_in;
  int ev_threads = 1;
  ev->add_option("checkpoint", ev_ckpt)->required();
  ev->add_option("input", ev_in)->required();
  ev->add_option("--threads", ev_threads);
  auto* pr = app.add_subcommand("predict", "Per-sample predictions and probabilities");
  std::string pr_ckpt, pr_in;
  pr->add_option("checkpoint", pr_ckpt)->required();
  pr->add_option("input", pr_in)->required();

  // synth
  auto* sy = app.add_subcommand("synth", "Generate a synthetic dataset");
  std::string sy_preset = "variable-link", sy_out, sy_mode;
  SynthSpec sy_spec;
  std::optional<int> sy_n, sy_c, sy_vocab, sy_hops, sy_facts;
  std::optional<double> sy_overlap, sy_train, sy_dev;
  std::uint64_t sy_seed = 0;
  sy->add_option("--preset", sy_preset, "Preset name")->check(CLI::IsMember(synth_preset_names()));
  sy->add_option("--out", sy_out, "Output directory for train/dev/test JSONL")->required();
  sy->add_option("--n", sy_n, "Number of samples");
  sy->add_option("--candidates", sy_c, "Options per sample");
  sy->add_option("--vocab-size", sy_vocab, "Pseudo-noun pool size");
  sy->add_option("--mode", sy_mode, "variable-link, connective-pattern or mixed");
  sy->add_option("--overlap", sy_overlap, "Distractor overlap in [0,1]");
  sy->add_option("--hops", sy_hops, "1 or 2");
  sy->add_option("--facts", sy_facts, "Facts per context");
  sy->add_option("--train-fraction", sy_train);
  sy->add_option("--dev-fraction", sy_dev);
  sy->add_option("--seed", sy_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::cerr << "error: usage: " << msg << '\n';
    return 2;
  }

  const auto lib = common.lib();
  const auto stops = common.stops();
  const StopwordSet* stop_ptr = stops ? &*stops : nullptr;

  if (*seg) {
    GraphConfig gc;
    gc.granularity = parse_granularity(seg_nodes);
    gc.stopwords = stop_ptr;
    nlohmann::ordered_json all = nlohmann::ordered_json::array();
    for (const auto& s : read_samples(seg_in)) {
      const auto g = build_graph(s, seg_cand, lib, gc);
      if (seg_format == "text") {
        std::cout << "# " << s.id << '\n';
        for (int n = 0; n < g.num_nodes(); ++n)
          std::cout << n << '\t' << to_string(g.nodes[static_cast<std::size_t>(n)].origin) << '\t' << node_text(g, n)
                    << '\n';
      } else {
        nlohmann::ordered_json js;
        js["id"] = s.id;
        js["edus"] = nlohmann::ordered_json::array();
        for (int n = 0; n < g.num_nodes(); ++n) {
          const auto& e = g.nodes[static_cast<std::size_t>(n)];
          js["edus"].push_back({{"id", n},
                                {"origin", to_string(e.origin)},
                                {"start", e.start},
                                {"end", e.end},
                                {"text", node_text(g, n)},
                                {"connective", e.leading_connective ? e.leading_connective->surface : ""}});
        }
        std::cout << js.dump() << '\n';
      }
    }
    return 0;
  }

  if (*bg) {
    TrainConfig cfg;
    bg_over.apply(cfg);
    GraphConfig gc;
    gc.granularity = cfg.model.granularity;
    gc.max_len = cfg.model.max_len;
    gc.stopwords = stop_ptr;
    if (!bg_out.empty()) fs::create_directories(bg_out);
    bool any = false;
    for (const auto& s : read_samples(bg_in)) {
      if (!bg_sample.empty() && s.id != bg_sample) continue;
      std::vector<int> cands;
      if (bg_cand == "all") {
        for (int c = 0; c < s.num_candidates(); ++c) cands.push_back(c);
      } else {
        try {
          cands.push_back(std::stoi(bg_cand));
        } catch (const std::exception&) {
          throw Error("usage", "--candidate expects an index or 'all'");
        }
      }
      for (int c : cands) {
        auto g = build_graph(s, c, lib, gc);
        if (cfg.model.edges.mode != EdgeMode::Paper) {
          Ablation a = cfg.model.edges;
          a.seed = stable_hash(s.id, static_cast<std::uint64_t>(c)) ^ cfg.seed;
          g = ablate(std::move(g), a);
        }
        const std::string text = bg_format == "dot" ? graph_to_dot(g) : graph_to_json(g) + "\n";
        if (bg_out.empty()) std::cout << text;
        else write_text((fs::path(bg_out) / (s.id + ".c" + std::to_string(c) + "." + bg_format)).string(), text);
        any = true;
      }
    }
    if (!any) throw Error("empty", "no matching samples in " + bg_in);
    return 0;
  }

  if (*tr) {
    TrainConfig cfg;
    if (!tr_config.empty()) apply_config_file(cfg, tr_config);
    tr_over.apply(cfg);
    if (tr_no_graph) cfg.model.use_graph = false;
    apply_env(cfg);
    const auto train = read_samples(tr_train);
    if (train.empty()) throw Error("empty", "training set is empty");
    std::vector<Sample> dev;
    if (!tr_dev.empty()) dev = read_samples(tr_dev);
    Model model(cfg.model, Vocab::build(train), cfg.seed);
    const auto train_p = prepare_all(model, train, lib, stop_ptr);
    const auto dev_p = prepare_all(model, dev, lib, stop_ptr);
    std::ofstream log_file;
    std::ostream* log = &std::cout;
    if (!tr_log.empty()) {
      log_file.open(tr_log);
      if (!log_file) throw Error("io", "cannot write " + tr_log);
      log = &log_file;
    }
    Trainer trainer(model, cfg);
    trainer.train(train_p, dev_p.empty() ? nullptr : &dev_p, log);
    save_checkpoint(tr_out, model, cfg, &trainer);
    return 0;
  }

  if (*ev) {
    const auto ck = load_checkpoint(ev_ckpt);
    const auto samples = prepare_all(*ck.model, read_samples(ev_in), lib, stop_ptr);
    std::cout << metrics_to_json(evaluate(*ck.model, samples, ev_threads)) << '\n';
    return 0;
  }

  if (*pr) {
    const auto ck = load_checkpoint(pr_ckpt);
    for (const auto& s : read_samples(pr_in)) {
      const auto p = ck.model->prepare(s, lib, stop_ptr);
      const auto probs = probabilities(*ck.model, p);
      nlohmann::ordered_json j;
      j["id"] = s.id;
      j["prediction"] = ranking(probs).front();
      j["probabilities"] = probs;
      std::cout << j.dump() << '\n';
    }
    return 0;
  }

  if (*sy) {
    SynthSpec spec = synth_preset(sy_preset);
    if (sy_n) spec.n_samples = *sy_n;
    if (sy_c) spec.candidates = *sy_c;
    if (sy_vocab) spec.vocab_size = *sy_vocab;
    if (!sy_mode.empty()) spec.mode = parse_synth_mode(sy_mode);
    if (sy_overlap) spec.distractor_overlap = *sy_overlap;
    if (sy_hops) spec.hops = *sy_hops;
    if (sy_facts) spec.facts = *sy_facts;
    if (sy_train) spec.train_fraction = *sy_train;
    if (sy_dev) spec.dev_fraction = *sy_dev;
    spec.seed = sy_seed;
    const auto splits = generate_splits(spec);
    fs::create_directories(sy_out);
    write_samples((fs::path(sy_out) / "train.jsonl").string(), splits.train);
    write_samples((fs::path(sy_out) / "dev.jsonl").string(), splits.dev);
    write_samples((fs::path(sy_out) / "test.jsonl").string(), splits.test);
    return 0;
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::cerr << "error: " << e.code() << ": " << msg << '\n';
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::cerr << "error: internal: " << msg << '\n';
  }
  return 1;
}
