#include "kge/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "kge/checkpoint.hpp"
#include "kge/errors.hpp"
#include "kge/evaluation.hpp"
#include "kge/training.hpp"

namespace kge::cli {
namespace {

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericError& e) {
    err << "numeric divergence: " << e.what() << '\n';
    return kNumericError;
  } catch (const FormatError& e) {
    err << "checkpoint error: " << e.what() << '\n';
    return kFormatError;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void print_summary(std::ostream& out, const char* title, const EvalReport& r) {
  out << title << " (" << r.per_triple.size() << " triples, k=" << r.k << ")\n"
      << "  mean rank   raw " << r.mean_rank_raw << "   filtered " << r.mean_rank_filtered << '\n'
      << "  hits@" << r.k << "     raw " << r.hits_raw << "%   filtered " << r.hits_filtered << "%\n";
}

void write_outputs(const std::filesystem::path& dir, const Settings& resolved, const EvalReport& report,
                   const Vocabulary& vocab) {
  auto rep = open_out(dir / kReportFile);
  // thread count never changes results, so it stays out of the report
  for (const auto& [k, v] : resolved)
    if (k != "workers") rep << "config." << k << '=' << v << '\n';
  write_report(rep, report);
  auto ranks = open_out(dir / kRanksFile);
  write_ranks_tsv(ranks, report, vocab);
}

bool same_symbols(const SymbolTable& a, const SymbolTable& b) { return a.labels() == b.labels(); }

}  // namespace

std::size_t default_workers() {
  if (const char* env = std::getenv("KGE_WORKERS")) {
    try {
      const auto n = std::stoul(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run_train(const TrainRun& run, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (run.out_dir.empty()) throw ConfigError("missing required key 'out'");
    const TrainConfig config = to_train_config(run.settings);
    const Settings resolved = to_settings(config);
    const Dataset dataset = load_dataset(run.train, run.valid, run.test);

    std::filesystem::create_directories(run.out_dir);
    {
      auto cfg = open_out(run.out_dir / kConfigFile);
      cfg << format_settings(resolved);
    }
    auto log = open_out(run.out_dir / kLogFile);
    out << "entities " << dataset.num_entities() << ", relations " << dataset.num_relations() << ", train "
        << dataset.train.size() << ", valid " << dataset.valid.size() << ", test " << dataset.test.size() << '\n';

    const auto result = train(dataset, config, [&](const TrainRecord& r) {
      write_record(log, r);
      log.flush();
      out << "iter " << r.iteration << "  loss " << r.mean_loss << "  xi " << r.xi << "  valid hits@" << config.k
          << ' ' << r.valid_hits << "%  valid MR " << r.valid_mean_rank << '\n';
    });

    const auto ckpt = run.checkpoint.empty() ? run.out_dir / "model.ckpt" : run.checkpoint;
    save_checkpoint(ckpt, result.state, dataset.vocab, resolved);
    out << "checkpoint written to " << ckpt.string() << " (best record " << result.best_record << ", "
        << result.iterations << " iterations)\n";

    if (dataset.test.empty()) {
      out << "no test triples; skipping final evaluation\n";
      return kOk;
    }
    const auto report = evaluate(result.state, dataset.test, dataset, config.norm, config.k, config.workers);
    write_outputs(run.out_dir, resolved, report, dataset.vocab);
    print_summary(out, "test", report);
    return kOk;
  });
}

int run_eval(const EvalRun& run, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Checkpoint ck = load_checkpoint(run.checkpoint);
    Settings settings = ck.config;
    if (run.k) settings["k"] = std::to_string(*run.k);
    if (run.workers) settings["workers"] = std::to_string(*run.workers);
    const TrainConfig config = to_train_config(settings);
    const Settings resolved = to_settings(config);

    const Dataset dataset = load_dataset(run.train, run.valid, run.test);
    if (ck.state.num_entities() != dataset.num_entities() || ck.state.num_relations() != dataset.num_relations())
      throw DataError("checkpoint has " + std::to_string(ck.state.num_entities()) + " entities and " +
                      std::to_string(ck.state.num_relations()) + " relations but the dataset has " +
                      std::to_string(dataset.num_entities()) + " and " + std::to_string(dataset.num_relations()));
    if (!same_symbols(ck.vocab.entities, dataset.vocab.entities) ||
        !same_symbols(ck.vocab.relations, dataset.vocab.relations))
      throw DataError("checkpoint vocabulary does not match the dataset");
    if (dataset.test.empty()) throw DataError("test split is empty");

    const auto report = evaluate(ck.state, dataset.test, dataset, config.norm, config.k, config.workers);
    print_summary(out, "test", report);
    if (!run.out_dir.empty()) {
      std::filesystem::create_directories(run.out_dir);
      write_outputs(run.out_dir, resolved, report, dataset.vocab);
    } else {
      write_report(out, report);
    }
    return kOk;
  });
}

int run_generate(const GenerateRun& run, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (run.out_dir.empty()) throw ConfigError("missing required key 'out'");
    const auto splits = generate_splits(run.spec);
    std::filesystem::create_directories(run.out_dir);
    try {
      write_splits(run.out_dir, splits);
    } catch (...) {
      for (const char* f : {"train.txt", "valid.txt", "test.txt"}) std::filesystem::remove(run.out_dir / f);
      throw;
    }
    out << "wrote " << splits.train.size() << " train, " << splits.valid.size() << " valid, "
        << splits.test.size() << " test triples to " << run.out_dir.string() << '\n';
    return kOk;
  });
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Translation-based knowledge graph embeddings with adaptive margin losses"};
  app.require_subcommand(1);

  // train
  auto* train_cmd = app.add_subcommand("train", "train an embedding model");
  TrainRun train_run;
  std::string config_file;
  std::map<std::string, std::string> flag_values;
  std::vector<std::pair<std::string, CLI::Option*>> flag_opts;
  train_cmd->add_option("--train", train_run.train, "training triples (TSV)")->required();
  train_cmd->add_option("--valid", train_run.valid, "validation triples (TSV)");
  train_cmd->add_option("--test", train_run.test, "test triples (TSV)");
  train_cmd->add_option("--checkpoint", train_run.checkpoint, "checkpoint path (default <out>/model.ckpt)");
  train_cmd->add_option("--out", train_run.out_dir, "output directory")->required();
  train_cmd->add_option("--config", config_file, "key=value config file; flags take precedence");
  const std::pair<const char*, const char*> train_keys[] = {
      {"loss", "mrl | rs | sm | aml-exp | aml-con"},
      {"gamma", "margin (mrl, rs) or margin centre (aml)"},
      {"gamma1", "positive score bound (rs, sm)"},
      {"gamma2", "negative score bound (sm)"},
      {"lambda", "slack regularizer weight"},
      {"lambda-pos", "positive penalty weight"},
      {"lambda-neg", "negative penalty weight"},
      {"sigma", "Gaussian kernel width"},
      {"xi-init", "initial slack"},
      {"contraction-m", "initial slack for aml-con (default gamma/2)"},
      {"dim", "embedding dimension"},
      {"lr", "learning rate"},
      {"optimizer", "sgd | adagrad | adam"},
      {"epsilon", "optimizer stabilizer"},
      {"batch", "positives per batch"},
      {"max-iter", "optimizer steps"},
      {"sampler", "unif | bern"},
      {"negatives", "negatives per positive"},
      {"normalize", "renormalize entity rows after each batch (true/false)"},
      {"eval-every", "iterations between validation runs"},
      {"patience", "evaluations without improvement before stopping (0 = never)"},
      {"norm", "l1 | l2"},
      {"k", "Hits@k cutoff"},
      {"seed", "random seed"},
      {"workers", "evaluation threads"},
  };
  for (const auto& [key, help] : train_keys) {
    auto* opt = train_cmd->add_option(std::string("--") + key, flag_values[key], help);
    flag_opts.emplace_back(key, opt);
  }

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on a test split");
  EvalRun eval_run;
  std::size_t eval_k = 10;
  std::size_t eval_workers = 1;
  eval_cmd->add_option("--train", eval_run.train, "training triples (TSV)")->required();
  eval_cmd->add_option("--valid", eval_run.valid, "validation triples (TSV)");
  eval_cmd->add_option("--test", eval_run.test, "test triples (TSV)")->required();
  eval_cmd->add_option("--checkpoint", eval_run.checkpoint, "checkpoint to evaluate")->required();
  eval_cmd->add_option("--out", eval_run.out_dir, "directory for report.txt and ranks.tsv");
  auto* k_opt = eval_cmd->add_option("--k", eval_k, "Hits@k cutoff (default 10)");
  auto* w_opt = eval_cmd->add_option("--workers", eval_workers, "evaluation threads");

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "write a synthetic knowledge graph as TSV splits");
  GenerateRun gen_run;
  std::string generator = "clustered-relations";
  gen_cmd->add_option("--generator", generator, "chain | clustered-relations | random-er");
  gen_cmd->add_option("--entities", gen_run.spec.num_entities, "number of entities");
  gen_cmd->add_option("--relations", gen_run.spec.num_relations, "number of relations");
  gen_cmd->add_option("--clusters", gen_run.spec.num_clusters, "clusters (clustered-relations)");
  gen_cmd->add_option("--density", gen_run.spec.density, "link keep-probability");
  gen_cmd->add_option("--seed", gen_run.spec.seed, "random seed");
  gen_cmd->add_option("--out", gen_run.out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (*train_cmd) {
    return guarded(err, [&] {
      Settings settings = default_settings();
      settings["workers"] = std::to_string(default_workers());
      if (!config_file.empty()) settings = merge(settings, load_settings(config_file));
      for (const auto& [key, opt] : flag_opts)
        if (opt->count() > 0) settings[key] = flag_values[key];
      train_run.settings = settings;
      return run_train(train_run, out, err);
    });
  }
  if (*eval_cmd) {
    if (k_opt->count() > 0) eval_run.k = eval_k;
    eval_run.workers = w_opt->count() > 0 ? eval_workers : default_workers();
    return run_eval(eval_run, out, err);
  }
  return guarded(err, [&] {
    gen_run.spec.generator = parse_generator(generator);
    return run_generate(gen_run, out, err);
  });
}

}  // namespace kge::cli
