#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "kge/config.hpp"
#include "kge/synthetic.hpp"

namespace kge::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kDataError = 3;
inline constexpr int kNumericError = 4;
inline constexpr int kFormatError = 5;

struct TrainRun {
  std::filesystem::path train, valid, test;
  std::filesystem::path checkpoint;  // defaults to <out>/model.ckpt
  std::filesystem::path out_dir;
  Settings settings;  // already merged: defaults, config file, flags
};

struct EvalRun {
  std::filesystem::path train, valid, test;
  std::filesystem::path checkpoint;
  std::filesystem::path out_dir;  // optional; machine-readable outputs go here
  std::optional<std::size_t> k;
  std::optional<std::size_t> workers;
};

struct GenerateRun {
  SyntheticSpec spec;
  std::filesystem::path out_dir;
};

/// Files written by run_train / run_eval inside the output directory.
inline constexpr const char* kConfigFile = "config.txt";
inline constexpr const char* kLogFile = "train_log.jsonl";
inline constexpr const char* kReportFile = "report.txt";
inline constexpr const char* kRanksFile = "ranks.tsv";

int run_train(const TrainRun& run, std::ostream& out, std::ostream& err);
int run_eval(const EvalRun& run, std::ostream& out, std::ostream& err);
int run_generate(const GenerateRun& run, std::ostream& out, std::ostream& err);

/// Worker count from KGE_WORKERS, else the number of hardware threads.
std::size_t default_workers();

/// Parses argv and dispatches to a subcommand.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kge::cli
