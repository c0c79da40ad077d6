#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "kge/training.hpp"

namespace kge {

/// Flat key=value settings. Keys match the long CLI flag names without
/// the leading dashes (gamma, lambda-pos, max-iter, ...).
using Settings = std::map<std::string, std::string>;

/// Training defaults. `gamma` is intentionally absent: the adaptive losses
/// require it explicitly, the other kinds fall back to 15.
Settings default_settings();

/// Parses `key = value` lines; blank lines and `#` comments are ignored.
Settings parse_settings(const std::string& text, const std::string& source = "<memory>");
Settings load_settings(const std::filesystem::path& path);
std::string format_settings(const Settings& settings);

/// Entries of `overrides` replace those of `base`.
Settings merge(Settings base, const Settings& overrides);

/// Builds and validates a TrainConfig. Errors name the offending key.
TrainConfig to_train_config(const Settings& settings);

/// Fully resolved settings, derived values included, such that
/// to_train_config(to_settings(c)) reproduces `c`.
Settings to_settings(const TrainConfig& config);

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

}  // namespace kge
