#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rdm/config.hpp"

namespace rdm {

/// Contents of a `key = value` settings file.
struct Settings {
  MinerConfig config;
  std::vector<std::string> inputs;  // Input1..InputK
  std::string output_folder;
  std::string output_file_name;
  std::string preference_file;
  std::vector<std::pair<std::string, std::string>> entries;  // as read, in file order
  std::vector<std::string> warnings;

  /// Directory the family is written to: output_folder / output_file_name.
  [[nodiscard]] std::filesystem::path output_directory() const;
};

/// Parses `key = value` lines. Text after `->` is a comment; lines without
/// '=' and unknown or legacy keys are skipped with a warning. Booleans accept
/// yes/no/true/false. Throws DuplicateKey, TypeError (message starts with the
/// key), MissingRequired (Input1, minJS, maxPval), ConfigInvalid.
Settings parse_settings(std::string_view text);

/// Canonical `key = value` text; parse_settings(serialize_settings(s))
/// reproduces s.config, the inputs and the output paths.
std::string serialize_settings(const Settings& settings);

/// One line of 5 or 6 nonnegative weights, optionally wrapped in brackets.
/// Throws TypeError.
std::vector<double> parse_preferences(std::string_view text);

/// Reads a settings file and its preference file. Relative paths are
/// resolved against the settings file's directory. Throws Io.
Settings load_settings(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace rdm
