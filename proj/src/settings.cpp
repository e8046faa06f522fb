#include "rdm/settings.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "rdm/error.hpp"
#include "text_util.hpp"

namespace rdm {

namespace {

[[noreturn]] void type_error(std::string_view key, std::string_view value, std::string_view want) {
  throw Error(Errc::TypeError,
              std::string(key) + ": expected " + std::string(want) + ", got '" + std::string(value) + "'");
}

double as_fraction(std::string_view key, std::string_view v) {
  const auto d = text::parse_double(v);
  if (!d || !(*d >= 0.0 && *d <= 1.0)) type_error(key, v, "a number in [0, 1]");
  return *d;
}

double as_positive(std::string_view key, std::string_view v) {
  const auto d = text::parse_double(v);
  if (!d || !(*d > 0.0) || !std::isfinite(*d)) type_error(key, v, "a positive number");
  return *d;
}

std::size_t as_count(std::string_view key, std::string_view v) {
  const auto n = text::parse_int<std::size_t>(v);
  if (!n) type_error(key, v, "a nonnegative integer");
  return *n;
}

bool as_bool(std::string_view key, std::string_view v) {
  const std::string l = text::lower(v);
  if (l == "yes" || l == "true") return true;
  if (l == "no" || l == "false") return false;
  type_error(key, v, "yes/no/true/false");
}

void require_word(std::string_view key, std::string_view v, std::string_view word) {
  if (!text::iequals(v, word)) type_error(key, v, "'" + std::string(word) + "'");
}

const std::set<std::string, std::less<>>& legacy_keys() {
  static const std::set<std::string, std::less<>> keys{
      "JavaPath", "ClusPath", "System", "legacy", "clusteringMemory", "GeneratingModelType",
      "SupplementPredictiveTreeType"};
  return keys;
}

using Setter = std::function<void(Settings&, std::string_view key, std::string_view value)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table{
      {"minJS", [](Settings& s, auto k, auto v) { s.config.min_jaccard = as_fraction(k, v); }},
      {"maxPval", [](Settings& s, auto k, auto v) { s.config.max_pvalue = as_fraction(k, v); }},
      {"MinSupport", [](Settings& s, auto k, auto v) { s.config.min_support = as_count(k, v); }},
      {"MaxSupport", [](Settings& s, auto k, auto v) { s.config.max_support = as_count(k, v); }},
      {"WorkingRSSize", [](Settings& s, auto k, auto v) { s.config.working_size = as_count(k, v); }},
      {"MaxRSSize", [](Settings& s, auto k, auto v) { s.config.max_size = as_count(k, v); }},
      {"numRetRed", [](Settings& s, auto k, auto v) { s.config.num_ret_red = as_count(k, v); }},
      {"ATreeDepth", [](Settings& s, auto k, auto v) { s.config.tree_depth = as_count(k, v); }},
      {"NumTarget", [](Settings& s, auto k, auto v) { s.config.num_target = as_count(k, v); }},
      {"numTrees",
       [](Settings&, auto k, auto v) {
         if (as_count(k, v) != 1) type_error(k, v, "1 (one main tree)");
       }},
      {"numSupplementTrees", [](Settings& s, auto k, auto v) { s.config.n_supplement_trees = as_count(k, v); }},
      {"numIterations", [](Settings& s, auto k, auto v) { s.config.num_iterations = as_count(k, v); }},
      {"numRandomRestarts", [](Settings& s, auto k, auto v) { s.config.num_random_restarts = as_count(k, v); }},
      {"numNewAttr", [](Settings& s, auto k, auto v) { s.config.num_new_attr = as_count(k, v); }},
      {"minAddRedJS", [](Settings& s, auto k, auto v) { s.config.min_add_red_js = as_fraction(k, v); }},
      {"ruleSizeNormalization", [](Settings& s, auto k, auto v) { s.config.rule_size_norm = as_positive(k, v); }},
      {"allowLeftNeg", [](Settings& s, auto k, auto v) { s.config.left.allow_neg = as_bool(k, v); }},
      {"allowRightNeg", [](Settings& s, auto k, auto v) { s.config.right.allow_neg = as_bool(k, v); }},
      {"allowLeftDisj", [](Settings& s, auto k, auto v) { s.config.left.allow_disj = as_bool(k, v); }},
      {"allowRightDisj", [](Settings& s, auto k, auto v) { s.config.right.allow_disj = as_bool(k, v); }},
      {"minimizeRules", [](Settings& s, auto k, auto v) { s.config.minimize_rules = as_bool(k, v); }},
      {"joiningProcedure", [](Settings& s, auto k, auto v) { s.config.joining_procedure = as_bool(k, v); }},
      {"unguidedExpansion", [](Settings& s, auto k, auto v) { s.config.unguided_expansion = as_bool(k, v); }},
      {"allowSERed", [](Settings& s, auto k, auto v) { s.config.allow_same_support = as_bool(k, v); }},
      {"clusteringMode",
       [](Settings&, auto k, auto v) {
         if (as_count(k, v) != 2) type_error(k, v, "2 (Freedman-Diaconis bins)");
       }},
      {"redesSetSizeType", [](Settings&, auto k, auto v) { require_word(k, v, "exact"); }},
      {"optimizationType", [](Settings&, auto k, auto v) { require_word(k, v, "extraction"); }},
      {"jsType", [](Settings&, auto k, auto v) { require_word(k, v, "qnm"); }},
      {"OutputFileName", [](Settings& s, auto, auto v) { s.output_file_name = std::string(v); }},
      {"OutputFolder", [](Settings& s, auto, auto v) { s.output_folder = std::string(v); }},
      {"preferenceFilePath", [](Settings& s, auto, auto v) { s.preference_file = std::string(v); }},
      {"seed",
       [](Settings& s, auto k, auto v) {
         const auto n = text::parse_int<std::uint64_t>(v);
         if (!n) type_error(k, v, "a nonnegative integer");
         s.config.seed = *n;
       }},
      {"numThreads",
       [](Settings& s, auto k, auto v) {
         s.config.n_threads = as_count(k, v);
         if (s.config.n_threads == 0) type_error(k, v, "a positive integer");
       }},
      {"minLeafSize",
       [](Settings& s, auto k, auto v) {
         s.config.min_leaf = as_count(k, v);
         if (s.config.min_leaf == 0) type_error(k, v, "a positive integer");
       }},
  };
  return table;
}

// W1SideTrees, W2SideTrees, ...
bool is_side_tree_key(std::string_view key) {
  if (key.size() < 11 || key.front() != 'W' || !key.ends_with("SideTrees")) return false;
  const auto digits = key.substr(1, key.size() - 10);
  return text::parse_int<unsigned>(digits).has_value();
}

std::optional<std::size_t> input_index(std::string_view key) {
  if (!key.starts_with("Input")) return std::nullopt;
  const auto n = text::parse_int<std::size_t>(key.substr(5));
  if (!n || *n == 0 || key.substr(5).front() == '+') return std::nullopt;
  return n;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

std::filesystem::path Settings::output_directory() const {
  std::filesystem::path dir = output_folder.empty() ? std::filesystem::path(".") : std::filesystem::path(output_folder);
  return dir / (output_file_name.empty() ? std::string("family") : output_file_name);
}

Settings parse_settings(std::string_view text) {
  Settings s;
  std::set<std::string, std::less<>> seen;
  std::map<std::size_t, std::string> inputs;

  const auto lines = text::split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string_view line = lines[ln];
    if (const auto arrow = line.find("->"); arrow != std::string_view::npos) line = line.substr(0, arrow);
    line = text::trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      s.warnings.push_back("line " + std::to_string(ln + 1) + " has no '=' and was ignored: " +
                           std::string(line));
      continue;
    }
    const std::string key(text::trim(line.substr(0, eq)));
    const std::string value(text::trim(line.substr(eq + 1)));
    if (key.empty()) {
      s.warnings.push_back("line " + std::to_string(ln + 1) + " has an empty key and was ignored");
      continue;
    }
    if (!seen.insert(key).second) throw Error(Errc::DuplicateKey, key + ": given more than once");
    s.entries.emplace_back(key, value);

    if (const auto idx = input_index(key)) {
      if (value.empty()) type_error(key, value, "a file path");
      inputs.emplace(*idx, value);
    } else if (const auto it = setters().find(key); it != setters().end()) {
      it->second(s, key, value);
    } else if (is_side_tree_key(key)) {
      require_word(key, value, "classification");
    } else if (legacy_keys().contains(key)) {
      s.warnings.push_back(key + " is a legacy key and was ignored");
    } else {
      s.warnings.push_back("unknown key " + key + " was ignored");
    }
  }

  if (!inputs.contains(1)) throw Error(Errc::MissingRequired, "Input1: required");
  if (!seen.contains("minJS")) throw Error(Errc::MissingRequired, "minJS: required");
  if (!seen.contains("maxPval")) throw Error(Errc::MissingRequired, "maxPval: required");
  std::size_t expect = 1;
  for (auto& [idx, path] : inputs) {
    if (idx != expect) {
      throw Error(Errc::ConfigInvalid, "Input" + std::to_string(expect) + " is missing before Input" +
                                           std::to_string(idx));
    }
    s.inputs.push_back(std::move(path));
    ++expect;
  }
  s.config.validate();
  return s;
}

std::string serialize_settings(const Settings& s) {
  const MinerConfig& c = s.config;
  std::ostringstream out;
  for (std::size_t i = 0; i < s.inputs.size(); ++i) out << "Input" << i + 1 << " = " << s.inputs[i] << '\n';
  if (!s.output_folder.empty()) out << "OutputFolder = " << s.output_folder << '\n';
  if (!s.output_file_name.empty()) out << "OutputFileName = " << s.output_file_name << '\n';
  if (!s.preference_file.empty()) out << "preferenceFilePath = " << s.preference_file << '\n';
  out << "minJS = " << text::format_double(c.min_jaccard) << '\n'
      << "maxPval = " << text::format_double(c.max_pvalue) << '\n'
      << "MinSupport = " << c.min_support << '\n'
      << "MaxSupport = " << c.max_support << '\n'
      << "WorkingRSSize = " << c.working_size << '\n'
      << "MaxRSSize = " << c.max_size << '\n'
      << "numRetRed = " << c.num_ret_red << '\n'
      << "ATreeDepth = " << c.tree_depth << '\n'
      << "minLeafSize = " << c.min_leaf << '\n'
      << "NumTarget = " << c.num_target << '\n'
      << "numSupplementTrees = " << c.n_supplement_trees << '\n'
      << "numIterations = " << c.num_iterations << '\n'
      << "numRandomRestarts = " << c.num_random_restarts << '\n'
      << "numNewAttr = " << c.num_new_attr << '\n'
      << "minAddRedJS = " << text::format_double(c.min_add_red_js) << '\n'
      << "ruleSizeNormalization = " << text::format_double(c.rule_size_norm) << '\n'
      << "allowLeftNeg = " << yes_no(c.left.allow_neg) << '\n'
      << "allowRightNeg = " << yes_no(c.right.allow_neg) << '\n'
      << "allowLeftDisj = " << yes_no(c.left.allow_disj) << '\n'
      << "allowRightDisj = " << yes_no(c.right.allow_disj) << '\n'
      << "minimizeRules = " << yes_no(c.minimize_rules) << '\n'
      << "joiningProcedure = " << yes_no(c.joining_procedure) << '\n'
      << "unguidedExpansion = " << yes_no(c.unguided_expansion) << '\n'
      << "allowSERed = " << yes_no(c.allow_same_support) << '\n'
      << "numThreads = " << c.n_threads << '\n'
      << "seed = " << c.seed << '\n';
  return out.str();
}

std::vector<double> parse_preferences(std::string_view text) {
  std::string body;
  for (const char ch : text) body += (ch == '[' || ch == ']' || ch == ',') ? ' ' : ch;
  std::istringstream in(body);
  std::vector<double> w;
  std::string tok;
  while (in >> tok) {
    const auto d = text::parse_double(tok);
    if (!d || !(*d >= 0.0) || !std::isfinite(*d)) type_error("preferences", tok, "a nonnegative number");
    w.push_back(*d);
  }
  if (w.size() != 5 && w.size() != 6) {
    throw Error(Errc::TypeError, "preferences: expected 5 or 6 weights, got " + std::to_string(w.size()));
  }
  return w;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Settings load_settings(const std::filesystem::path& path) {
  Settings s = parse_settings(read_text_file(path));
  const auto base = path.parent_path();
  auto resolve = [&](std::string& p) {
    if (!p.empty() && std::filesystem::path(p).is_relative()) p = (base / p).lexically_normal().string();
  };
  for (auto& in : s.inputs) resolve(in);
  resolve(s.output_folder);
  if (s.output_folder.empty()) s.output_folder = base.empty() ? "." : base.string();
  if (!s.preference_file.empty()) {
    resolve(s.preference_file);
    s.config.preference_weights = parse_preferences(read_text_file(s.preference_file));
  }
  return s;
}

}  // namespace rdm
