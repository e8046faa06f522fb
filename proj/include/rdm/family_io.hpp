#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rdm/dataset.hpp"
#include "rdm/miner.hpp"
#include "rdm/query.hpp"
#include "rdm/redescription.hpp"

namespace rdm {

/// One `.reds` record as written: header statistics and the queries.
struct StoredRecord {
  std::size_t id = 0;
  double jaccard = 0.0;
  double p_value = 1.0;
  std::size_t support_size = 0;
  std::size_t union_size = 0;
  std::vector<Query> queries;
  std::optional<std::vector<std::size_t>> support;
};

struct StoredSet {
  AttributeRef attribute;
  bool interaction = false;
  std::vector<StoredRecord> records;
};

struct StoredFamily {
  std::vector<std::size_t> selected_views;
  std::vector<StoredSet> sets;
  std::map<std::string, std::string> meta;
};

/// `RED <id> J=<6 decimals> p=<6 significant digits> supp=<n> union=<n>`,
/// then `Q<view>: <query>` per present query and optionally
/// `SUPP: <indices>`.
std::string format_record(const Redescription& red, std::size_t id, bool with_support);

/// `ATTR <view> <name>` followed by the records separated by blank lines.
std::string format_set(const AttributeRef& attribute, const std::vector<Redescription>& reds,
                       bool with_support);

/// Records of one `.reds` text; fills `attribute` from the ATTR line.
/// Throws MalformedHeader, QueryParse.
std::vector<StoredRecord> parse_reds(std::string_view text, std::optional<AttributeRef>* attribute = nullptr);

/// `<view>_<attr>.ind.reds` / `.int.reds`; characters outside
/// [A-Za-z0-9_.-] in the name become '_'.
std::string family_file_name(const AttributeRef& attribute, bool interaction);

/// Writes two files per attribute plus `family.meta`. Throws Io.
void write_family(const RedescriptionFamily& family, const std::filesystem::path& dir,
                  bool with_support = false);

/// Throws Io, MalformedHeader, QueryParse.
StoredFamily read_family(const std::filesystem::path& dir);

/// Counts over a family read back from disk; same definitions as for a
/// mined family.
DescribedCounts count_described(const StoredFamily& family);

/// Re-evaluates a stored record's queries on `ds`.
Redescription evaluate_record(const StoredRecord& record, const MultiViewDataset& ds);

}  // namespace rdm
