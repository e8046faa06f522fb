#include "rdm/family_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "rdm/error.hpp"
#include "rdm/settings.hpp"
#include "text_util.hpp"

namespace rdm {

namespace {

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  throw Error(Errc::MalformedHeader, "line " + std::to_string(line) + ": " + what);
}

std::optional<std::string_view> field(std::string_view token, std::string_view name) {
  if (!token.starts_with(name) || token.size() <= name.size() || token[name.size()] != '=') {
    return std::nullopt;
  }
  return token.substr(name.size() + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(Errc::Io, "write failed for " + path.string());
}

std::string join_views(const std::vector<std::size_t>& views) {
  std::string s;
  for (std::size_t i = 0; i < views.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(views[i]);
  }
  return s;
}

}  // namespace

std::string format_record(const Redescription& red, std::size_t id, bool with_support) {
  char head[160];
  std::snprintf(head, sizeof(head), "RED %zu J=%.6f p=%.5e supp=%zu union=%zu\n", id, red.jaccard(),
                red.p_value(), red.support().count(), red.union_support().count());
  std::string out = head;
  for (const std::size_t v : red.present_views()) {
    out += 'Q' + std::to_string(v) + ": " + red.query(v)->to_string() + '\n';
  }
  if (with_support) {
    out += "SUPP: ";
    const auto idx = red.support().indices();
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(idx[i]);
    }
    out += '\n';
  }
  return out;
}

std::string format_set(const AttributeRef& attribute, const std::vector<Redescription>& reds,
                       bool with_support) {
  std::string out = "ATTR " + std::to_string(attribute.view) + ' ' + attribute.name + '\n';
  for (std::size_t i = 0; i < reds.size(); ++i) {
    out += '\n';
    out += format_record(reds[i], i, with_support);
  }
  return out;
}

std::vector<StoredRecord> parse_reds(std::string_view text, std::optional<AttributeRef>* attribute) {
  std::vector<StoredRecord> records;
  const auto lines = text::split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string_view line = text::trim(lines[ln]);
    const std::size_t no = ln + 1;
    if (line.empty()) continue;
    if (line.starts_with("ATTR ")) {
      const auto rest = line.substr(5);
      const auto sp = rest.find(' ');
      const auto view = text::parse_int<std::size_t>(rest.substr(0, sp));
      if (!view || sp == std::string_view::npos) malformed(no, "bad ATTR line");
      if (attribute) *attribute = AttributeRef{*view, std::string(rest.substr(sp + 1))};
      continue;
    }
    if (line.starts_with("RED ")) {
      const auto tok = split_ws(line);
      if (tok.size() != 6) malformed(no, "RED line needs id, J, p, supp and union");
      StoredRecord r;
      const auto id = text::parse_int<std::size_t>(tok[1]);
      const auto j = field(tok[2], "J");
      const auto p = field(tok[3], "p");
      const auto s = field(tok[4], "supp");
      const auto u = field(tok[5], "union");
      if (!id || !j || !p || !s || !u) malformed(no, "bad RED fields");
      const auto jv = text::parse_double(*j);
      const auto pv = text::parse_double(*p);
      const auto sv = text::parse_int<std::size_t>(*s);
      const auto uv = text::parse_int<std::size_t>(*u);
      if (!jv || !pv || !sv || !uv) malformed(no, "bad RED values");
      r.id = *id;
      r.jaccard = *jv;
      r.p_value = *pv;
      r.support_size = *sv;
      r.union_size = *uv;
      records.push_back(std::move(r));
      continue;
    }
    if (records.empty()) malformed(no, "content before the first RED line");
    if (line.starts_with("SUPP:")) {
      std::vector<std::size_t> idx;
      std::string_view rest = text::trim(line.substr(5));
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto v = text::parse_int<std::size_t>(rest.substr(0, comma));
        if (!v) malformed(no, "bad SUPP index");
        idx.push_back(*v);
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
      }
      records.back().support = std::move(idx);
      continue;
    }
    if (line.front() == 'Q') {
      const auto colon = line.find(':');
      const auto view = colon == std::string_view::npos ? std::nullopt
                                                        : text::parse_int<std::size_t>(line.substr(1, colon - 1));
      if (!view) malformed(no, "bad query line");
      records.back().queries.push_back(parse_query(*view, line.substr(colon + 1)));
      continue;
    }
    malformed(no, "unrecognized line: " + std::string(line));
  }
  return records;
}

std::string family_file_name(const AttributeRef& attribute, bool interaction) {
  std::string name = attribute.name;
  for (char& c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '.' || c == '-';
    if (!ok) c = '_';
  }
  return std::to_string(attribute.view) + '_' + name + (interaction ? ".int.reds" : ".ind.reds");
}

void write_family(const RedescriptionFamily& family, const std::filesystem::path& dir, bool with_support) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::Io, "cannot create " + dir.string() + ": " + ec.message());

  std::ostringstream meta;
  meta << "seed = " << family.seed << '\n';
  meta << "selected_views = " << join_views(family.selected_views) << '\n';
  meta << "attributes = " << family.sets.size() << '\n';
  meta << "cancelled = " << (family.cancelled ? "yes" : "no") << '\n';
  for (const auto& [k, v] : family.metadata) meta << k << " = " << v << '\n';
  for (const auto& s : family.sets) {
    const std::string ind = family_file_name(s.attribute, false);
    const std::string inter = family_file_name(s.attribute, true);
    write_file(dir / ind, format_set(s.attribute, s.individual, with_support));
    write_file(dir / inter, format_set(s.attribute, s.interaction, with_support));
    meta << "set = " << ind << '\n' << "set = " << inter << '\n';
  }
  write_file(dir / "family.meta", meta.str());
}

StoredFamily read_family(const std::filesystem::path& dir) {
  StoredFamily fam;
  const std::string meta = read_text_file(dir / "family.meta");
  const auto lines = text::split_lines(meta);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto line = text::trim(lines[ln]);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) malformed(ln + 1, "family.meta line without '='");
    const std::string key(text::trim(line.substr(0, eq)));
    const std::string value(text::trim(line.substr(eq + 1)));
    if (key == "set") {
      std::optional<AttributeRef> attr;
      StoredSet s;
      s.records = parse_reds(read_text_file(dir / value), &attr);
      if (!attr) throw Error(Errc::MalformedHeader, value + ": missing ATTR line");
      s.attribute = *attr;
      s.interaction = value.ends_with(".int.reds");
      fam.sets.push_back(std::move(s));
      continue;
    }
    if (key == "selected_views" && !value.empty()) {
      std::string_view rest = value;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto v = text::parse_int<std::size_t>(rest.substr(0, comma));
        if (!v) malformed(ln + 1, "bad view index");
        fam.selected_views.push_back(*v);
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
      }
    }
    fam.meta[key] = value;
  }
  return fam;
}

DescribedCounts count_described(const StoredFamily& family) {
  DescribedCounts c;
  const std::set<std::size_t> selected(family.selected_views.begin(), family.selected_views.end());
  std::set<AttributeRef> interacting;
  std::vector<double> js;
  for (const auto& s : family.sets) {
    if (!s.interaction && !s.records.empty()) ++c.n_ind;
    for (const auto& r : s.records) {
      js.push_back(r.jaccard);
      if (!s.interaction) continue;
      for (const auto& q : r.queries) {
        for (const auto& a : q.attrs()) {
          if (selected.empty() || selected.contains(a.view)) interacting.insert(a);
        }
      }
    }
  }
  c.n_int = interacting.size();
  c.redescriptions = js.size();
  for (const double j : js) {
    c.mean_jaccard += j;
    c.n_accurate += j >= 0.7 ? 1 : 0;
  }
  if (!js.empty()) {
    c.mean_jaccard /= static_cast<double>(js.size());
    double ss = 0.0;
    for (const double j : js) ss += (j - c.mean_jaccard) * (j - c.mean_jaccard);
    c.sd_jaccard = js.size() > 1 ? std::sqrt(ss / static_cast<double>(js.size() - 1)) : 0.0;
  }
  return c;
}

Redescription evaluate_record(const StoredRecord& record, const MultiViewDataset& ds) {
  Redescription red(ds.view_count());
  for (const auto& q : record.queries) red.set(q, evaluate(q, ds));
  return red;
}

}  // namespace rdm
