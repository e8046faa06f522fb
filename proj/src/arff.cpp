#include "rdm/arff.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rdm/error.hpp"
#include "text_util.hpp"

namespace rdm {
namespace {

struct AttrDecl {
  std::string name;
  bool numeric = true;
  std::vector<std::string> categories;
};

std::string unquote(std::string_view s) {
  s = text::trim(s);
  if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front()) {
    return std::string(s.substr(1, s.size() - 2));
  }
  return std::string(s);
}

// Splits on commas outside quotes.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  char quote = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote != 0) {
      if (c == quote) quote = 0;
    } else if (c == '\'' || c == '"') {
      quote = c;
    } else if (c == ',') {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(line.substr(start));
  return out;
}

// Returns (name, rest-of-line) for an @attribute line body.
std::pair<std::string, std::string_view> split_name(std::string_view body, std::size_t line_no) {
  body = text::trim(body);
  if (body.empty()) {
    throw Error(Errc::MalformedHeader, "line " + std::to_string(line_no) + ": missing name");
  }
  if (body.front() == '\'' || body.front() == '"') {
    const auto close = body.find(body.front(), 1);
    if (close == std::string_view::npos) {
      throw Error(Errc::MalformedHeader,
                  "line " + std::to_string(line_no) + ": unterminated quoted name");
    }
    return {std::string(body.substr(1, close - 1)), body.substr(close + 1)};
  }
  const auto ws = body.find_first_of(" \t");
  if (ws == std::string_view::npos) {
    throw Error(Errc::MalformedHeader, "line " + std::to_string(line_no) + ": missing type");
  }
  return {std::string(body.substr(0, ws)), body.substr(ws)};
}

AttrDecl parse_attribute(std::string_view body, std::size_t line_no) {
  auto [name, rest] = split_name(body, line_no);
  AttrDecl decl;
  decl.name = std::move(name);
  const std::string_view type = text::trim(rest);
  if (!type.empty() && type.front() == '{') {
    const auto close = type.rfind('}');
    if (close == std::string_view::npos) {
      throw Error(Errc::MalformedHeader,
                  "line " + std::to_string(line_no) + ": unterminated nominal list");
    }
    decl.numeric = false;
    for (const auto f : split_fields(type.substr(1, close - 1))) {
      decl.categories.push_back(unquote(f));
    }
    return decl;
  }
  const std::string t = text::lower(type);
  if (t != "numeric" && t != "real" && t != "integer") {
    throw Error(Errc::MalformedHeader, "line " + std::to_string(line_no) +
                                           ": unsupported attribute type '" + std::string(type) +
                                           "'");
  }
  return decl;
}

bool has_keyword(std::string_view line, std::string_view keyword) {
  if (line.size() < keyword.size()) return false;
  if (!text::iequals(line.substr(0, keyword.size()), keyword)) return false;
  return line.size() == keyword.size() || line[keyword.size()] == ' ' ||
         line[keyword.size()] == '\t';
}

bool needs_quotes(std::string_view s) {
  if (s.empty()) return true;
  for (const char c : s) {
    if (c == ' ' || c == '\t' || c == ',' || c == '{' || c == '}' || c == '%' || c == '\'' ||
        c == '"') {
      return true;
    }
  }
  return false;
}

std::string quote_if_needed(std::string_view s) {
  if (!needs_quotes(s)) return std::string(s);
  std::string out = "'";
  out += s;
  out += "'";
  return out;
}

}  // namespace

View parse_arff(std::string_view input) {
  std::vector<AttrDecl> decls;
  std::string relation;
  bool in_data = false;
  std::vector<std::vector<double>> numeric_cols;
  std::vector<std::vector<int>> code_cols;

  const auto lines = text::split_lines(input);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::size_t line_no = li + 1;
    const std::string_view line = text::trim(lines[li]);
    if (line.empty() || line.front() == '%') continue;

    if (!in_data) {
      if (has_keyword(line, "@relation")) {
        relation = unquote(line.substr(9));
      } else if (has_keyword(line, "@attribute")) {
        decls.push_back(parse_attribute(line.substr(10), line_no));
      } else if (has_keyword(line, "@data")) {
        if (decls.empty()) throw Error(Errc::MalformedHeader, "@data before any @attribute");
        in_data = true;
        numeric_cols.resize(decls.size());
        code_cols.resize(decls.size());
      } else {
        throw Error(Errc::MalformedHeader,
                    "line " + std::to_string(line_no) + ": unexpected header line");
      }
      continue;
    }

    if (line.front() == '{') {
      throw Error(Errc::MalformedHeader,
                  "line " + std::to_string(line_no) + ": sparse rows are not supported");
    }
    const auto fields = split_fields(line);
    if (fields.size() != decls.size()) {
      throw Error(Errc::ArityMismatch, "line " + std::to_string(line_no) + ": " +
                                           std::to_string(fields.size()) + " values for " +
                                           std::to_string(decls.size()) + " attributes");
    }
    for (std::size_t c = 0; c < decls.size(); ++c) {
      const auto& d = decls[c];
      if (d.numeric) {
        const auto v = text::parse_double(fields[c]);
        if (!v || !std::isfinite(*v)) {
          throw Error(Errc::NonFiniteValue, "line " + std::to_string(line_no) + ": '" +
                                                std::string(text::trim(fields[c])) +
                                                "' is not a finite number");
        }
        numeric_cols[c].push_back(*v);
      } else {
        const std::string value = unquote(fields[c]);
        int code = -1;
        for (std::size_t k = 0; k < d.categories.size(); ++k) {
          if (d.categories[k] == value) code = static_cast<int>(k);
        }
        if (code < 0) {
          throw Error(Errc::UnknownCategory, "line " + std::to_string(line_no) + ": '" + value +
                                                 "' not declared for '" + d.name + "'");
        }
        code_cols[c].push_back(code);
      }
    }
  }

  if (decls.empty()) throw Error(Errc::MalformedHeader, "no @attribute declarations");
  if (!in_data) throw Error(Errc::MalformedHeader, "missing @data section");

  std::vector<AttributeColumn> cols;
  cols.reserve(decls.size());
  for (std::size_t c = 0; c < decls.size(); ++c) {
    auto& d = decls[c];
    if (d.numeric) {
      cols.push_back(AttributeColumn::numeric(std::move(d.name), std::move(numeric_cols[c])));
    } else {
      cols.push_back(AttributeColumn::nominal(std::move(d.name), std::move(d.categories),
                                              std::move(code_cols[c])));
    }
  }
  return View(std::move(cols), relation);
}

View read_arff(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_arff(buf.str());
}

std::string write_arff(const View& view, std::string_view relation) {
  std::string out = "@relation ";
  out += quote_if_needed(relation.empty() ? std::string_view(view.source_tag().empty()
                                                                 ? "view"
                                                                 : view.source_tag())
                                          : relation);
  out += "\n\n";
  for (const auto& a : view.attributes()) {
    out += "@attribute ";
    out += quote_if_needed(a.name());
    if (a.is_numeric()) {
      out += " numeric\n";
    } else {
      out += " {";
      for (std::size_t k = 0; k < a.categories().size(); ++k) {
        if (k) out += ',';
        out += quote_if_needed(a.categories()[k]);
      }
      out += "}\n";
    }
  }
  out += "\n@data\n";
  for (std::size_t r = 0; r < view.rows(); ++r) {
    for (std::size_t c = 0; c < view.size(); ++c) {
      if (c) out += ',';
      const auto& a = view.attribute(c);
      if (a.is_numeric()) {
        out += text::format_double(a.values()[r]);
      } else {
        out += quote_if_needed(a.categories()[static_cast<std::size_t>(a.codes()[r])]);
      }
    }
    out += '\n';
  }
  return out;
}

void write_arff_file(const std::filesystem::path& path, const View& view,
                     std::string_view relation) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out << write_arff(view, relation);
}

}  // namespace rdm
