#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "rdm/dataset.hpp"

namespace rdm {

/// Parses the ARFF subset used for views and prediction files: `@relation`,
/// `@attribute <name> numeric|real|integer|{a,b,...}`, `@data`, dense
/// comma-separated rows, `%` comments, case-insensitive keywords, `\n` or
/// `\r\n` line endings. The relation name becomes the view's source tag.
View parse_arff(std::string_view text);

View read_arff(const std::filesystem::path& path);

/// Writes a view in the same subset; numbers use shortest round-trip form.
std::string write_arff(const View& view, std::string_view relation = {});

void write_arff_file(const std::filesystem::path& path, const View& view,
                     std::string_view relation = {});

}  // namespace rdm
