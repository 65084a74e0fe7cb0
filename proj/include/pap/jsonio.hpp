#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace pap {

// Keys keep insertion order so serialized artifacts are byte-stable.
using Json = nlohmann::ordered_json;

// Writes via a temp file in the same directory, then renames.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& rows);
std::vector<Json> read_jsonl(const std::filesystem::path& path);

}  // namespace pap
