#ifndef SQT_UTIL_JSONL_HPP
#define SQT_UTIL_JSONL_HPP

#include <functional>
#include <string>

#include <json.hpp>

namespace sqt {

/// Reads a JSON-lines file, invoking fn per record. Blank lines are skipped.
/// Throws std::runtime_error with line number on malformed records; missing
/// files are treated as empty when must_exist is false.
void read_jsonl(const std::string& path,
                const std::function<void(const nlohmann::json&, size_t line)>& fn,
                bool must_exist = false);

/// Appends one record as a single line. Creates the file if needed.
void append_jsonl(const std::string& path, const nlohmann::json& record);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
bool file_exists(const std::string& path);

} // namespace sqt

#endif
