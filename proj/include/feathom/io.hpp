#pragma once

#include <string>

namespace feathom {

/// Whole-file read; throws InputError when the file cannot be opened.
std::string read_text_file(const std::string& path);

/// Writes `text` to `path`, replacing any existing file.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace feathom
