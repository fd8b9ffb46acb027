#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace blockpat::zip {

struct Entry {
  std::string name;
  std::string data;
};

bool looks_like_zip(std::string_view bytes);

/// Reads all file entries from an in-memory zip archive. Supports the stored
/// and deflate methods. Throws Error(ArchiveUnreadable) on corrupt input.
std::vector<Entry> read(std::string_view bytes);

/// Serializes entries as a zip archive using the stored method and a fixed
/// timestamp, so equal input yields equal bytes.
std::string write(const std::vector<Entry>& entries);

}  // namespace blockpat::zip
