// SPDX-License-Identifier: Apache-2.0

#include "geocov/gazetteer.hpp"

#include <algorithm>
#include <array>
#include <boost/tokenizer.hpp>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "geocov/unicode.hpp"

namespace geocov {
namespace {

constexpr std::array<char, 8> kSnapshotMagic = {'G', 'E', 'O', 'C', 'V', 'G', 'Z', '\0'};
constexpr std::uint32_t kSnapshotVersion = 1;

std::vector<std::string> split_csv_row(const std::string& row) {
  using Separator = boost::escaped_list_separator<char>;
  // No escape character: the Kaggle dump never uses backslashes as escapes.
  boost::tokenizer<Separator> tok(row, Separator('\0', ',', '"'));
  return {tok.begin(), tok.end()};
}

enum class Column { kIgnore, kName, kAlternates };

Column classify(std::string header) {
  header = unicode::lower_nfc(unicode::trim_non_word(header));
  if (header == "city" || header == "name" || header == "accentcity" ||
      header == "asciiname" || header == "city_ascii" || header == "ascii_name")
    return Column::kName;
  if (header == "alternatenames" || header == "alternate_names") return Column::kAlternates;
  return Column::kIgnore;
}

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T read_pod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw std::runtime_error("truncated gazetteer snapshot");
  return v;
}

}  // namespace

std::string normalize(std::string_view phrase) {
  // Pure ASCII needs no NFC pass, so collapse and lowercase in one sweep.
  const bool ascii = std::all_of(phrase.begin(), phrase.end(),
                                 [](char c) { return static_cast<unsigned char>(c) < 0x80; });
  if (ascii) {
    std::string out;
    out.reserve(phrase.size());
    bool pending_space = false;
    for (const char c : phrase) {
      if (c == ' ' || (c >= '\t' && c <= '\r')) {
        pending_space = !out.empty();
        continue;
      }
      if (pending_space) out += ' ';
      pending_space = false;
      out += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
    }
    return out;
  }
  std::string collapsed;
  collapsed.reserve(phrase.size());
  for (const auto piece : unicode::split_whitespace(phrase)) {
    if (!collapsed.empty()) collapsed += ' ';
    collapsed += piece;
  }
  return unicode::lower_nfc(collapsed);
}

void GazetteerIndex::insert(std::string_view name) {
  auto n = normalize(name);
  if (n.empty()) return;
  ++raw_count_;
  entries_.insert(std::move(n));
}

GazetteerIndex GazetteerIndex::from_names(const std::vector<std::string>& names) {
  GazetteerIndex index;
  index.entries_.reserve(names.size());
  for (const auto& n : names) index.insert(n);
  return index;
}

GazetteerIndex GazetteerIndex::from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read gazetteer CSV: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("gazetteer CSV has no header: " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  // Strip a UTF-8 BOM.
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);

  std::vector<Column> columns;
  for (const auto& h : split_csv_row(line)) columns.push_back(classify(h));
  if (std::none_of(columns.begin(), columns.end(), [](Column c) { return c == Column::kName; }))
    throw std::runtime_error("gazetteer CSV has no city-name column: " + path.string());

  GazetteerIndex index;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    try {
      cells = split_csv_row(line);
    } catch (const boost::escaped_list_error&) {
      continue;  // unbalanced quotes; skip the row
    }
    const auto n = std::min(cells.size(), columns.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (columns[i] == Column::kName) {
        index.insert(cells[i]);
      } else if (columns[i] == Column::kAlternates) {
        std::size_t start = 0;
        const auto& cell = cells[i];
        while (start <= cell.size()) {
          auto end = cell.find_first_of("|;", start);
          if (end == std::string::npos) end = cell.size();
          index.insert(std::string_view(cell).substr(start, end - start));
          start = end + 1;
        }
      }
    }
  }
  return index;
}

bool GazetteerIndex::contains(std::string_view phrase) const {
  return contains_normalized(normalize(phrase));
}

bool GazetteerIndex::contains_normalized(std::string_view normalized) const {
  return entries_.find(normalized) != entries_.end();
}

std::vector<std::string> GazetteerIndex::sorted_entries() const {
  std::vector<std::string> out(entries_.begin(), entries_.end());
  std::sort(out.begin(), out.end());
  return out;
}

void GazetteerIndex::save_snapshot(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write gazetteer snapshot: " + path.string());
  out.write(kSnapshotMagic.data(), kSnapshotMagic.size());
  write_pod(out, kSnapshotVersion);
  write_pod(out, raw_count_);
  write_pod(out, static_cast<std::uint64_t>(entries_.size()));
  for (const auto& e : sorted_entries()) {
    write_pod(out, static_cast<std::uint32_t>(e.size()));
    out.write(e.data(), static_cast<std::streamsize>(e.size()));
  }
  if (!out) throw std::runtime_error("failed writing gazetteer snapshot: " + path.string());
}

GazetteerIndex GazetteerIndex::load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read gazetteer snapshot: " + path.string());
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kSnapshotMagic)
    throw std::runtime_error("not a gazetteer snapshot: " + path.string());
  if (read_pod<std::uint32_t>(in) != kSnapshotVersion)
    throw std::runtime_error("unsupported gazetteer snapshot version: " + path.string());
  GazetteerIndex index;
  index.raw_count_ = read_pod<std::uint64_t>(in);
  const auto count = read_pod<std::uint64_t>(in);
  index.entries_.reserve(count);
  std::string entry;
  for (std::uint64_t i = 0; i < count; ++i) {
    entry.resize(read_pod<std::uint32_t>(in));
    in.read(entry.data(), static_cast<std::streamsize>(entry.size()));
    if (!in) throw std::runtime_error("truncated gazetteer snapshot");
    index.entries_.insert(entry);
  }
  return index;
}

}  // namespace geocov
