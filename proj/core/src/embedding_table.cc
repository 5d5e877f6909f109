// Copyright 2026 The wordprobe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wordprobe/embedding_table.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "wordprobe/error.h"

namespace wordprobe {
namespace {

constexpr std::size_t kBlockFloats = std::size_t{1} << 18;  // 1 MiB
constexpr std::size_t kReadChunk = std::size_t{1} << 20;

bool IsSeparator(char c) { return c == ' ' || c == '\t'; }

// Splits on runs of spaces/tabs after trimming trailing whitespace and '\r'.
// A leading separator yields an empty first field, which callers reject.
void SplitFields(std::string_view line, std::vector<std::string_view>* out) {
  out->clear();
  while (!line.empty() && (IsSeparator(line.back()) || line.back() == '\r')) {
    line.remove_suffix(1);
  }
  if (line.empty()) return;
  std::size_t pos = 0;
  while (true) {
    std::size_t end = pos;
    while (end < line.size() && !IsSeparator(line[end])) ++end;
    out->push_back(line.substr(pos, end - pos));
    if (end == line.size()) break;
    pos = end;
    while (pos < line.size() && IsSeparator(line[pos])) ++pos;
  }
}

bool ParseFloat(std::string_view field, float* value) {
  const char* first = field.data();
  const char* last = first + field.size();
  auto [ptr, ec] = std::from_chars(first, last, *value);
  return ec == std::errc() && ptr == last && std::isfinite(*value);
}

bool ParseCount(std::string_view field, long long* value) {
  const char* first = field.data();
  const char* last = first + field.size();
  auto [ptr, ec] = std::from_chars(first, last, *value);
  return ec == std::errc() && ptr == last && *value >= 0;
}

bool LooksLikeHeader(const std::vector<std::string_view>& fields, int* dim) {
  long long count = 0;
  long long d = 0;
  if (fields.size() != 2 || !ParseCount(fields[0], &count) ||
      !ParseCount(fields[1], &d) || d <= 0 || d > (1 << 24)) {
    return false;
  }
  *dim = static_cast<int>(d);
  return true;
}

// Reads `in` in large chunks and hands out complete lines (without '\n').
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) { buffer_.reserve(kReadChunk); }

  bool Next(std::string_view* line) {
    while (true) {
      const auto nl = std::find(buffer_.begin() + start_, buffer_.end(), '\n');
      if (nl != buffer_.end()) {
        const std::size_t end = nl - buffer_.begin();
        *line = std::string_view(buffer_.data() + start_, end - start_);
        consumed_ += end - start_ + 1;
        start_ = end + 1;
        return true;
      }
      if (eof_) {
        if (start_ == buffer_.size()) return false;
        *line = std::string_view(buffer_.data() + start_, buffer_.size() - start_);
        consumed_ += buffer_.size() - start_;
        start_ = buffer_.size();
        return true;
      }
      Refill();
    }
  }

  std::uint64_t consumed() const { return consumed_; }

 private:
  void Refill() {
    buffer_.erase(buffer_.begin(), buffer_.begin() + start_);
    start_ = 0;
    const std::size_t old = buffer_.size();
    buffer_.resize(old + kReadChunk);
    in_.read(buffer_.data() + old, kReadChunk);
    const std::size_t got = static_cast<std::size_t>(in_.gcount());
    buffer_.resize(old + got);
    if (got == 0 || !in_) {
      if (in_.bad()) throw Error(ErrorCode::kIoError, "read failure");
      eof_ = in_.eof() || got == 0;
    }
  }

  std::istream& in_;
  std::vector<char> buffer_;
  std::size_t start_ = 0;
  std::uint64_t consumed_ = 0;
  bool eof_ = false;
};

}  // namespace

EmbeddingTable::EmbeddingTable(int dim, std::string source_label)
    : dim_(dim), source_label_(std::move(source_label)) {
  if (dim < 1) {
    throw Error(ErrorCode::kInvalidSpec, "embedding dimension must be >= 1");
  }
  rows_per_block_ = std::max<std::size_t>(1, kBlockFloats / dim);
}

EmbeddingTable::EmbeddingTable(const EmbeddingTable& other)
    : dim_(other.dim_),
      rows_per_block_(other.rows_per_block_),
      source_label_(other.source_label_),
      tokens_(other.tokens_),
      token_heap_bytes_(other.token_heap_bytes_) {
  const std::size_t block_floats = rows_per_block_ * dim_;
  blocks_.reserve(other.blocks_.size());
  for (const auto& block : other.blocks_) {
    auto copy = std::make_unique<float[]>(block_floats);
    std::memcpy(copy.get(), block.get(), block_floats * sizeof(float));
    blocks_.push_back(std::move(copy));
  }
  RebuildIndex();
}

EmbeddingTable& EmbeddingTable::operator=(const EmbeddingTable& other) {
  if (this != &other) {
    EmbeddingTable copy(other);
    *this = std::move(copy);
  }
  return *this;
}

void EmbeddingTable::RebuildIndex() {
  index_.clear();
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    index_.emplace(tokens_[i], static_cast<std::uint32_t>(i));
  }
}

bool EmbeddingTable::Insert(std::string_view token,
                            std::span<const float> values) {
  if (values.size() != static_cast<std::size_t>(dim_)) {
    throw Error(ErrorCode::kDimMismatch,
                "vector for '" + std::string(token) + "' has " +
                    std::to_string(values.size()) + " components, expected " +
                    std::to_string(dim_));
  }
  if (token.empty()) {
    throw Error(ErrorCode::kInvalidSpec, "empty token");
  }
  for (float v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidSpec,
                  "non-finite component for '" + std::string(token) + "'");
    }
  }
  if (index_.find(token) != index_.end()) return false;

  const std::size_t i = tokens_.size();
  if (i / rows_per_block_ >= blocks_.size()) {
    blocks_.push_back(std::make_unique<float[]>(rows_per_block_ * dim_));
  }
  std::copy(values.begin(), values.end(), MutableRow(i));
  const std::string& stored = tokens_.emplace_back(token);
  if (stored.capacity() > 15) token_heap_bytes_ += stored.capacity() + 1;
  index_.emplace(stored, static_cast<std::uint32_t>(i));
  return true;
}

float* EmbeddingTable::MutableRow(std::size_t i) {
  return blocks_[i / rows_per_block_].get() + (i % rows_per_block_) * dim_;
}

std::span<const float> EmbeddingTable::row(std::size_t i) const {
  const float* p =
      blocks_[i / rows_per_block_].get() + (i % rows_per_block_) * dim_;
  return {p, static_cast<std::size_t>(dim_)};
}

std::optional<std::span<const float>> EmbeddingTable::Lookup(
    std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return row(it->second);
}

std::size_t EmbeddingTable::MemoryBytes() const {
  // Node estimate: string_view + value + next pointer + cached hash.
  constexpr std::size_t kIndexNode = 48;
  return blocks_.size() * rows_per_block_ * dim_ * sizeof(float) +
         tokens_.size() * sizeof(std::string) + token_heap_bytes_ +
         index_.bucket_count() * sizeof(void*) + index_.size() * kIndexNode;
}

bool operator==(const EmbeddingTable& a, const EmbeddingTable& b) {
  if (a.dim_ != b.dim_ || a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.tokens_[i] != b.tokens_[i]) return false;
    auto ra = a.row(i);
    auto rb = b.row(i);
    if (std::memcmp(ra.data(), rb.data(), ra.size_bytes()) != 0) return false;
  }
  return true;
}

std::pair<EmbeddingTable, ParseReport> ParseEmbeddingText(
    std::istream& in, const ParseOptions& options) {
  if (options.expected_dim && *options.expected_dim < 1) {
    throw Error(ErrorCode::kInvalidSpec, "expected_dim must be >= 1");
  }
  LineReader reader(in);
  ParseReport report;
  std::optional<EmbeddingTable> table;
  std::optional<int> target = options.expected_dim;
  bool first_line = true;
  bool other_dim_seen = false;
  std::vector<std::string_view> fields;
  std::vector<float> values;

  std::string_view line;
  while (reader.Next(&line)) {
    SplitFields(line, &fields);
    if (first_line) {
      first_line = false;
      int header_dim = 0;
      if (LooksLikeHeader(fields, &header_dim)) {
        report.had_header = true;
        if (options.expected_dim && *options.expected_dim != header_dim) {
          throw Error(ErrorCode::kDimensionConflict,
                      "header declares dimension " +
                          std::to_string(header_dim) + ", expected " +
                          std::to_string(*options.expected_dim));
        }
        target = header_dim;
        if (options.on_progress) options.on_progress(reader.consumed());
        continue;
      }
    }

    bool well_formed = fields.size() >= 2 && !fields[0].empty();
    if (well_formed) {
      values.resize(fields.size() - 1);
      for (std::size_t k = 1; k < fields.size() && well_formed; ++k) {
        well_formed = ParseFloat(fields[k], &values[k - 1]);
      }
    }
    if (well_formed && !target) target = static_cast<int>(values.size());

    if (!well_formed) {
      ++report.dropped_malformed;
    } else if (values.size() != static_cast<std::size_t>(*target)) {
      other_dim_seen = true;
      ++report.dropped_malformed;
    } else {
      if (!table) table.emplace(*target, options.source_label);
      if (table->Insert(fields[0], values)) {
        ++report.accepted;
      } else {
        ++report.dropped_duplicate;
      }
    }
    if (options.on_progress) options.on_progress(reader.consumed());
  }

  if (report.accepted == 0) {
    if (options.expected_dim && other_dim_seen) {
      throw Error(ErrorCode::kDimensionConflict,
                  "no line matches expected dimension " +
                      std::to_string(*options.expected_dim));
    }
    throw Error(ErrorCode::kEmptyInput, "no well-formed embedding line");
  }
  report.detected_dim = *target;
  return {std::move(*table), report};
}

std::pair<EmbeddingTable, ParseReport> ParseEmbeddingFile(
    const std::filesystem::path& path, ParseOptions options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  if (options.source_label.empty()) {
    options.source_label = path.filename().string();
  }
  return ParseEmbeddingText(in, options);
}

void WriteEmbeddingText(const EmbeddingTable& table, std::ostream& out,
                        bool with_header) {
  if (with_header) out << table.size() << ' ' << table.dim() << '\n';
  std::string line;
  char buf[64];
  for (std::size_t i = 0; i < table.size(); ++i) {
    line.assign(table.token(i));
    for (float v : table.row(i)) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
      line.push_back(' ');
      line.append(buf, ptr);
    }
    line.push_back('\n');
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
  }
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "failed to write embeddings");
}

std::optional<int> SniffEmbeddingDim(std::istream& in, std::size_t max_lines) {
  LineReader reader(in);
  std::vector<std::string_view> fields;
  std::string_view line;
  float scratch = 0;
  for (std::size_t n = 0; n < max_lines && reader.Next(&line); ++n) {
    SplitFields(line, &fields);
    int header_dim = 0;
    if (n == 0 && LooksLikeHeader(fields, &header_dim)) return header_dim;
    if (fields.size() < 2 || fields[0].empty()) continue;
    bool ok = true;
    for (std::size_t k = 1; k < fields.size() && ok; ++k) {
      ok = ParseFloat(fields[k], &scratch);
    }
    if (ok) return static_cast<int>(fields.size() - 1);
  }
  return std::nullopt;
}

}  // namespace wordprobe
