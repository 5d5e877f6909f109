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

#ifndef WORDPROBE_EMBEDDING_TABLE_H_
#define WORDPROBE_EMBEDDING_TABLE_H_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace wordprobe {

// Frozen token -> vector lookup of fixed width. Tokens keep insertion order
// and are matched exactly (case-sensitive, no normalization).
//
// Rows live in fixed-size blocks so that growing a table never copies the
// vectors already stored; peak memory while parsing stays close to the final
// table size.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(int dim, std::string source_label = {});

  EmbeddingTable(const EmbeddingTable& other);
  EmbeddingTable& operator=(const EmbeddingTable& other);
  EmbeddingTable(EmbeddingTable&&) noexcept = default;
  EmbeddingTable& operator=(EmbeddingTable&&) noexcept = default;

  int dim() const { return dim_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }

  const std::string& source_label() const { return source_label_; }
  void set_source_label(std::string label) { source_label_ = std::move(label); }

  // Appends `token`. Returns false (and stores nothing) when the token is
  // already present. Throws Error(kDimMismatch) when values.size() != dim and
  // Error(kInvalidSpec) for empty tokens or non-finite components.
  bool Insert(std::string_view token, std::span<const float> values);

  // nullopt signals out-of-vocabulary.
  std::optional<std::span<const float>> Lookup(std::string_view token) const;
  bool Contains(std::string_view token) const {
    return index_.find(token) != index_.end();
  }

  std::string_view token(std::size_t i) const { return tokens_[i]; }
  std::span<const float> row(std::size_t i) const;

  // Approximate heap footprint of the table (vectors, tokens, index).
  std::size_t MemoryBytes() const;

  friend bool operator==(const EmbeddingTable& a, const EmbeddingTable& b);

 private:
  float* MutableRow(std::size_t i);
  void RebuildIndex();

  int dim_;
  std::size_t rows_per_block_;
  std::string source_label_;
  std::vector<std::unique_ptr<float[]>> blocks_;
  // deque keeps string addresses stable so the index can hold views.
  std::deque<std::string> tokens_;
  std::unordered_map<std::string_view, std::uint32_t> index_;
  std::size_t token_heap_bytes_ = 0;
};

struct ParseReport {
  std::size_t accepted = 0;
  std::size_t dropped_malformed = 0;
  std::size_t dropped_duplicate = 0;
  int detected_dim = 0;
  bool had_header = false;

  std::size_t data_lines() const {
    return accepted + dropped_malformed + dropped_duplicate;
  }
  friend bool operator==(const ParseReport&, const ParseReport&) = default;
};

struct ParseOptions {
  // Forces the vector width; a header that disagrees is a DimensionConflict.
  std::optional<int> expected_dim;
  std::string source_label;
  // Called after every line with the cumulative number of bytes consumed.
  std::function<void(std::uint64_t)> on_progress;
};

// Streams `in` line by line. Accepts "token v1 ... vd" lines separated by
// spaces or tabs, with an optional leading "count dim" header. Lines that do
// not match the dimension, or carry unparseable or non-finite numbers, are
// dropped and counted; later duplicates of a token are dropped and counted.
//
// Throws Error(kEmptyInput) when no line is accepted and
// Error(kDimensionConflict) when expected_dim disagrees with the header or
// with every well-formed line.
std::pair<EmbeddingTable, ParseReport> ParseEmbeddingText(
    std::istream& in, const ParseOptions& options = {});

std::pair<EmbeddingTable, ParseReport> ParseEmbeddingFile(
    const std::filesystem::path& path, ParseOptions options = {});

// Shortest round-trip formatting: ParseEmbeddingText(WriteEmbeddingText(t))
// reproduces `t` bit for bit.
void WriteEmbeddingText(const EmbeddingTable& table, std::ostream& out,
                        bool with_header);

// Cheap format probe over at most `max_lines` lines: the header dimension if
// present, else the width of the first well-formed line.
std::optional<int> SniffEmbeddingDim(std::istream& in,
                                     std::size_t max_lines = 1000);

}  // namespace wordprobe

#endif  // WORDPROBE_EMBEDDING_TABLE_H_
