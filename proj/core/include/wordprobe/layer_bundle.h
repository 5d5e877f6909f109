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

#ifndef WORDPROBE_LAYER_BUNDLE_H_
#define WORDPROBE_LAYER_BUNDLE_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wordprobe/embedding_table.h"

namespace wordprobe {

class ZipReader;

inline constexpr std::string_view kManifestName = "manifest.json";

struct LayerDescriptor {
  std::string name;
  int dim = 0;
  // Taken from the manifest's optional "entries" field; payloads are not
  // parsed when a bundle is opened.
  std::optional<std::size_t> entry_count;
  std::string payload_ref;
  std::uint64_t payload_bytes = 0;
};

// A zip archive holding manifest.json plus one embedding text file per
// layer, all captured at one training snapshot:
//
//   {"snapshot_label": "epoch3",
//    "layers": [{"name": "encoder0", "dim": 4, "file": "encoder0.txt"}]}
class LayerBundle {
 public:
  const std::string& snapshot_label() const { return snapshot_label_; }
  const std::vector<LayerDescriptor>& manifest() const { return manifest_; }
  const LayerDescriptor* Find(std::string_view name) const;
  std::vector<std::string> layer_names() const;

 private:
  friend LayerBundle ParseBundle(std::shared_ptr<const ZipReader> archive);
  friend std::pair<EmbeddingTable, ParseReport> LoadLayer(
      const LayerBundle&, std::string_view, ParseOptions);

  std::shared_ptr<const ZipReader> archive_;
  std::string snapshot_label_;
  std::vector<LayerDescriptor> manifest_;
};

// Reads and validates the manifest only. Throws Error with kCorruptArchive,
// kMissingManifest, kMalformedManifest, kDuplicateLayerName or
// kDanglingPayloadRef.
LayerBundle OpenBundle(const std::filesystem::path& archive);
LayerBundle OpenBundleBytes(std::string archive_bytes);

// Parses one layer with expected_dim forced to the declared dimension.
// Throws Error(kUnknownLayer) or Error(kDimensionConflict).
std::pair<EmbeddingTable, ParseReport> LoadLayer(const LayerBundle& bundle,
                                                 std::string_view name,
                                                 ParseOptions options = {});

struct BundleLayer {
  std::string name;
  const EmbeddingTable* table;
};

// Writes a bundle with one "<name>.txt" payload per layer.
void WriteBundle(const std::filesystem::path& path,
                 std::string_view snapshot_label,
                 const std::vector<BundleLayer>& layers);

}  // namespace wordprobe

#endif  // WORDPROBE_LAYER_BUNDLE_H_
