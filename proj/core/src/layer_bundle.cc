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

#include "wordprobe/layer_bundle.h"

#include <nlohmann/json.hpp>

#include <set>
#include <sstream>

#include "wordprobe/error.h"
#include "wordprobe/zip_archive.h"

namespace wordprobe {

using nlohmann::json;

namespace {

[[noreturn]] void BadManifest(const std::string& what) {
  throw Error(ErrorCode::kMalformedManifest, "manifest.json: " + what);
}

}  // namespace

LayerBundle ParseBundle(std::shared_ptr<const ZipReader> archive) {
  const ZipReader::Entry* entry = archive->Find(kManifestName);
  if (entry == nullptr) {
    throw Error(ErrorCode::kMissingManifest, "archive has no manifest.json");
  }
  json doc;
  try {
    doc = json::parse(archive->ReadEntry(*entry));
  } catch (const json::parse_error& e) {
    BadManifest(e.what());
  }
  if (!doc.is_object()) BadManifest("not an object");

  LayerBundle bundle;
  if (auto it = doc.find("snapshot_label"); it != doc.end()) {
    if (!it->is_string()) BadManifest("snapshot_label must be a string");
    bundle.snapshot_label_ = it->get<std::string>();
  }
  auto layers = doc.find("layers");
  if (layers == doc.end() || !layers->is_array()) {
    BadManifest("layers must be an array");
  }

  std::set<std::string, std::less<>> seen;
  for (const json& item : *layers) {
    if (!item.is_object()) BadManifest("layer entry must be an object");
    LayerDescriptor d;
    const auto name = item.find("name");
    const auto dim = item.find("dim");
    const auto file = item.find("file");
    if (name == item.end() || !name->is_string() ||
        name->get_ref<const std::string&>().empty()) {
      BadManifest("layer name must be a non-empty string");
    }
    d.name = name->get<std::string>();
    if (dim == item.end() || !dim->is_number_integer() || dim->get<long long>() < 1) {
      BadManifest("layer '" + d.name + "' needs a positive integer dim");
    }
    d.dim = dim->get<int>();
    if (file == item.end() || !file->is_string()) {
      BadManifest("layer '" + d.name + "' needs a file");
    }
    d.payload_ref = file->get<std::string>();
    if (auto n = item.find("entries"); n != item.end()) {
      if (!n->is_number_unsigned()) BadManifest("entries must be a count");
      d.entry_count = n->get<std::size_t>();
    }
    if (!seen.insert(d.name).second) {
      throw Error(ErrorCode::kDuplicateLayerName,
                  "layer name '" + d.name + "' appears twice");
    }
    const ZipReader::Entry* payload = archive->Find(d.payload_ref);
    if (payload == nullptr) {
      throw Error(ErrorCode::kDanglingPayloadRef,
                  "layer '" + d.name + "' refers to missing file '" +
                      d.payload_ref + "'");
    }
    d.payload_bytes = payload->uncompressed_size;
    bundle.manifest_.push_back(std::move(d));
  }
  bundle.archive_ = std::move(archive);
  return bundle;
}

LayerBundle OpenBundle(const std::filesystem::path& archive) {
  return ParseBundle(std::make_shared<const ZipReader>(ZipReader::Open(archive)));
}

LayerBundle OpenBundleBytes(std::string archive_bytes) {
  return ParseBundle(std::make_shared<const ZipReader>(
      ZipReader::FromBytes(std::move(archive_bytes))));
}

const LayerDescriptor* LayerBundle::Find(std::string_view name) const {
  for (const LayerDescriptor& d : manifest_) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

std::vector<std::string> LayerBundle::layer_names() const {
  std::vector<std::string> names;
  names.reserve(manifest_.size());
  for (const LayerDescriptor& d : manifest_) names.push_back(d.name);
  return names;
}

std::pair<EmbeddingTable, ParseReport> LoadLayer(const LayerBundle& bundle,
                                                 std::string_view name,
                                                 ParseOptions options) {
  const LayerDescriptor* d = bundle.Find(name);
  if (d == nullptr) {
    throw Error(ErrorCode::kUnknownLayer,
                "bundle has no layer '" + std::string(name) + "'");
  }
  const ZipReader::Entry* entry = bundle.archive_->Find(d->payload_ref);
  auto in = bundle.archive_->OpenEntry(*entry);
  options.expected_dim = d->dim;
  if (options.source_label.empty()) options.source_label = d->name;
  return ParseEmbeddingText(*in, options);
}

void WriteBundle(const std::filesystem::path& path,
                 std::string_view snapshot_label,
                 const std::vector<BundleLayer>& layers) {
  json manifest;
  manifest["snapshot_label"] = std::string(snapshot_label);
  manifest["layers"] = json::array();
  ZipWriter zip(path);
  for (const BundleLayer& layer : layers) {
    const std::string file = layer.name + ".txt";
    manifest["layers"].push_back({{"name", layer.name},
                                  {"dim", layer.table->dim()},
                                  {"file", file},
                                  {"entries", layer.table->size()}});
    std::ostringstream text;
    WriteEmbeddingText(*layer.table, text, /*with_header=*/false);
    zip.Add(file, text.str());
  }
  zip.Add(kManifestName, manifest.dump(2));
  zip.Finish();
}

}  // namespace wordprobe
