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

#include "wordprobe/error.h"

namespace wordprobe {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kDimensionConflict: return "DimensionConflict";
    case ErrorCode::kMissingManifest: return "MissingManifest";
    case ErrorCode::kMalformedManifest: return "MalformedManifest";
    case ErrorCode::kDuplicateLayerName: return "DuplicateLayerName";
    case ErrorCode::kDanglingPayloadRef: return "DanglingPayloadRef";
    case ErrorCode::kUnknownLayer: return "UnknownLayer";
    case ErrorCode::kCorruptArchive: return "CorruptArchive";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kUnknownTaskKind: return "UnknownTaskKind";
    case ErrorCode::kEmptyRegistry: return "EmptyRegistry";
    case ErrorCode::kInvalidRegistry: return "InvalidRegistry";
    case ErrorCode::kUnknownLanguage: return "UnknownLanguage";
    case ErrorCode::kUnknownTask: return "UnknownTask";
    case ErrorCode::kMissingSplit: return "MissingSplit";
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kSingleClassDataset: return "SingleClassDataset";
    case ErrorCode::kEmptyAfterFiltering: return "EmptyAfterFiltering";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kOOVToken: return "OOVToken";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kBadLabelIndex: return "BadLabelIndex";
    case ErrorCode::kEmptySplit: return "EmptySplit";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kTooManySnapshots: return "TooManySnapshots";
    case ErrorCode::kNoSnapshots: return "NoSnapshots";
    case ErrorCode::kDuplicateSnapshot: return "DuplicateSnapshot";
    case ErrorCode::kLayerRequiredForBundle: return "LayerRequiredForBundle";
    case ErrorCode::kLayerNotApplicable: return "LayerNotApplicable";
    case ErrorCode::kMixedDimensions: return "MixedDimensions";
    case ErrorCode::kInvalidRequest: return "InvalidRequest";
    case ErrorCode::kUnrecognizedFormat: return "UnrecognizedFormat";
    case ErrorCode::kStorageFull: return "StorageFull";
    case ErrorCode::kUnknownUpload: return "UnknownUpload";
    case ErrorCode::kUnknownJob: return "UnknownJob";
    case ErrorCode::kUnknownToken: return "UnknownToken";
    case ErrorCode::kJobNotFinished: return "JobNotFinished";
    case ErrorCode::kShuttingDown: return "ShuttingDown";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Internal";
}

}  // namespace wordprobe
