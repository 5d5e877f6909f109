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

#ifndef WORDPROBE_ERROR_H_
#define WORDPROBE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace wordprobe {

// Every failure the library reports carries one of these codes. The names
// double as the `error` field of the HTTP API and CLI diagnostics.
enum class ErrorCode {
  // embedding files and bundles
  kEmptyInput,
  kDimensionConflict,
  kMissingManifest,
  kMalformedManifest,
  kDuplicateLayerName,
  kDanglingPayloadRef,
  kUnknownLayer,
  kCorruptArchive,
  kIoError,
  // registry and datasets
  kUnknownTaskKind,
  kEmptyRegistry,
  kInvalidRegistry,
  kUnknownLanguage,
  kUnknownTask,
  kMissingSplit,
  kMalformedRow,
  kSingleClassDataset,
  kEmptyAfterFiltering,
  kInvalidSpec,
  // classifier
  kOOVToken,
  kDimMismatch,
  kBadLabelIndex,
  kEmptySplit,
  kInvalidConfig,
  // job planning
  kTooManySnapshots,
  kNoSnapshots,
  kDuplicateSnapshot,
  kLayerRequiredForBundle,
  kLayerNotApplicable,
  kMixedDimensions,
  kInvalidRequest,
  // service
  kUnrecognizedFormat,
  kStorageFull,
  kUnknownUpload,
  kUnknownJob,
  kUnknownToken,
  kJobNotFinished,
  kShuttingDown,
  kInternal,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wordprobe

#endif  // WORDPROBE_ERROR_H_
