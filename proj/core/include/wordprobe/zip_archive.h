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

#ifndef WORDPROBE_ZIP_ARCHIVE_H_
#define WORDPROBE_ZIP_ARCHIVE_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace wordprobe {

// Minimal reader for standard zip archives (stored and deflate members,
// zip64 sizes and offsets). Members are inflated on demand as streams, so a
// multi-gigabyte layer is never materialized in memory.
class ZipReader {
 public:
  struct Entry {
    std::string name;
    std::uint16_t method = 0;
    std::uint32_t crc32 = 0;
    std::uint64_t compressed_size = 0;
    std::uint64_t uncompressed_size = 0;
    std::uint64_t local_header_offset = 0;
  };

  // Throws Error(kCorruptArchive) if the bytes are not a readable zip.
  static ZipReader Open(const std::filesystem::path& path);
  static ZipReader FromBytes(std::string bytes);

  // True if the file starts with a zip local-file or end-of-directory
  // signature. Does not validate the rest.
  static bool HasZipSignature(const std::filesystem::path& path);

  const std::vector<Entry>& entries() const { return entries_; }
  const Entry* Find(std::string_view name) const;

  // The returned stream rethrows Error(kCorruptArchive) on CRC or length
  // mismatch and must not outlive the reader.
  std::unique_ptr<std::istream> OpenEntry(const Entry& entry) const;
  std::string ReadEntry(const Entry& entry) const;

  class Source;

 private:
  explicit ZipReader(std::shared_ptr<const Source> source);
  void ReadCentralDirectory();

  std::shared_ptr<const Source> source_;
  std::vector<Entry> entries_;
};

// Streaming zip writer (deflate, no zip64). Timestamps are fixed so equal
// inputs produce equal archives.
class ZipWriter {
 public:
  explicit ZipWriter(const std::filesystem::path& path);
  ~ZipWriter();

  ZipWriter(const ZipWriter&) = delete;
  ZipWriter& operator=(const ZipWriter&) = delete;

  void Add(std::string_view name, std::string_view data);
  void AddStream(std::string_view name, std::istream& in);
  void AddFile(std::string_view name, const std::filesystem::path& path);

  // Writes the central directory. Called by the destructor if needed, but
  // only an explicit call reports errors.
  void Finish();

 private:
  struct Written {
    std::string name;
    std::uint32_t crc32;
    std::uint64_t compressed_size;
    std::uint64_t uncompressed_size;
    std::uint64_t offset;
  };

  std::ofstream out_;
  std::filesystem::path path_;
  std::vector<Written> written_;
  bool finished_ = false;
};

}  // namespace wordprobe

#endif  // WORDPROBE_ZIP_ARCHIVE_H_
