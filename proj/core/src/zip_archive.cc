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

#include "wordprobe/zip_archive.h"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cstring>
#include <streambuf>

#include "wordprobe/error.h"

namespace wordprobe {
namespace {

constexpr std::uint32_t kLocalHeaderSig = 0x04034b50;
constexpr std::uint32_t kCentralHeaderSig = 0x02014b50;
constexpr std::uint32_t kEndOfDirSig = 0x06054b50;
constexpr std::uint32_t kZip64EndOfDirSig = 0x06064b50;
constexpr std::uint32_t kZip64LocatorSig = 0x07064b50;
constexpr std::uint32_t kDataDescriptorSig = 0x08074b50;
constexpr std::size_t kEndOfDirSize = 22;
constexpr std::size_t kChunk = 1 << 16;
// 1980-01-01 00:00 in DOS format.
constexpr std::uint16_t kDosDate = (0 << 9) | (1 << 5) | 1;
constexpr std::uint16_t kDosTime = 0;

[[noreturn]] void Corrupt(const std::string& what) {
  throw Error(ErrorCode::kCorruptArchive, "corrupt zip archive: " + what);
}

std::uint16_t Get16(const char* p) {
  const auto* u = reinterpret_cast<const unsigned char*>(p);
  return static_cast<std::uint16_t>(u[0] | (u[1] << 8));
}

std::uint32_t Get32(const char* p) {
  const auto* u = reinterpret_cast<const unsigned char*>(p);
  return static_cast<std::uint32_t>(u[0]) |
         (static_cast<std::uint32_t>(u[1]) << 8) |
         (static_cast<std::uint32_t>(u[2]) << 16) |
         (static_cast<std::uint32_t>(u[3]) << 24);
}

std::uint64_t Get64(const char* p) {
  return static_cast<std::uint64_t>(Get32(p)) |
         (static_cast<std::uint64_t>(Get32(p + 4)) << 32);
}

void Put16(std::string* out, std::uint16_t v) {
  out->push_back(static_cast<char>(v & 0xff));
  out->push_back(static_cast<char>(v >> 8));
}

void Put32(std::string* out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

// Read-only streambuf over a caller-owned byte range.
class SpanBuf : public std::streambuf {
 public:
  SpanBuf(const char* data, std::size_t size) {
    char* p = const_cast<char*>(data);
    setg(p, p, p + size);
  }
};

class MemoryStream : public std::istream {
 public:
  MemoryStream(std::shared_ptr<const std::string> data, std::uint64_t offset)
      : std::istream(nullptr),
        data_(std::move(data)),
        buf_(data_->data() + offset, data_->size() - offset) {
    rdbuf(&buf_);
  }

 private:
  std::shared_ptr<const std::string> data_;
  SpanBuf buf_;
};

}  // namespace

class ZipReader::Source {
 public:
  virtual ~Source() = default;
  virtual std::uint64_t size() const = 0;
  virtual void ReadAt(std::uint64_t offset, char* out, std::size_t n) const = 0;
  virtual std::unique_ptr<std::istream> OpenAt(std::uint64_t offset) const = 0;
};

namespace {

class FileSource : public ZipReader::Source {
 public:
  explicit FileSource(std::filesystem::path path) : path_(std::move(path)) {
    std::error_code ec;
    size_ = std::filesystem::file_size(path_, ec);
    if (ec) throw Error(ErrorCode::kIoError, "cannot stat " + path_.string());
  }
  std::uint64_t size() const override { return size_; }
  void ReadAt(std::uint64_t offset, char* out, std::size_t n) const override {
    auto in = OpenAt(offset);
    in->read(out, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in->gcount()) != n) Corrupt("truncated");
  }
  std::unique_ptr<std::istream> OpenAt(std::uint64_t offset) const override {
    auto in = std::make_unique<std::ifstream>(path_, std::ios::binary);
    if (!*in) throw Error(ErrorCode::kIoError, "cannot open " + path_.string());
    in->seekg(static_cast<std::streamoff>(offset));
    return in;
  }

 private:
  std::filesystem::path path_;
  std::uint64_t size_ = 0;
};

class MemorySource : public ZipReader::Source {
 public:
  explicit MemorySource(std::string bytes)
      : data_(std::make_shared<const std::string>(std::move(bytes))) {}
  std::uint64_t size() const override { return data_->size(); }
  void ReadAt(std::uint64_t offset, char* out, std::size_t n) const override {
    if (offset > data_->size() || n > data_->size() - offset) Corrupt("truncated");
    std::memcpy(out, data_->data() + offset, n);
  }
  std::unique_ptr<std::istream> OpenAt(std::uint64_t offset) const override {
    if (offset > data_->size()) Corrupt("offset out of range");
    return std::make_unique<MemoryStream>(data_, offset);
  }

 private:
  std::shared_ptr<const std::string> data_;
};

// Inflates (or copies) one member, verifying CRC-32 and length at the end.
class EntryBuf : public std::streambuf {
 public:
  EntryBuf(std::unique_ptr<std::istream> raw, const ZipReader::Entry& entry)
      : raw_(std::move(raw)), entry_(entry), remaining_(entry.compressed_size) {
    if (entry_.method == 8) {
      std::memset(&zs_, 0, sizeof(zs_));
      if (inflateInit2(&zs_, -MAX_WBITS) != Z_OK) Corrupt("inflateInit failed");
      inflating_ = true;
    }
  }
  ~EntryBuf() override {
    if (inflating_) inflateEnd(&zs_);
  }

 protected:
  int_type underflow() override {
    if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
    if (done_) return traits_type::eof();
    const std::size_t n = entry_.method == 8 ? Inflate() : Copy();
    if (n == 0) {
      Finish();
      return traits_type::eof();
    }
    crc_ = crc32(crc_, reinterpret_cast<const Bytef*>(out_.data()),
                 static_cast<uInt>(n));
    produced_ += n;
    setg(out_.data(), out_.data(), out_.data() + n);
    return traits_type::to_int_type(*gptr());
  }

 private:
  std::size_t ReadRaw(char* dst, std::size_t cap) {
    const std::size_t want = static_cast<std::size_t>(
        std::min<std::uint64_t>(cap, remaining_));
    if (want == 0) return 0;
    raw_->read(dst, static_cast<std::streamsize>(want));
    const std::size_t got = static_cast<std::size_t>(raw_->gcount());
    if (got != want) Corrupt("truncated member " + entry_.name);
    remaining_ -= got;
    return got;
  }

  std::size_t Copy() { return ReadRaw(out_.data(), out_.size()); }

  std::size_t Inflate() {
    zs_.next_out = reinterpret_cast<Bytef*>(out_.data());
    zs_.avail_out = static_cast<uInt>(out_.size());
    while (zs_.avail_out == out_.size() && !stream_end_) {
      if (zs_.avail_in == 0) {
        const std::size_t got = ReadRaw(in_.data(), in_.size());
        if (got == 0) Corrupt("deflate stream ended early in " + entry_.name);
        zs_.next_in = reinterpret_cast<Bytef*>(in_.data());
        zs_.avail_in = static_cast<uInt>(got);
      }
      const int rc = inflate(&zs_, Z_NO_FLUSH);
      if (rc == Z_STREAM_END) {
        stream_end_ = true;
      } else if (rc != Z_OK && rc != Z_BUF_ERROR) {
        Corrupt("bad deflate data in " + entry_.name);
      }
    }
    return out_.size() - zs_.avail_out;
  }

  void Finish() {
    done_ = true;
    if (produced_ != entry_.uncompressed_size) {
      Corrupt("length mismatch in " + entry_.name);
    }
    if (crc_ != entry_.crc32) Corrupt("CRC mismatch in " + entry_.name);
  }

  std::unique_ptr<std::istream> raw_;
  ZipReader::Entry entry_;
  std::uint64_t remaining_;
  z_stream zs_{};
  bool inflating_ = false;
  bool stream_end_ = false;
  bool done_ = false;
  uLong crc_ = crc32(0L, Z_NULL, 0);
  std::uint64_t produced_ = 0;
  std::array<char, kChunk> in_{};
  std::array<char, kChunk> out_{};
};

class EntryStream : public std::istream {
 public:
  EntryStream(std::unique_ptr<std::istream> raw, const ZipReader::Entry& entry)
      : std::istream(nullptr), buf_(std::move(raw), entry) {
    rdbuf(&buf_);
    // Let Error exceptions from the buffer reach the caller.
    exceptions(std::ios::badbit);
  }

 private:
  EntryBuf buf_;
};

}  // namespace

ZipReader::ZipReader(std::shared_ptr<const Source> source)
    : source_(std::move(source)) {
  ReadCentralDirectory();
}

ZipReader ZipReader::Open(const std::filesystem::path& path) {
  return ZipReader(std::make_shared<FileSource>(path));
}

ZipReader ZipReader::FromBytes(std::string bytes) {
  return ZipReader(std::make_shared<MemorySource>(std::move(bytes)));
}

bool ZipReader::HasZipSignature(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  char sig[4];
  if (!in.read(sig, 4)) return false;
  const std::uint32_t v = Get32(sig);
  return v == kLocalHeaderSig || v == kEndOfDirSig;
}

void ZipReader::ReadCentralDirectory() {
  const std::uint64_t size = source_->size();
  if (size < kEndOfDirSize) Corrupt("too small");
  const std::uint64_t tail_len =
      std::min<std::uint64_t>(size, kEndOfDirSize + 0xffff);
  std::string tail(tail_len, '\0');
  source_->ReadAt(size - tail_len, tail.data(), tail_len);

  std::size_t eocd = std::string::npos;
  for (std::size_t i = tail_len - kEndOfDirSize + 1; i-- > 0;) {
    if (Get32(&tail[i]) == kEndOfDirSig) {
      eocd = i;
      break;
    }
  }
  if (eocd == std::string::npos) Corrupt("no end-of-directory record");
  const std::uint64_t eocd_offset = size - tail_len + eocd;

  std::uint64_t count = Get16(&tail[eocd + 10]);
  std::uint64_t cd_size = Get32(&tail[eocd + 12]);
  std::uint64_t cd_offset = Get32(&tail[eocd + 16]);

  if (eocd_offset >= 20) {
    char loc[20];
    source_->ReadAt(eocd_offset - 20, loc, sizeof(loc));
    if (Get32(loc) == kZip64LocatorSig) {
      const std::uint64_t z64_offset = Get64(loc + 8);
      char rec[56];
      source_->ReadAt(z64_offset, rec, sizeof(rec));
      if (Get32(rec) != kZip64EndOfDirSig) Corrupt("bad zip64 record");
      count = Get64(rec + 32);
      cd_size = Get64(rec + 40);
      cd_offset = Get64(rec + 48);
    }
  }
  if (cd_offset > size || cd_size > size - cd_offset) {
    Corrupt("central directory out of range");
  }

  std::string cd(cd_size, '\0');
  source_->ReadAt(cd_offset, cd.data(), cd_size);
  std::size_t pos = 0;
  entries_.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    if (pos + 46 > cd.size() || Get32(&cd[pos]) != kCentralHeaderSig) {
      Corrupt("bad central directory header");
    }
    const char* h = &cd[pos];
    const std::uint16_t flags = Get16(h + 8);
    Entry e;
    e.method = Get16(h + 10);
    e.crc32 = Get32(h + 16);
    e.compressed_size = Get32(h + 20);
    e.uncompressed_size = Get32(h + 24);
    const std::uint16_t name_len = Get16(h + 28);
    const std::uint16_t extra_len = Get16(h + 30);
    const std::uint16_t comment_len = Get16(h + 32);
    e.local_header_offset = Get32(h + 42);
    if (pos + 46 + name_len + extra_len + comment_len > cd.size()) {
      Corrupt("central directory entry overruns");
    }
    e.name.assign(h + 46, name_len);

    // zip64 extended information replaces saturated 32-bit fields in order.
    const char* extra = h + 46 + name_len;
    std::size_t x = 0;
    while (x + 4 <= extra_len) {
      const std::uint16_t id = Get16(extra + x);
      const std::uint16_t len = Get16(extra + x + 2);
      if (x + 4 + len > extra_len) break;
      if (id == 0x0001) {
        const char* f = extra + x + 4;
        std::size_t used = 0;
        auto take = [&](std::uint64_t* field) {
          if (*field == 0xffffffffu && used + 8 <= len) {
            *field = Get64(f + used);
            used += 8;
          }
        };
        take(&e.uncompressed_size);
        take(&e.compressed_size);
        take(&e.local_header_offset);
      }
      x += 4 + len;
    }

    if (flags & 0x1) Corrupt("encrypted member " + e.name);
    if (e.method != 0 && e.method != 8) {
      Corrupt("unsupported compression method in " + e.name);
    }
    entries_.push_back(std::move(e));
    pos += 46 + name_len + extra_len + comment_len;
  }
}

const ZipReader::Entry* ZipReader::Find(std::string_view name) const {
  for (const Entry& e : entries_) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

std::unique_ptr<std::istream> ZipReader::OpenEntry(const Entry& entry) const {
  char local[30];
  source_->ReadAt(entry.local_header_offset, local, sizeof(local));
  if (Get32(local) != kLocalHeaderSig) Corrupt("bad local header for " + entry.name);
  const std::uint64_t data_offset =
      entry.local_header_offset + 30 + Get16(local + 26) + Get16(local + 28);
  if (data_offset > source_->size() ||
      entry.compressed_size > source_->size() - data_offset) {
    Corrupt("member data out of range: " + entry.name);
  }
  return std::make_unique<EntryStream>(source_->OpenAt(data_offset), entry);
}

std::string ZipReader::ReadEntry(const Entry& entry) const {
  auto in = OpenEntry(entry);
  std::string data;
  data.reserve(static_cast<std::size_t>(entry.uncompressed_size));
  std::array<char, kChunk> buf;
  while (in->read(buf.data(), buf.size()) || in->gcount() > 0) {
    data.append(buf.data(), static_cast<std::size_t>(in->gcount()));
  }
  return data;
}

ZipWriter::ZipWriter(const std::filesystem::path& path)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path) {
  if (!out_) throw Error(ErrorCode::kIoError, "cannot create " + path.string());
}

ZipWriter::~ZipWriter() {
  if (!finished_) {
    try {
      Finish();
    } catch (...) {
    }
  }
}

void ZipWriter::Add(std::string_view name, std::string_view data) {
  SpanBuf buf(data.data(), data.size());
  std::istream in(&buf);
  AddStream(name, in);
}

void ZipWriter::AddFile(std::string_view name,
                        const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  AddStream(name, in);
}

void ZipWriter::AddStream(std::string_view name, std::istream& in) {
  if (finished_) throw Error(ErrorCode::kInternal, "zip already finished");
  Written w;
  w.name = std::string(name);
  w.offset = static_cast<std::uint64_t>(out_.tellp());

  // Sizes follow in a data descriptor (flag bit 3).
  std::string header;
  Put32(&header, kLocalHeaderSig);
  Put16(&header, 20);
  Put16(&header, 0x0008);
  Put16(&header, 8);
  Put16(&header, kDosTime);
  Put16(&header, kDosDate);
  Put32(&header, 0);
  Put32(&header, 0);
  Put32(&header, 0);
  Put16(&header, static_cast<std::uint16_t>(w.name.size()));
  Put16(&header, 0);
  header += w.name;
  out_.write(header.data(), static_cast<std::streamsize>(header.size()));

  z_stream zs;
  std::memset(&zs, 0, sizeof(zs));
  if (deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, -MAX_WBITS, 8,
                   Z_DEFAULT_STRATEGY) != Z_OK) {
    throw Error(ErrorCode::kInternal, "deflateInit failed");
  }
  std::array<char, kChunk> inbuf;
  std::array<char, kChunk> outbuf;
  uLong crc = crc32(0L, Z_NULL, 0);
  std::uint64_t usize = 0;
  std::uint64_t csize = 0;
  int flush = Z_NO_FLUSH;
  do {
    in.read(inbuf.data(), inbuf.size());
    const auto got = static_cast<std::size_t>(in.gcount());
    crc = crc32(crc, reinterpret_cast<const Bytef*>(inbuf.data()),
                static_cast<uInt>(got));
    usize += got;
    flush = (got < inbuf.size()) ? Z_FINISH : Z_NO_FLUSH;
    zs.next_in = reinterpret_cast<Bytef*>(inbuf.data());
    zs.avail_in = static_cast<uInt>(got);
    do {
      zs.next_out = reinterpret_cast<Bytef*>(outbuf.data());
      zs.avail_out = static_cast<uInt>(outbuf.size());
      deflate(&zs, flush);
      const std::size_t have = outbuf.size() - zs.avail_out;
      out_.write(outbuf.data(), static_cast<std::streamsize>(have));
      csize += have;
    } while (zs.avail_out == 0);
  } while (flush != Z_FINISH);
  deflateEnd(&zs);

  if (usize > 0xfffffffeu || csize > 0xfffffffeu || w.offset > 0xfffffffeu) {
    throw Error(ErrorCode::kIoError, "zip64 output is not supported");
  }
  w.crc32 = static_cast<std::uint32_t>(crc);
  w.compressed_size = csize;
  w.uncompressed_size = usize;

  std::string desc;
  Put32(&desc, kDataDescriptorSig);
  Put32(&desc, w.crc32);
  Put32(&desc, static_cast<std::uint32_t>(csize));
  Put32(&desc, static_cast<std::uint32_t>(usize));
  out_.write(desc.data(), static_cast<std::streamsize>(desc.size()));
  if (!out_) throw Error(ErrorCode::kIoError, "write failed: " + path_.string());
  written_.push_back(std::move(w));
}

void ZipWriter::Finish() {
  if (finished_) return;
  finished_ = true;
  const std::uint64_t cd_offset = static_cast<std::uint64_t>(out_.tellp());
  std::string cd;
  for (const Written& w : written_) {
    Put32(&cd, kCentralHeaderSig);
    Put16(&cd, 20);
    Put16(&cd, 20);
    Put16(&cd, 0x0008);
    Put16(&cd, 8);
    Put16(&cd, kDosTime);
    Put16(&cd, kDosDate);
    Put32(&cd, w.crc32);
    Put32(&cd, static_cast<std::uint32_t>(w.compressed_size));
    Put32(&cd, static_cast<std::uint32_t>(w.uncompressed_size));
    Put16(&cd, static_cast<std::uint16_t>(w.name.size()));
    Put16(&cd, 0);
    Put16(&cd, 0);
    Put16(&cd, 0);
    Put16(&cd, 0);
    Put32(&cd, 0);
    Put32(&cd, static_cast<std::uint32_t>(w.offset));
    cd += w.name;
  }
  std::string eocd;
  Put32(&eocd, kEndOfDirSig);
  Put16(&eocd, 0);
  Put16(&eocd, 0);
  Put16(&eocd, static_cast<std::uint16_t>(written_.size()));
  Put16(&eocd, static_cast<std::uint16_t>(written_.size()));
  Put32(&eocd, static_cast<std::uint32_t>(cd.size()));
  Put32(&eocd, static_cast<std::uint32_t>(cd_offset));
  Put16(&eocd, 0);
  out_.write(cd.data(), static_cast<std::streamsize>(cd.size()));
  out_.write(eocd.data(), static_cast<std::streamsize>(eocd.size()));
  out_.close();
  if (!out_) throw Error(ErrorCode::kIoError, "write failed: " + path_.string());
}

}  // namespace wordprobe
