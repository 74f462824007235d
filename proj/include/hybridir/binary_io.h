// Copyright 2026 The hybridir Authors.
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

#ifndef HYBRIDIR_BINARY_IO_H_
#define HYBRIDIR_BINARY_IO_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

// Little-endian primitive encoding shared by the on-disk index formats.

namespace hybridir {

class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& out) : out_(out) {}

  void U8(uint8_t v);
  void U32(uint32_t v);
  void U64(uint64_t v);
  void F32(float v);
  void F64(double v);
  // LEB128.
  void Varint(uint64_t v);
  // u32 length followed by the bytes.
  void String(std::string_view s);
  void Raw(std::string_view bytes);

  bool ok() const { return static_cast<bool>(out_); }

 private:
  std::ostream& out_;
};

// Every read throws FormatError naming `source` on truncated input.
class BinaryReader {
 public:
  BinaryReader(std::istream& in, std::string source)
      : in_(in), source_(std::move(source)) {}

  uint8_t U8();
  uint32_t U32();
  uint64_t U64();
  float F32();
  double F64();
  uint64_t Varint();
  std::string String();
  std::string Raw(size_t n);

  // Throws unless the stream is exhausted.
  void ExpectEnd();

  const std::string& source() const { return source_; }

 private:
  void Read(char* dst, size_t n);

  std::istream& in_;
  std::string source_;
};

}  // namespace hybridir

#endif  // HYBRIDIR_BINARY_IO_H_
