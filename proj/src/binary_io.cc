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

#include "hybridir/binary_io.h"

#include <bit>

#include "hybridir/error.h"

namespace hybridir {

namespace {

template <typename T>
void PutLittleEndian(std::ostream& out, T v) {
  char buf[sizeof(T)];
  for (size_t i = 0; i < sizeof(T); ++i) {
    buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  }
  out.write(buf, sizeof(T));
}

}  // namespace

void BinaryWriter::U8(uint8_t v) { out_.put(static_cast<char>(v)); }
void BinaryWriter::U32(uint32_t v) { PutLittleEndian(out_, v); }
void BinaryWriter::U64(uint64_t v) { PutLittleEndian(out_, v); }
void BinaryWriter::F32(float v) { U32(std::bit_cast<uint32_t>(v)); }
void BinaryWriter::F64(double v) { U64(std::bit_cast<uint64_t>(v)); }

void BinaryWriter::Varint(uint64_t v) {
  while (v >= 0x80) {
    U8(static_cast<uint8_t>(v | 0x80));
    v >>= 7;
  }
  U8(static_cast<uint8_t>(v));
}

void BinaryWriter::String(std::string_view s) {
  U32(static_cast<uint32_t>(s.size()));
  Raw(s);
}

void BinaryWriter::Raw(std::string_view bytes) {
  out_.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void BinaryReader::Read(char* dst, size_t n) {
  in_.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<size_t>(in_.gcount()) != n) {
    throw FormatError(source_ + ": unexpected end of file");
  }
}

uint8_t BinaryReader::U8() {
  char c;
  Read(&c, 1);
  return static_cast<uint8_t>(c);
}

uint32_t BinaryReader::U32() {
  unsigned char buf[4];
  Read(reinterpret_cast<char*>(buf), 4);
  uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | buf[i];
  return v;
}

uint64_t BinaryReader::U64() {
  unsigned char buf[8];
  Read(reinterpret_cast<char*>(buf), 8);
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | buf[i];
  return v;
}

float BinaryReader::F32() { return std::bit_cast<float>(U32()); }
double BinaryReader::F64() { return std::bit_cast<double>(U64()); }

uint64_t BinaryReader::Varint() {
  uint64_t v = 0;
  for (int shift = 0; shift < 64; shift += 7) {
    const uint8_t byte = U8();
    v |= static_cast<uint64_t>(byte & 0x7F) << shift;
    if ((byte & 0x80) == 0) return v;
  }
  throw FormatError(source_ + ": varint overflow");
}

std::string BinaryReader::String() { return Raw(U32()); }

std::string BinaryReader::Raw(size_t n) {
  std::string s(n, '\0');
  if (n > 0) Read(s.data(), n);
  return s;
}

void BinaryReader::ExpectEnd() {
  if (in_.peek() != std::char_traits<char>::eof()) {
    throw FormatError(source_ + ": trailing bytes");
  }
}

}  // namespace hybridir
