// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Relarec Contributors

#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "relarec/error.hpp"

namespace relarec {

// Little-endian binary stream helpers shared by the persisted artifacts
// (corpus store, indexes, embedding model). Each artifact file starts with a
// four-byte magic and a u32 format version checked on load.

class BinaryWriter {
 public:
  explicit BinaryWriter(const std::string& path)
      : out_(path, std::ios::binary | std::ios::trunc), path_(path) {
    if (!out_) throw IoError("cannot open for writing: " + path);
  }

  void magic(const char tag[4], std::uint32_t version) {
    out_.write(tag, 4);
    u32(version);
  }

  void u8(std::uint8_t v) { raw(&v, 1); }
  void u32(std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    raw(b, 4);
  }
  void u64(std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    raw(b, 8);
  }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    u64(bits);
  }
  void str(const std::string& s) {
    u64(s.size());
    raw(s.data(), s.size());
  }
  void f64_vec(const std::vector<double>& v) {
    u64(v.size());
    for (double x : v) f64(x);
  }

  std::uint64_t tell() {
    return static_cast<std::uint64_t>(out_.tellp());
  }

  void close() {
    out_.close();
    if (out_.fail()) throw IoError("write failed: " + path_);
  }

 private:
  void raw(const void* p, std::size_t n) {
    out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    if (!out_) throw IoError("write failed: " + path_);
  }

  std::ofstream out_;
  std::string path_;
};

class BinaryReader {
 public:
  explicit BinaryReader(const std::string& path)
      : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw IoError("cannot open for reading: " + path);
  }

  // Verifies magic and returns the stored format version, which must not
  // exceed `max_version`.
  std::uint32_t magic(const char tag[4], std::uint32_t max_version) {
    char got[4];
    raw(got, 4);
    if (std::memcmp(got, tag, 4) != 0)
      throw IoError("bad magic in " + path_ + " (not a " +
                    std::string(tag, 4) + " file)");
    std::uint32_t version = u32();
    if (version == 0 || version > max_version)
      throw IoError("unsupported " + std::string(tag, 4) + " version in " + path_);
    return version;
  }

  std::uint8_t u8() {
    std::uint8_t v;
    raw(&v, 1);
    return v;
  }
  std::uint32_t u32() {
    unsigned char b[4];
    raw(b, 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    unsigned char b[8];
    raw(b, 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64() {
    std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
  std::string str() {
    std::uint64_t n = u64();
    if (n > (1ull << 32)) throw IoError("corrupt string length in " + path_);
    std::string s(n, '\0');
    raw(s.data(), n);
    return s;
  }
  std::vector<double> f64_vec() {
    std::uint64_t n = u64();
    if (n > (1ull << 32)) throw IoError("corrupt vector length in " + path_);
    std::vector<double> v(n);
    for (auto& x : v) x = f64();
    return v;
  }

  void seek(std::uint64_t offset) {
    in_.clear();
    in_.seekg(static_cast<std::streamoff>(offset));
    if (!in_) throw IoError("seek failed in " + path_);
  }

 private:
  void raw(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n)
      throw IoError("truncated file: " + path_);
  }

  std::ifstream in_;
  std::string path_;
};

}  // namespace relarec
