#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsp {

// Little-endian binary writer. All sketch and state serialization goes
// through this so that equal objects produce byte-identical blobs.
class ByteWriter {
 public:
  void put_u8(uint8_t x) { buf_.push_back(x); }

  void put_u32(uint32_t x) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<uint8_t>(x >> (8 * i)));
  }

  void put_u64(uint64_t x) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<uint8_t>(x >> (8 * i)));
  }

  void put_i64(int64_t x) { put_u64(static_cast<uint64_t>(x)); }

  void put_f64(double x) { put_u64(std::bit_cast<uint64_t>(x)); }

  void put_bytes(const uint8_t* data, size_t len) { buf_.insert(buf_.end(), data, data + len); }

  const std::vector<uint8_t>& bytes() const { return buf_; }
  std::vector<uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<uint8_t> buf_;
};

class ByteReader {
 public:
  explicit ByteReader(const std::vector<uint8_t>& buf) : buf_(buf) {}

  uint8_t get_u8() {
    need(1);
    return buf_[pos_++];
  }

  uint32_t get_u32() {
    need(4);
    uint32_t x = 0;
    for (int i = 0; i < 4; ++i) x |= static_cast<uint32_t>(buf_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return x;
  }

  uint64_t get_u64() {
    need(8);
    uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x |= static_cast<uint64_t>(buf_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return x;
  }

  int64_t get_i64() { return static_cast<int64_t>(get_u64()); }

  double get_f64() { return std::bit_cast<double>(get_u64()); }

  bool done() const { return pos_ == buf_.size(); }
  size_t position() const { return pos_; }

 private:
  void need(size_t k) const {
    if (pos_ + k > buf_.size()) throw std::runtime_error("ByteReader: truncated input");
  }

  const std::vector<uint8_t>& buf_;
  size_t pos_ = 0;
};

// SHA-256 of a byte blob, lowercase hex.
std::string sha256_hex(const std::vector<uint8_t>& data);

}  // namespace dsp
