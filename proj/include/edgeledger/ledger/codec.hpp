#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "edgeledger/ledger/types.hpp"

namespace edgeledger::ledger {

// Canonical binary encoding: big-endian fixed-width integers and
// length-prefixed byte strings. The block hash is computed over the encoded
// body (height, prev_hash, txs), so any byte of a committed transaction is
// covered by the digest.

class ByteWriter {
  public:
    void u8(std::uint8_t v);
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void i64(std::int64_t v);
    void str(std::string_view v);  // u32 length + bytes
    void raw(const void* data, std::size_t n);

    const std::string& bytes() const { return buf_; }
    std::string take() { return std::move(buf_); }

  private:
    std::string buf_;
};

class ByteReader {
  public:
    explicit ByteReader(std::string_view data) : data_(data) {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    std::int64_t i64();
    std::string str();
    void raw(void* out, std::size_t n);

    bool at_end() const { return pos_ == data_.size(); }
    std::size_t remaining() const { return data_.size() - pos_; }

  private:
    void need(std::size_t n) const;

    std::string_view data_;
    std::size_t pos_ = 0;
};

void encode_transaction(ByteWriter& w, const Transaction& tx);
Transaction decode_transaction(ByteReader& r);

// Body bytes are the hashed region; a full record is body + block_hash.
std::string encode_block_body(const Block& b);
std::string encode_block(const Block& b);
Block decode_block(std::string_view record);

Digest compute_block_hash(const Block& b);

// Append-only block log: a flat file of [u32 length][block record] entries.
void append_block_record(const std::filesystem::path& path, const Block& b);

struct BlockFile {
    std::vector<Block> blocks;
    // Byte offset of each record's payload (after its length prefix).
    std::vector<std::uint64_t> record_offsets;
    bool intact = true;  // false when trailing records failed to decode
    std::string error;
};

// Reads records without validating chain linkage. Decode failures stop the
// scan and are reported in the result; only an unreadable file throws.
BlockFile read_block_file(const std::filesystem::path& path);

class CodecError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace edgeledger::ledger
