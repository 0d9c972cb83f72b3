#include "edgeledger/ledger/codec.hpp"

#include <cstring>
#include <fstream>

namespace edgeledger::ledger {

void ByteWriter::u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }

void ByteWriter::u32(std::uint32_t v) {
    char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                 static_cast<char>(v >> 8), static_cast<char>(v)};
    buf_.append(b, 4);
}

void ByteWriter::u64(std::uint64_t v) {
    u32(static_cast<std::uint32_t>(v >> 32));
    u32(static_cast<std::uint32_t>(v));
}

void ByteWriter::i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }

void ByteWriter::str(std::string_view v) {
    if (v.size() > 0xffffffffu) throw CodecError("string too long");
    u32(static_cast<std::uint32_t>(v.size()));
    buf_.append(v.data(), v.size());
}

void ByteWriter::raw(const void* data, std::size_t n) {
    buf_.append(static_cast<const char*>(data), n);
}

void ByteReader::need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw CodecError("truncated record");
}

std::uint8_t ByteReader::u8() {
    need(1);
    return static_cast<std::uint8_t>(data_[pos_++]);
}

std::uint32_t ByteReader::u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | static_cast<std::uint8_t>(data_[pos_++]);
    return v;
}

std::uint64_t ByteReader::u64() {
    std::uint64_t hi = u32();
    return (hi << 32) | u32();
}

std::int64_t ByteReader::i64() { return static_cast<std::int64_t>(u64()); }

std::string ByteReader::str() {
    std::uint32_t n = u32();
    need(n);
    std::string out(data_.substr(pos_, n));
    pos_ += n;
    return out;
}

void ByteReader::raw(void* out, std::size_t n) {
    need(n);
    std::memcpy(out, data_.data() + pos_, n);
    pos_ += n;
}

void encode_transaction(ByteWriter& w, const Transaction& tx) {
    w.str(tx.tx_id);
    w.str(tx.contract);
    w.str(tx.operation);
    w.u32(static_cast<std::uint32_t>(tx.args.size()));
    for (const auto& a : tx.args) w.str(a);
    w.i64(tx.timestamp_ms);
    w.u32(static_cast<std::uint32_t>(tx.writes.size()));
    for (const auto& wr : tx.writes) {
        w.str(wr.key);
        w.u8(wr.is_delete ? 1 : 0);
        w.str(wr.is_delete ? std::string_view{} : std::string_view{wr.value});
    }
}

Transaction decode_transaction(ByteReader& r) {
    Transaction tx;
    tx.tx_id = r.str();
    tx.contract = r.str();
    tx.operation = r.str();
    std::uint32_t nargs = r.u32();
    tx.args.reserve(nargs);
    for (std::uint32_t i = 0; i < nargs; ++i) tx.args.push_back(r.str());
    tx.timestamp_ms = r.i64();
    std::uint32_t nwrites = r.u32();
    tx.writes.reserve(nwrites);
    for (std::uint32_t i = 0; i < nwrites; ++i) {
        WriteOp wr;
        wr.key = r.str();
        wr.is_delete = r.u8() != 0;
        wr.value = r.str();
        tx.writes.push_back(std::move(wr));
    }
    return tx;
}

std::string encode_block_body(const Block& b) {
    ByteWriter w;
    w.u64(b.height);
    w.raw(b.prev_hash.data(), b.prev_hash.size());
    w.u32(static_cast<std::uint32_t>(b.txs.size()));
    for (const auto& tx : b.txs) encode_transaction(w, tx);
    return w.take();
}

std::string encode_block(const Block& b) {
    std::string out = encode_block_body(b);
    out.append(reinterpret_cast<const char*>(b.block_hash.data()), b.block_hash.size());
    return out;
}

Block decode_block(std::string_view record) {
    ByteReader r(record);
    Block b;
    b.height = r.u64();
    r.raw(b.prev_hash.data(), b.prev_hash.size());
    std::uint32_t n = r.u32();
    b.txs.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) b.txs.push_back(decode_transaction(r));
    r.raw(b.block_hash.data(), b.block_hash.size());
    if (!r.at_end()) throw CodecError("trailing bytes in block record");
    return b;
}

Digest compute_block_hash(const Block& b) { return sha256(encode_block_body(b)); }

void append_block_record(const std::filesystem::path& path, const Block& b) {
    std::string record = encode_block(b);
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw CodecError("cannot open block log for append: " + path.string());
    char len[4] = {static_cast<char>(record.size() >> 24), static_cast<char>(record.size() >> 16),
                   static_cast<char>(record.size() >> 8), static_cast<char>(record.size())};
    out.write(len, 4);
    out.write(record.data(), static_cast<std::streamsize>(record.size()));
    out.flush();
    if (!out) throw CodecError("block log write failed: " + path.string());
}

BlockFile read_block_file(const std::filesystem::path& path) {
    BlockFile out;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CodecError("cannot open block log: " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::size_t pos = 0;
    while (pos < data.size()) {
        try {
            if (data.size() - pos < 4) throw CodecError("truncated record length");
            std::uint32_t len = 0;
            for (int i = 0; i < 4; ++i)
                len = (len << 8) |
                      static_cast<std::uint8_t>(data[pos + static_cast<std::size_t>(i)]);
            if (data.size() - pos - 4 < len) throw CodecError("truncated block record");
            Block b = decode_block(std::string_view(data).substr(pos + 4, len));
            out.record_offsets.push_back(pos + 4);
            out.blocks.push_back(std::move(b));
            pos += 4 + len;
        } catch (const CodecError& e) {
            out.intact = false;
            out.error = e.what();
            break;
        }
    }
    return out;
}

}  // namespace edgeledger::ledger
