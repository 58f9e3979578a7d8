// Copyright (c) 2026 The ordforge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORDFORGE_UTIL_HPP
#define ORDFORGE_UTIL_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ordforge {

using Bytes = std::vector<std::uint8_t>;

//! Thrown for malformed text or byte input; the message names the offending field.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

//! Thrown when well-formed input breaks a protocol rule (overspends, cap
//! violations, bad spends). Distinct from ParseError so callers can map the
//! two to different exit codes.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string HexEncode(std::span<const std::uint8_t> data);
Bytes HexDecode(std::string_view hex);

Bytes ToBytes(std::string_view text);

//! Strict unsigned decimal parser. Rejects signs, whitespace and overflow.
std::uint64_t ParseU64(std::string_view text, const char* field);

//! Append-only sink for little-endian integers and Bitcoin-style varints.
class ByteWriter {
public:
    void U8(std::uint8_t v) { m_out.push_back(v); }
    void U16LE(std::uint16_t v);
    void U32LE(std::uint32_t v);
    void U64LE(std::uint64_t v);
    void VarInt(std::uint64_t v);
    void Raw(std::span<const std::uint8_t> data);

    const Bytes& Out() const { return m_out; }
    Bytes Take() { return std::move(m_out); }

private:
    Bytes m_out;
};

//! Bounds-checked counterpart of ByteWriter. Every failure reports the byte offset.
class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> data) : m_data(data) {}

    std::uint8_t U8();
    std::uint16_t U16LE();
    std::uint32_t U32LE();
    std::uint64_t U64LE();
    std::uint64_t VarInt();
    Bytes Raw(std::size_t len);
    std::span<const std::uint8_t> View(std::size_t len);

    std::size_t Pos() const { return m_pos; }
    std::size_t Remaining() const { return m_data.size() - m_pos; }
    bool AtEnd() const { return m_pos == m_data.size(); }
    std::uint8_t Peek(std::size_t ahead = 0) const;

private:
    void Need(std::size_t n) const;

    std::span<const std::uint8_t> m_data;
    std::size_t m_pos = 0;
};

} // namespace ordforge

#endif // ORDFORGE_UTIL_HPP
