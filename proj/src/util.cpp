// Copyright (c) 2026 The ordforge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <ordforge/util.hpp>

#include <charconv>

namespace ordforge {

namespace {

constexpr char HEX_DIGITS[] = "0123456789abcdef";

int HexNibble(char c)
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

std::string HexEncode(std::span<const std::uint8_t> data)
{
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(HEX_DIGITS[b >> 4]);
        out.push_back(HEX_DIGITS[b & 0x0f]);
    }
    return out;
}

Bytes HexDecode(std::string_view hex)
{
    if (hex.size() % 2 != 0) throw ParseError("hex: odd number of digits");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = HexNibble(hex[i]);
        int lo = HexNibble(hex[i + 1]);
        if (hi < 0 || lo < 0) {
            throw ParseError("hex: invalid digit at position " + std::to_string(i));
        }
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

Bytes ToBytes(std::string_view text)
{
    return Bytes(text.begin(), text.end());
}

std::uint64_t ParseU64(std::string_view text, const char* field)
{
    if (text.empty()) throw ParseError(std::string(field) + ": empty");
    for (char c : text) {
        if (c < '0' || c > '9') throw ParseError(std::string(field) + ": not a decimal integer");
    }
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError(std::string(field) + ": out of range");
    }
    return value;
}

void ByteWriter::U16LE(std::uint16_t v)
{
    m_out.push_back(static_cast<std::uint8_t>(v));
    m_out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void ByteWriter::U32LE(std::uint32_t v)
{
    for (int i = 0; i < 4; ++i) m_out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::U64LE(std::uint64_t v)
{
    for (int i = 0; i < 8; ++i) m_out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::VarInt(std::uint64_t v)
{
    if (v < 0xfd) {
        U8(static_cast<std::uint8_t>(v));
    } else if (v <= 0xffff) {
        U8(0xfd);
        U16LE(static_cast<std::uint16_t>(v));
    } else if (v <= 0xffffffff) {
        U8(0xfe);
        U32LE(static_cast<std::uint32_t>(v));
    } else {
        U8(0xff);
        U64LE(v);
    }
}

void ByteWriter::Raw(std::span<const std::uint8_t> data)
{
    m_out.insert(m_out.end(), data.begin(), data.end());
}

void ByteReader::Need(std::size_t n) const
{
    if (m_data.size() - m_pos < n) {
        throw ParseError("truncated input at byte " + std::to_string(m_pos));
    }
}

std::uint8_t ByteReader::U8()
{
    Need(1);
    return m_data[m_pos++];
}

std::uint16_t ByteReader::U16LE()
{
    Need(2);
    std::uint16_t v = static_cast<std::uint16_t>(m_data[m_pos]) |
                      static_cast<std::uint16_t>(m_data[m_pos + 1]) << 8;
    m_pos += 2;
    return v;
}

std::uint32_t ByteReader::U32LE()
{
    Need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(m_data[m_pos + i]) << (8 * i);
    m_pos += 4;
    return v;
}

std::uint64_t ByteReader::U64LE()
{
    Need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(m_data[m_pos + i]) << (8 * i);
    m_pos += 8;
    return v;
}

std::uint64_t ByteReader::VarInt()
{
    std::uint8_t tag = U8();
    if (tag < 0xfd) return tag;
    if (tag == 0xfd) return U16LE();
    if (tag == 0xfe) return U32LE();
    return U64LE();
}

Bytes ByteReader::Raw(std::size_t len)
{
    Need(len);
    Bytes out(m_data.begin() + m_pos, m_data.begin() + m_pos + len);
    m_pos += len;
    return out;
}

std::span<const std::uint8_t> ByteReader::View(std::size_t len)
{
    Need(len);
    auto out = m_data.subspan(m_pos, len);
    m_pos += len;
    return out;
}

std::uint8_t ByteReader::Peek(std::size_t ahead) const
{
    Need(ahead + 1);
    return m_data[m_pos + ahead];
}

} // namespace ordforge
