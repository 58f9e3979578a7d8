// Copyright (c) 2026 The ordforge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORDFORGE_HASH_HPP
#define ORDFORGE_HASH_HPP

#include <ordforge/util.hpp>

#include <array>
#include <compare>

namespace ordforge {

using Hash256 = std::array<std::uint8_t, 32>;

//! Incremental SHA-256.
class Sha256 {
public:
    Sha256();
    ~Sha256();
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    Sha256& Write(std::span<const std::uint8_t> data);
    Sha256& Write(std::string_view text);
    Hash256 Finalize();

private:
    void* m_ctx;
};

Hash256 Sha256Hash(std::span<const std::uint8_t> data);
Hash256 DoubleSha256(std::span<const std::uint8_t> data);

//! SHA-256 over an ASCII domain-separation prefix followed by the payload.
Hash256 TaggedHash(std::string_view tag, std::span<const std::uint8_t> data);

std::string HashToHex(const Hash256& h);
//! Byte-reversed hex, the conventional display order for transaction ids.
std::string HashToHexReversed(const Hash256& h);
Hash256 HashFromHex(std::string_view hex);
Hash256 HashFromHexReversed(std::string_view hex);

} // namespace ordforge

#endif // ORDFORGE_HASH_HPP
