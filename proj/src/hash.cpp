// Copyright (c) 2026 The ordforge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <ordforge/hash.hpp>

#include <openssl/evp.h>

#include <algorithm>
#include <cassert>

namespace ordforge {

Sha256::Sha256()
{
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    assert(ctx != nullptr);
    int ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    assert(ok == 1);
    (void)ok;
    m_ctx = ctx;
}

Sha256::~Sha256()
{
    EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(m_ctx));
}

Sha256& Sha256::Write(std::span<const std::uint8_t> data)
{
    int ok = EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(m_ctx), data.data(), data.size());
    assert(ok == 1);
    (void)ok;
    return *this;
}

Sha256& Sha256::Write(std::string_view text)
{
    int ok = EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(m_ctx), text.data(), text.size());
    assert(ok == 1);
    (void)ok;
    return *this;
}

Hash256 Sha256::Finalize()
{
    Hash256 out;
    unsigned int len = 0;
    int ok = EVP_DigestFinal_ex(static_cast<EVP_MD_CTX*>(m_ctx), out.data(), &len);
    assert(ok == 1 && len == out.size());
    (void)ok;
    return out;
}

Hash256 Sha256Hash(std::span<const std::uint8_t> data)
{
    return Sha256().Write(data).Finalize();
}

Hash256 DoubleSha256(std::span<const std::uint8_t> data)
{
    Hash256 once = Sha256Hash(data);
    return Sha256Hash(once);
}

Hash256 TaggedHash(std::string_view tag, std::span<const std::uint8_t> data)
{
    return Sha256().Write(tag).Write(data).Finalize();
}

std::string HashToHex(const Hash256& h)
{
    return HexEncode(h);
}

std::string HashToHexReversed(const Hash256& h)
{
    Hash256 rev = h;
    std::reverse(rev.begin(), rev.end());
    return HexEncode(rev);
}

Hash256 HashFromHex(std::string_view hex)
{
    Bytes raw = HexDecode(hex);
    if (raw.size() != 32) throw ParseError("hash: expected 32 bytes");
    Hash256 out;
    std::copy(raw.begin(), raw.end(), out.begin());
    return out;
}

Hash256 HashFromHexReversed(std::string_view hex)
{
    Hash256 out = HashFromHex(hex);
    std::reverse(out.begin(), out.end());
    return out;
}

} // namespace ordforge
