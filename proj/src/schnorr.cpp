// Copyright (c) 2026 The ordforge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <ordforge/schnorr.hpp>

#include <algorithm>
#include <cassert>
#include <memory>
#include <random>
#include <stdexcept>

namespace ordforge {

namespace {

mpz_class Mod(const mpz_class& v, const mpz_class& m)
{
    mpz_class r = v % m;
    if (r < 0) r += m;
    return r;
}

mpz_class FromBytesBE(std::span<const std::uint8_t> bytes)
{
    mpz_class v;
    if (!bytes.empty()) mpz_import(v.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
    return v;
}

void ToBytesBE(const mpz_class& v, std::span<std::uint8_t> out)
{
    std::fill(out.begin(), out.end(), 0);
    if (v == 0) return;
    std::size_t needed = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
    assert(v > 0 && needed <= out.size());
    std::size_t count = 0;
    mpz_export(out.data() + (out.size() - needed), &count, 1, 1, 1, 0, v.get_mpz_t());
}

} // namespace

EntropySource SystemEntropy()
{
    return [](std::span<std::uint8_t> out) {
        std::random_device device;
        std::size_t i = 0;
        while (i < out.size()) {
            unsigned int word = device();
            for (int b = 0; b < 4 && i < out.size(); ++b) {
                out[i++] = static_cast<std::uint8_t>(word >> (8 * b));
            }
        }
    };
}

EntropySource DeterministicEntropy(std::span<const std::uint8_t> seed)
{
    struct Stream {
        Bytes seed;
        std::uint64_t counter = 0;
        Hash256 block{};
        std::size_t pos = sizeof(Hash256);
    };
    auto state = std::make_shared<Stream>();
    state->seed.assign(seed.begin(), seed.end());
    return [state](std::span<std::uint8_t> out) {
        for (std::uint8_t& byte : out) {
            if (state->pos == state->block.size()) {
                ByteWriter w;
                w.Raw(state->seed);
                w.U64LE(state->counter++);
                state->block = Sha256Hash(w.Out());
                state->pos = 0;
            }
            byte = state->block[state->pos++];
        }
    };
}

const Curve& DefaultCurve()
{
    static const Curve curve(CurveParams::Secp256k1());
    return curve;
}

const CurveParams& CurveParams::Secp256k1()
{
    static const CurveParams params{
        mpz_class("fffffffffffffffffffffffffffffffffffffffffffffffffffffffefffffc2f", 16),
        mpz_class(0),
        mpz_class(7),
        mpz_class("fffffffffffffffffffffffffffffffebaaedce6af48a03bbfd25e8cd0364141", 16),
        mpz_class("79be667ef9dcbbac55a06295ce870b07029bfcdb2dce28d959f2815b16f81798", 16),
        mpz_class("483ada7726a3c4655da4fbfc0e1108a8fd17b448a68554199c47d08ffb10d4b8", 16),
    };
    return params;
}

//! Z = 0 encodes the identity; otherwise x = X/Z^2, y = Y/Z^3.
struct Curve::Jacobian {
    mpz_class X{};
    mpz_class Y{};
    mpz_class Z{};
};

Curve::Curve(CurveParams params) : m_params(std::move(params))
{
    const mpz_class& p = m_params.p;
    const mpz_class& n = m_params.n;
    if (p < 3 || Mod(p, 4) != 3) throw std::invalid_argument("field prime must be 3 mod 4");
    if (n < 2) throw std::invalid_argument("group order must exceed 1");
    m_generator = Point::Affine(m_params.gx, m_params.gy);
    if (!OnCurve(m_generator)) throw std::invalid_argument("generator not on curve");

    std::size_t nbits = mpz_sizeinbase(n.get_mpz_t(), 2);
    m_windows = (nbits + 3) / 4;
    m_table.resize(m_windows * 15);
    Jacobian base = ToJacobian(m_generator);
    for (std::size_t w = 0; w < m_windows; ++w) {
        Jacobian cur = base;
        for (unsigned d = 1; d <= 15; ++d) {
            m_table[w * 15 + d - 1] = ToAffine(cur);
            if (d < 15) cur = JacAdd(cur, base);
        }
        base = JacAdd(cur, base);
    }
    if (!MulG(n).infinity) throw std::invalid_argument("generator order mismatch");
}

bool Curve::OnCurve(const Point& pt) const
{
    if (pt.infinity) return true;
    const mpz_class& p = m_params.p;
    if (pt.x < 0 || pt.x >= p || pt.y < 0 || pt.y >= p) return false;
    mpz_class lhs = Mod(pt.y * pt.y, p);
    mpz_class rhs = Mod(pt.x * pt.x * pt.x + m_params.a * pt.x + m_params.b, p);
    return lhs == rhs;
}

Curve::Jacobian Curve::ToJacobian(const Point& pt) const
{
    if (pt.infinity) return Jacobian{};
    return Jacobian{pt.x, pt.y, 1};
}

Point Curve::ToAffine(const Jacobian& pt) const
{
    if (pt.Z == 0) return Point::Infinity();
    const mpz_class& p = m_params.p;
    mpz_class zi;
    if (!mpz_invert(zi.get_mpz_t(), pt.Z.get_mpz_t(), p.get_mpz_t())) {
        throw std::logic_error("non-invertible Z coordinate");
    }
    mpz_class zi2 = Mod(zi * zi, p);
    return Point::Affine(Mod(pt.X * zi2, p), Mod(pt.Y * zi2 * zi, p));
}

Curve::Jacobian Curve::JacDouble(const Jacobian& pt) const
{
    if (pt.Z == 0 || pt.Y == 0) return Jacobian{};
    const mpz_class& p = m_params.p;
    mpz_class yy = Mod(pt.Y * pt.Y, p);
    mpz_class s = Mod(4 * pt.X * yy, p);
    mpz_class z2 = Mod(pt.Z * pt.Z, p);
    mpz_class m = Mod(3 * pt.X * pt.X + m_params.a * z2 * z2, p);
    mpz_class x3 = Mod(m * m - 2 * s, p);
    mpz_class y3 = Mod(m * (s - x3) - 8 * yy * yy, p);
    mpz_class z3 = Mod(2 * pt.Y * pt.Z, p);
    return Jacobian{x3, y3, z3};
}

Curve::Jacobian Curve::JacAdd(const Jacobian& lhs, const Jacobian& rhs) const
{
    if (lhs.Z == 0) return rhs;
    if (rhs.Z == 0) return lhs;
    const mpz_class& p = m_params.p;
    mpz_class z1z1 = Mod(lhs.Z * lhs.Z, p);
    mpz_class z2z2 = Mod(rhs.Z * rhs.Z, p);
    mpz_class u1 = Mod(lhs.X * z2z2, p);
    mpz_class u2 = Mod(rhs.X * z1z1, p);
    mpz_class s1 = Mod(lhs.Y * z2z2 * rhs.Z, p);
    mpz_class s2 = Mod(rhs.Y * z1z1 * lhs.Z, p);
    if (u1 == u2) {
        if (s1 != s2) return Jacobian{};
        return JacDouble(lhs);
    }
    mpz_class h = Mod(u2 - u1, p);
    mpz_class r = Mod(s2 - s1, p);
    mpz_class h2 = Mod(h * h, p);
    mpz_class h3 = Mod(h2 * h, p);
    mpz_class v = Mod(u1 * h2, p);
    mpz_class x3 = Mod(r * r - h3 - 2 * v, p);
    mpz_class y3 = Mod(r * (v - x3) - s1 * h3, p);
    mpz_class z3 = Mod(h * lhs.Z * rhs.Z, p);
    return Jacobian{x3, y3, z3};
}

Curve::Jacobian Curve::JacAddAffine(const Jacobian& lhs, const Point& rhs) const
{
    if (rhs.infinity) return lhs;
    if (lhs.Z == 0) return ToJacobian(rhs);
    const mpz_class& p = m_params.p;
    mpz_class z1z1 = Mod(lhs.Z * lhs.Z, p);
    mpz_class u2 = Mod(rhs.x * z1z1, p);
    mpz_class s2 = Mod(rhs.y * z1z1 * lhs.Z, p);
    if (u2 == lhs.X) {
        if (s2 != lhs.Y) return Jacobian{};
        return JacDouble(lhs);
    }
    mpz_class h = Mod(u2 - lhs.X, p);
    mpz_class r = Mod(s2 - lhs.Y, p);
    mpz_class h2 = Mod(h * h, p);
    mpz_class h3 = Mod(h2 * h, p);
    mpz_class v = Mod(lhs.X * h2, p);
    mpz_class x3 = Mod(r * r - h3 - 2 * v, p);
    mpz_class y3 = Mod(r * (v - x3) - lhs.Y * h3, p);
    mpz_class z3 = Mod(h * lhs.Z, p);
    return Jacobian{x3, y3, z3};
}

Point Curve::Add(const Point& lhs, const Point& rhs) const
{
    return ToAffine(JacAdd(ToJacobian(lhs), ToJacobian(rhs)));
}

Point Curve::Negate(const Point& pt) const
{
    if (pt.infinity) return pt;
    return Point::Affine(pt.x, Mod(-pt.y, m_params.p));
}

Point Curve::Mul(const Point& pt, const mpz_class& k) const
{
    mpz_class r = Mod(k, m_params.n);
    if (r == 0 || pt.infinity) return Point::Infinity();
    Jacobian base = ToJacobian(pt);
    Jacobian acc{};
    for (std::size_t i = mpz_sizeinbase(r.get_mpz_t(), 2); i-- > 0;) {
        acc = JacDouble(acc);
        if (mpz_tstbit(r.get_mpz_t(), i)) acc = JacAdd(acc, base);
    }
    return ToAffine(acc);
}

Point Curve::MulG(const mpz_class& k) const
{
    mpz_class r = Mod(k, m_params.n);
    if (r == 0) return Point::Infinity();
    Jacobian acc{};
    for (std::size_t w = 0; w < m_windows; ++w) {
        unsigned digit = 0;
        for (unsigned b = 0; b < 4; ++b) {
            if (mpz_tstbit(r.get_mpz_t(), 4 * w + b)) digit |= 1u << b;
        }
        if (digit != 0) acc = JacAddAffine(acc, m_table[w * 15 + digit - 1]);
    }
    return ToAffine(acc);
}

Bytes Curve::EncodePoint(const Point& pt) const
{
    if (pt.infinity) throw std::invalid_argument("the identity point has no encoding");
    Bytes out(33);
    out[0] = mpz_odd_p(pt.y.get_mpz_t()) ? 0x03 : 0x02;
    ToBytesBE(pt.x, std::span(out).subspan(1));
    return out;
}

Point Curve::DecodePoint(std::span<const std::uint8_t> bytes) const
{
    if (bytes.size() != 33) throw ParseError("point must be 33 bytes");
    if (bytes[0] != 0x02 && bytes[0] != 0x03) throw ParseError("point prefix must be 02 or 03");
    const mpz_class& p = m_params.p;
    mpz_class x = FromBytesBE(bytes.subspan(1));
    if (x >= p) throw ParseError("point x exceeds the field");
    mpz_class rhs = Mod(x * x * x + m_params.a * x + m_params.b, p);
    mpz_class exp = (p + 1) / 4;
    mpz_class y;
    mpz_powm(y.get_mpz_t(), rhs.get_mpz_t(), exp.get_mpz_t(), p.get_mpz_t());
    if (Mod(y * y, p) != rhs) throw ParseError("point x is not on the curve");
    bool want_odd = bytes[0] == 0x03;
    if (y != 0 && (mpz_odd_p(y.get_mpz_t()) != 0) != want_odd) y = p - y;
    if ((mpz_odd_p(y.get_mpz_t()) != 0) != want_odd) throw ParseError("point parity unavailable");
    return Point::Affine(std::move(x), std::move(y));
}

mpz_class Curve::ScalarFromHash(const Hash256& h) const
{
    return Mod(FromBytesBE(h), m_params.n);
}

mpz_class Curve::RandomScalar(const EntropySource& entropy) const
{
    const mpz_class& n = m_params.n;
    std::size_t nbits = mpz_sizeinbase(n.get_mpz_t(), 2);
    Bytes buf((nbits + 7) / 8);
    unsigned top_bits = nbits % 8;
    std::uint8_t mask = top_bits == 0 ? 0xff : static_cast<std::uint8_t>((1u << top_bits) - 1);
    for (;;) {
        entropy(buf);
        buf[0] &= mask;
        mpz_class v = FromBytesBE(buf);
        if (v != 0 && v < n) return v;
    }
}

KeyPair Curve::Keygen(const EntropySource& entropy) const
{
    mpz_class d = RandomScalar(entropy);
    Point q = MulG(d);
    return KeyPair{std::move(d), std::move(q)};
}

namespace {

mpz_class Challenge(const Curve& curve, const Point& R, const Point& Q, std::span<const std::uint8_t> msg)
{
    ByteWriter w;
    w.Raw(curve.EncodePoint(R));
    w.Raw(curve.EncodePoint(Q));
    w.Raw(msg);
    return curve.ScalarFromHash(TaggedHash(TAG_MSG, w.Out()));
}

void RequireSecret(const Curve& curve, const mpz_class& d)
{
    if (d < 1 || d >= curve.Params().n) throw std::invalid_argument("secret scalar out of range");
}

} // namespace

Signature Curve::Sign(const mpz_class& d, std::span<const std::uint8_t> msg, const EntropySource& entropy) const
{
    return SignWithNonce(d, msg, RandomScalar(entropy));
}

Signature Curve::SignWithNonce(const mpz_class& d, std::span<const std::uint8_t> msg, const mpz_class& k) const
{
    RequireSecret(*this, d);
    if (k < 1 || k >= m_params.n) throw std::invalid_argument("nonce out of range");
    Point r = MulG(k);
    Point q = MulG(d);
    mpz_class e = Challenge(*this, r, q, msg);
    mpz_class s = Mod(k - e * d, m_params.n);
    return Signature{std::move(r), std::move(s)};
}

bool Curve::Verify(const Point& Q, std::span<const std::uint8_t> msg, const Signature& sig) const
{
    if (Q.infinity || !OnCurve(Q)) throw std::invalid_argument("public key not on curve");
    if (sig.R.infinity) return false;
    mpz_class e = Challenge(*this, sig.R, Q, msg);
    Point v = Add(MulG(sig.s), Mul(Q, e));
    return v == sig.R;
}

Bytes EncodeScalar32(const mpz_class& v)
{
    if (v < 0) throw std::invalid_argument("scalar must be non-negative");
    Bytes out(32);
    if (mpz_sizeinbase(v.get_mpz_t(), 2) > 256) throw std::invalid_argument("scalar exceeds 32 bytes");
    ToBytesBE(v, out);
    return out;
}

mpz_class DecodeScalar32(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() != 32) throw ParseError("scalar must be 32 bytes");
    return FromBytesBE(bytes);
}

Bytes EncodeSignature(const Curve& curve, const Signature& sig)
{
    ByteWriter w;
    w.Raw(curve.EncodePoint(sig.R));
    w.Raw(EncodeScalar32(sig.s));
    return w.Take();
}

Signature DecodeSignature(const Curve& curve, std::span<const std::uint8_t> bytes)
{
    if (bytes.size() != 65) throw ParseError("signature must be 65 bytes");
    Point r = curve.DecodePoint(bytes.first(33));
    mpz_class s = DecodeScalar32(bytes.subspan(33));
    if (s >= curve.Params().n) throw ParseError("signature s exceeds the group order");
    return Signature{std::move(r), std::move(s)};
}

Point AggregateKeys(const Curve& curve, std::span<const Point> keys)
{
    if (keys.empty()) throw std::invalid_argument("no keys to aggregate");
    Point sum = Point::Infinity();
    for (const Point& key : keys) {
        if (key.infinity || !curve.OnCurve(key)) throw std::invalid_argument("aggregated key not on curve");
        sum = curve.Add(sum, key);
    }
    if (sum.infinity) throw std::invalid_argument("aggregate key is the identity");
    return sum;
}

Hash256 MerkleLeaf(std::span<const std::uint8_t> script_bytes)
{
    return TaggedHash(TAG_LEAF, script_bytes);
}

Hash256 MerkleNode(const Hash256& lhs, const Hash256& rhs)
{
    const Hash256& lo = lhs <= rhs ? lhs : rhs;
    const Hash256& hi = lhs <= rhs ? rhs : lhs;
    ByteWriter w;
    w.Raw(lo);
    w.Raw(hi);
    return TaggedHash(TAG_NODE, w.Out());
}

namespace {

std::vector<Hash256> LeafHashes(std::span<const Script> scripts)
{
    std::vector<Hash256> leaves;
    leaves.reserve(scripts.size());
    for (const Script& script : scripts) leaves.push_back(MerkleLeaf(script.Encode()));
    return leaves;
}

} // namespace

Hash256 MerkleRootOf(std::span<const Script> scripts)
{
    if (scripts.empty()) throw std::invalid_argument("merkle tree needs at least one script");
    std::vector<Hash256> level = LeafHashes(scripts);
    while (level.size() > 1) {
        std::vector<Hash256> next;
        next.reserve((level.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(MerkleNode(level[i], level[i + 1]));
        if (level.size() % 2 == 1) next.push_back(level.back());
        level = std::move(next);
    }
    return level.front();
}

std::vector<Hash256> MerkleProofFor(std::span<const Script> scripts, std::size_t index)
{
    if (scripts.empty()) throw std::invalid_argument("merkle tree needs at least one script");
    if (index >= scripts.size()) throw std::out_of_range("merkle leaf index out of range");
    std::vector<Hash256> proof;
    std::vector<Hash256> level = LeafHashes(scripts);
    while (level.size() > 1) {
        std::size_t sibling = index ^ 1;
        if (sibling < level.size()) proof.push_back(level[sibling]);
        std::vector<Hash256> next;
        next.reserve((level.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(MerkleNode(level[i], level[i + 1]));
        if (level.size() % 2 == 1) next.push_back(level.back());
        level = std::move(next);
        index /= 2;
    }
    return proof;
}

bool VerifyMerkleProof(const Hash256& root, const Script& leaf, std::span<const Hash256> proof)
{
    Hash256 h = MerkleLeaf(leaf.Encode());
    for (const Hash256& sibling : proof) h = MerkleNode(h, sibling);
    return h == root;
}

mpz_class TaprootTweak(const Curve& curve, const Point& internal_key, const Hash256& merkle_root)
{
    ByteWriter w;
    w.Raw(curve.EncodePoint(internal_key));
    w.Raw(merkle_root);
    return curve.ScalarFromHash(TaggedHash(TAG_TWEAK, w.Out()));
}

TaprootCommitment TaprootOutput(const Curve& curve, const Point& internal_key, const Hash256& merkle_root)
{
    if (internal_key.infinity || !curve.OnCurve(internal_key)) {
        throw std::invalid_argument("internal key not on curve");
    }
    mpz_class t = TaprootTweak(curve, internal_key, merkle_root);
    Point output = curve.Add(internal_key, curve.MulG(t));
    if (output.infinity) throw std::invalid_argument("degenerate taproot output key");
    return TaprootCommitment{internal_key, merkle_root, std::move(output)};
}

mpz_class TweakSecret(const Curve& curve, const mpz_class& d, const Hash256& merkle_root)
{
    RequireSecret(curve, d);
    mpz_class t = TaprootTweak(curve, curve.MulG(d), merkle_root);
    mpz_class sum = (d + t) % curve.Params().n;
    if (sum == 0) throw std::invalid_argument("degenerate tweaked secret");
    return sum;
}

bool VerifyScriptPath(const Curve& curve, const TaprootCommitment& commitment, const Script& script,
                      std::span<const Hash256> proof)
{
    if (commitment.internal_key.infinity || !curve.OnCurve(commitment.internal_key)) return false;
    if (!VerifyMerkleProof(commitment.merkle_root, script, proof)) return false;
    mpz_class t = TaprootTweak(curve, commitment.internal_key, commitment.merkle_root);
    Point output = curve.Add(commitment.internal_key, curve.MulG(t));
    return !output.infinity && output == commitment.output_key;
}

Script TaprootScriptPubkey(const Curve& curve, const Point& output_key)
{
    Script script;
    script.Push(curve.EncodePoint(output_key));
    script.Add(OP_CHECKSIG);
    return script;
}

Script KeyOnlyScriptPubkey(const Curve& curve, const Point& internal_key)
{
    return TaprootScriptPubkey(curve, TaprootOutput(curve, internal_key, Hash256{}).output_key);
}

Signature SignDeterministic(const Curve& curve, const mpz_class& d, std::span<const std::uint8_t> msg)
{
    ByteWriter seed;
    seed.Raw(EncodeScalar32(d));
    seed.Raw(Sha256Hash(msg));
    return curve.Sign(d, msg, DeterministicEntropy(seed.Out()));
}

} // namespace ordforge
