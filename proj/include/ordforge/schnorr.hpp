// Copyright (c) 2026 The ordforge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORDFORGE_SCHNORR_HPP
#define ORDFORGE_SCHNORR_HPP

#include <ordforge/hash.hpp>
#include <ordforge/script.hpp>
#include <ordforge/util.hpp>

#include <gmpxx.h>

#include <functional>
#include <span>
#include <vector>

namespace ordforge {

// Domain-separation prefixes for every hash computed by this module.
inline constexpr std::string_view TAG_MSG = "ord-forge/msg";
inline constexpr std::string_view TAG_LEAF = "ord-forge/leaf";
inline constexpr std::string_view TAG_NODE = "ord-forge/node";
inline constexpr std::string_view TAG_TWEAK = "ord-forge/tweak";

//! Fills the span with random bytes; throws on entropy failure.
using EntropySource = std::function<void(std::span<std::uint8_t>)>;

EntropySource SystemEntropy();
//! Reproducible stream derived from `seed`; for tests and seeded key derivation.
EntropySource DeterministicEntropy(std::span<const std::uint8_t> seed);

//! Short-Weierstrass curve y^2 = x^3 + ax + b over F_p with a generator of
//! prime order n. Injectable so tests can swap in a small group.
struct CurveParams {
    mpz_class p;
    mpz_class a;
    mpz_class b;
    mpz_class n;
    mpz_class gx;
    mpz_class gy;

    static const CurveParams& Secp256k1();
};

struct Point {
    mpz_class x{};
    mpz_class y{};
    bool infinity = true;

    static Point Infinity() { return {}; }
    static Point Affine(mpz_class px, mpz_class py) { return Point{std::move(px), std::move(py), false}; }

    bool operator==(const Point& other) const
    {
        if (infinity || other.infinity) return infinity == other.infinity;
        return x == other.x && y == other.y;
    }
};

struct KeyPair {
    mpz_class d; // secret scalar in [1, n-1]
    Point Q;     // d*G
};

struct Signature {
    Point R;
    mpz_class s; // in [0, n-1]

    bool operator==(const Signature&) const = default;
};

struct TaprootCommitment {
    Point internal_key;
    Hash256 merkle_root{};
    Point output_key;
};

class Curve;

//! Process-wide secp256k1 instance (the window table makes construction
//! non-trivial, so share one).
const Curve& DefaultCurve();

class Curve {
public:
    explicit Curve(CurveParams params);

    const CurveParams& Params() const { return m_params; }
    const Point& Generator() const { return m_generator; }

    bool OnCurve(const Point& pt) const;
    Point Add(const Point& lhs, const Point& rhs) const;
    Point Negate(const Point& pt) const;
    Point Mul(const Point& pt, const mpz_class& k) const;
    //! Fixed-base multiple of the generator via a precomputed window table.
    Point MulG(const mpz_class& k) const;

    //! 33-byte compressed encoding (0x02/0x03 parity prefix, 32-byte BE x).
    //! The identity has no encoding and throws.
    Bytes EncodePoint(const Point& pt) const;
    //! Throws ParseError on bad length, bad prefix, or x with no curve point.
    Point DecodePoint(std::span<const std::uint8_t> bytes) const;

    //! Hash bytes as a big-endian integer reduced mod n.
    mpz_class ScalarFromHash(const Hash256& h) const;
    //! Uniform draw from [1, n-1] by rejection sampling.
    mpz_class RandomScalar(const EntropySource& entropy) const;

    KeyPair Keygen(const EntropySource& entropy) const;
    //! R = kG with fresh k; e = H_msg(enc(R) || enc(Q) || m) mod n; s = k - e*d mod n.
    Signature Sign(const mpz_class& d, std::span<const std::uint8_t> msg, const EntropySource& entropy) const;
    Signature SignWithNonce(const mpz_class& d, std::span<const std::uint8_t> msg, const mpz_class& k) const;
    //! Accepts iff sG + eQ = R. Off-curve or identity Q throws; a bad
    //! signature merely returns false.
    bool Verify(const Point& Q, std::span<const std::uint8_t> msg, const Signature& sig) const;

private:
    struct Jacobian;
    Jacobian ToJacobian(const Point& pt) const;
    Point ToAffine(const Jacobian& pt) const;
    Jacobian JacDouble(const Jacobian& pt) const;
    Jacobian JacAdd(const Jacobian& lhs, const Jacobian& rhs) const;
    Jacobian JacAddAffine(const Jacobian& lhs, const Point& rhs) const;

    CurveParams m_params;
    Point m_generator;
    std::size_t m_windows = 0;
    std::vector<Point> m_table; // m_windows rows of 15 odd multiples of 16^w * G
};

//! 32-byte big-endian scalar encoding.
Bytes EncodeScalar32(const mpz_class& v);
mpz_class DecodeScalar32(std::span<const std::uint8_t> bytes);

//! enc(R) || 32-byte BE s, 65 bytes total.
Bytes EncodeSignature(const Curve& curve, const Signature& sig);
Signature DecodeSignature(const Curve& curve, std::span<const std::uint8_t> bytes);

//! Plain point sum. Throws on an empty list or an identity sum.
Point AggregateKeys(const Curve& curve, std::span<const Point> keys);

// MAST commitment over script leaves: leaf = H_leaf(script bytes), node =
// H_node(lesser || greater), odd leaf promoted unchanged. Sorting the children
// makes proofs position-free.
Hash256 MerkleLeaf(std::span<const std::uint8_t> script_bytes);
Hash256 MerkleNode(const Hash256& lhs, const Hash256& rhs);
Hash256 MerkleRootOf(std::span<const Script> scripts);
std::vector<Hash256> MerkleProofFor(std::span<const Script> scripts, std::size_t index);
bool VerifyMerkleProof(const Hash256& root, const Script& leaf, std::span<const Hash256> proof);

//! t = H_tweak(enc(P) || merkle_root) mod n.
mpz_class TaprootTweak(const Curve& curve, const Point& internal_key, const Hash256& merkle_root);
//! output_key = P + t*G. Throws on off-curve P or an identity output key.
TaprootCommitment TaprootOutput(const Curve& curve, const Point& internal_key, const Hash256& merkle_root);
//! Secret matching the tweaked output key: (d + t) mod n.
mpz_class TweakSecret(const Curve& curve, const mpz_class& d, const Hash256& merkle_root);
//! True iff the proof links the script to the commitment root and the output
//! key recomputes from (internal_key, merkle_root).
bool VerifyScriptPath(const Curve& curve, const TaprootCommitment& commitment, const Script& script,
                      std::span<const Hash256> proof);

//! [PUSH(enc(output_key)), OP_CHECKSIG]: the script_pubkey shape every
//! taproot output in this system uses.
Script TaprootScriptPubkey(const Curve& curve, const Point& output_key);
//! Key-only address: taproot output with an all-zero merkle root. Spendable
//! on the key path with TweakSecret(d, zero root).
Script KeyOnlyScriptPubkey(const Curve& curve, const Point& internal_key);

//! Signature whose nonce is drawn from a stream seeded by the secret and the
//! message; identical inputs give identical signatures.
Signature SignDeterministic(const Curve& curve, const mpz_class& d, std::span<const std::uint8_t> msg);

} // namespace ordforge

#endif // ORDFORGE_SCHNORR_HPP
