// Copyright (c) 2026 The ordforge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <ordforge/hash.hpp>
#include <ordforge/schnorr.hpp>

#include <doctest.h>

#include <random>
#include <stdexcept>

using namespace ordforge;

namespace {

//! y^2 = x^3 + x + 17 over F_1031, group order 1061. Small enough to check
//! the arithmetic exhaustively; 1031 = 3 mod 4 like the default field.
const CurveParams& TinyParams()
{
    static const CurveParams params{mpz_class(1031), mpz_class(1), mpz_class(17),
                                    mpz_class(1061), mpz_class(2),  mpz_class(462)};
    return params;
}

mpz_class Challenge(const Curve& curve, const Point& r, const Point& q, std::span<const std::uint8_t> msg)
{
    ByteWriter w;
    w.Raw(curve.EncodePoint(r));
    w.Raw(curve.EncodePoint(q));
    w.Raw(msg);
    return curve.ScalarFromHash(TaggedHash(TAG_MSG, w.Out()));
}

} // namespace

TEST_CASE("tiny curve generator multiples match iterated addition")
{
    Curve curve(TinyParams());
    const mpz_class n = curve.Params().n;
    Point acc = Point::Infinity();
    for (mpz_class i = 0; i <= n; ++i) {
        REQUIRE(curve.MulG(i) == acc);
        REQUIRE(curve.Mul(curve.Generator(), i) == acc);
        if (!acc.infinity) REQUIRE(curve.OnCurve(acc));
        acc = curve.Add(acc, curve.Generator());
    }
    CHECK(curve.MulG(n).infinity);
}

TEST_CASE("tiny curve point encoding is a bijection")
{
    Curve curve(TinyParams());
    for (mpz_class i = 1; i < curve.Params().n; ++i) {
        Point p = curve.MulG(i);
        Bytes enc = curve.EncodePoint(p);
        REQUIRE(enc.size() == 33);
        REQUIRE(curve.DecodePoint(enc) == p);
    }
    CHECK_THROWS_AS(curve.EncodePoint(Point::Infinity()), std::invalid_argument);
}

TEST_CASE("tiny curve signatures verify for every secret")
{
    Curve curve(TinyParams());
    const mpz_class n = curve.Params().n;
    for (mpz_class d = 1; d < n; ++d) {
        mpz_class k = 1 + ((d * 7 + 3) % (n - 1));
        Bytes msg = EncodeScalar32(d);
        Signature sig = curve.SignWithNonce(d, msg, k);
        Point q = curve.MulG(d);
        REQUIRE(curve.Verify(q, msg, sig));

        // The acceptance equation, recomputed from parts: sG + eQ = R.
        mpz_class e = Challenge(curve, sig.R, q, msg);
        REQUIRE(curve.Add(curve.MulG(sig.s), curve.Mul(q, e)) == sig.R);

        // A corrupted message verifies only on a challenge collision mod n.
        Bytes bad = msg;
        bad[31] ^= 0x01;
        mpz_class e_bad = Challenge(curve, sig.R, q, bad);
        REQUIRE(curve.Verify(q, bad, sig) == (e_bad == e));
    }
}

TEST_CASE("random scalars on a small group stay in range and reach high values")
{
    Curve curve(TinyParams());
    EntropySource rng = DeterministicEntropy(ToBytes("scalar-seed"));
    bool high = false;
    for (int i = 0; i < 2000; ++i) {
        mpz_class v = curve.RandomScalar(rng);
        REQUIRE(v >= 1);
        REQUIRE(v < curve.Params().n);
        if (v > 530) high = true;
    }
    CHECK(high); // the top byte is masked, not zeroed
}

TEST_CASE("default curve encodes the generator to the canonical bytes")
{
    const Curve& curve = DefaultCurve();
    CHECK(HexEncode(curve.EncodePoint(curve.Generator())) ==
          "0279be667ef9dcbbac55a06295ce870b07029bfcdb2dce28d959f2815b16f81798");
}

TEST_CASE("fixed-nonce signature reproduces the frozen vector")
{
    const Curve& curve = DefaultCurve();
    mpz_class d("79c7cf9b9b84664b9a68c2b3c54931e46def6f9f724bb55f3de4145d10764433", 16);
    mpz_class k("1f2e3d4c5b6a798857caffee1234567890abcdef1122334455667788990aabb7", 16);
    Bytes msg = ToBytes("abc");

    Point q = curve.MulG(d);
    CHECK(HexEncode(curve.EncodePoint(q)) ==
          "027f37cc18ae36ea84f0cf01e524876b107832917380e0ee50f07549b171d8ac7c");

    Signature sig = curve.SignWithNonce(d, msg, k);
    CHECK(HexEncode(curve.EncodePoint(sig.R)) ==
          "038cfb22bfd303e8fff80df6927af2f9543b29fcae612ac9a8fcd3344753e6d65f");
    CHECK(HexEncode(EncodeScalar32(sig.s)) ==
          "7fc164c78d66de54939453b7439b5d2b1cfd3d7c6e9cb5f8d6b8b3578423fec9");
    CHECK(curve.Verify(q, msg, sig));
}

TEST_CASE("sign verify round trips with corruption checks")
{
    const Curve& curve = DefaultCurve();
    EntropySource rng = DeterministicEntropy(ToBytes("roundtrip-seed"));
    std::mt19937_64 mt(77);
    for (int i = 0; i < 1000; ++i) {
        KeyPair pair = curve.Keygen(rng);
        Bytes msg(1 + mt() % 100);
        for (auto& b : msg) b = static_cast<std::uint8_t>(mt());

        Signature sig = curve.Sign(pair.d, msg, rng);
        REQUIRE(curve.Verify(pair.Q, msg, sig));

        Bytes bad = msg;
        bad[mt() % bad.size()] ^= static_cast<std::uint8_t>(1 + mt() % 255);
        REQUIRE(!curve.Verify(pair.Q, bad, sig));

        Signature tampered = sig;
        tampered.s = (tampered.s + 1) % curve.Params().n;
        REQUIRE(!curve.Verify(pair.Q, msg, tampered));
    }
}

TEST_CASE("verification throws on keys outside the group but not on bad signatures")
{
    const Curve& curve = DefaultCurve();
    Bytes msg = ToBytes("m");
    KeyPair pair = curve.Keygen(DeterministicEntropy(ToBytes("k")));
    Signature sig = curve.Sign(pair.d, msg, DeterministicEntropy(ToBytes("n")));

    CHECK_THROWS_AS(curve.Verify(Point::Infinity(), msg, sig), std::invalid_argument);
    Point off = Point::Affine(pair.Q.x, (pair.Q.y + 1) % curve.Params().p);
    CHECK_THROWS_AS(curve.Verify(off, msg, sig), std::invalid_argument);

    Signature identity_nonce{Point::Infinity(), sig.s};
    CHECK(!curve.Verify(pair.Q, msg, identity_nonce));
}

TEST_CASE("point decoding rejects malformed bytes")
{
    const Curve& curve = DefaultCurve();
    KeyPair pair = curve.Keygen(DeterministicEntropy(ToBytes("pd")));
    Bytes enc = curve.EncodePoint(pair.Q);

    CHECK_THROWS_AS(curve.DecodePoint(Bytes{}), ParseError);
    CHECK_THROWS_AS(curve.DecodePoint(Bytes(32, 0x02)), ParseError);
    Bytes bad_prefix = enc;
    bad_prefix[0] = 0x04;
    CHECK_THROWS_AS(curve.DecodePoint(bad_prefix), ParseError);
    // x = 5 has no square root on secp256k1 (5^3 + 7 = 132 is a non-residue).
    Bytes no_point(33, 0x00);
    no_point[0] = 0x02;
    no_point[32] = 0x05;
    CHECK_THROWS_AS(curve.DecodePoint(no_point), ParseError);
}

TEST_CASE("signature serialization is 65 bytes and validates s")
{
    const Curve& curve = DefaultCurve();
    KeyPair pair = curve.Keygen(DeterministicEntropy(ToBytes("ss")));
    Signature sig = curve.Sign(pair.d, ToBytes("msg"), DeterministicEntropy(ToBytes("sn")));

    Bytes enc = EncodeSignature(curve, sig);
    REQUIRE(enc.size() == 65);
    Signature back = DecodeSignature(curve, enc);
    CHECK(back == sig);

    CHECK_THROWS_AS(DecodeSignature(curve, Bytes(64, 0)), ParseError);
    Bytes oversized_s = enc;
    for (int i = 33; i < 65; ++i) oversized_s[i] = 0xff; // s = 2^256 - 1 >= n
    CHECK_THROWS_AS(DecodeSignature(curve, oversized_s), ParseError);

    CHECK_THROWS_AS(DecodeScalar32(Bytes(31, 0)), ParseError);
    CHECK(DecodeScalar32(EncodeScalar32(mpz_class(777))) == 777);
}

TEST_CASE("deterministic signing is repeatable and message-sensitive")
{
    const Curve& curve = DefaultCurve();
    mpz_class d(123456789);
    Signature a = SignDeterministic(curve, d, ToBytes("alpha"));
    Signature b = SignDeterministic(curve, d, ToBytes("alpha"));
    Signature c = SignDeterministic(curve, d, ToBytes("beta"));
    CHECK(a == b);
    CHECK(a.R != c.R); // fresh nonce per message
    CHECK(curve.Verify(curve.MulG(d), ToBytes("alpha"), a));
    CHECK(curve.Verify(curve.MulG(d), ToBytes("beta"), c));
}

TEST_CASE("key aggregation is the point sum")
{
    const Curve& curve = DefaultCurve();
    EntropySource rng = DeterministicEntropy(ToBytes("agg"));
    KeyPair a = curve.Keygen(rng), b = curve.Keygen(rng), c = curve.Keygen(rng);
    std::vector<Point> keys{a.Q, b.Q, c.Q};
    Point sum = AggregateKeys(curve, keys);
    CHECK(sum == curve.MulG((a.d + b.d + c.d) % curve.Params().n));

    CHECK_THROWS_AS(AggregateKeys(curve, std::span<const Point>{}), std::invalid_argument);
    std::vector<Point> cancel{a.Q, curve.Negate(a.Q)};
    CHECK_THROWS_AS(AggregateKeys(curve, cancel), std::invalid_argument);
}

TEST_CASE("merkle roots match a hand-rolled pairing oracle")
{
    std::mt19937_64 rng(5);
    for (std::size_t leaves = 1; leaves <= 16; ++leaves) {
        std::vector<Script> scripts;
        for (std::size_t i = 0; i < leaves; ++i) {
            Script s;
            s.PushNum(static_cast<std::int64_t>(rng() % 1000)).Add(OP_DROP).Add(OP_1);
            scripts.push_back(s);
        }
        // Oracle: hash leaves, pair adjacent nodes, promote the odd one out.
        std::vector<Hash256> level;
        for (const Script& s : scripts) level.push_back(MerkleLeaf(s.Encode()));
        while (level.size() > 1) {
            std::vector<Hash256> next;
            for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(MerkleNode(level[i], level[i + 1]));
            if (level.size() % 2 == 1) next.push_back(level.back());
            level = std::move(next);
        }
        REQUIRE(MerkleRootOf(scripts) == level[0]);

        // Every leaf proves membership; a foreign script does not.
        for (std::size_t i = 0; i < leaves; ++i) {
            std::vector<Hash256> proof = MerkleProofFor(scripts, i);
            REQUIRE(VerifyMerkleProof(level[0], scripts[i], proof));
            Script foreign;
            foreign.PushNum(999999).Add(OP_DROP).Add(OP_1);
            REQUIRE(!VerifyMerkleProof(level[0], foreign, proof));
        }
    }
}

TEST_CASE("merkle nodes are order-free and a lone leaf is its own root")
{
    Hash256 a = Sha256Hash(ToBytes("a"));
    Hash256 b = Sha256Hash(ToBytes("b"));
    CHECK(MerkleNode(a, b) == MerkleNode(b, a));
    CHECK(MerkleNode(a, b) != MerkleNode(a, a));

    Script only;
    only.Add(OP_1);
    std::vector<Script> one{only};
    CHECK(MerkleRootOf(one) == MerkleLeaf(only.Encode()));
    CHECK(MerkleProofFor(one, 0).empty());
}

TEST_CASE("taproot output keys commit to the internal key and the tree")
{
    const Curve& curve = DefaultCurve();
    KeyPair internal = curve.Keygen(DeterministicEntropy(ToBytes("tap")));

    Script leaf_a = BuildEnvelope("text/plain", ToBytes("payload"));
    leaf_a.Add(OP_1);
    Script leaf_b;
    leaf_b.PushNum(52560).Add(OP_CHECKSEQUENCEVERIFY).Add(OP_DROP).Add(OP_1);
    std::vector<Script> leaves{leaf_a, leaf_b};
    Hash256 root = MerkleRootOf(leaves);

    TaprootCommitment commitment = TaprootOutput(curve, internal.Q, root);
    CHECK(commitment.output_key == curve.Add(internal.Q, curve.MulG(TaprootTweak(curve, internal.Q, root))));

    // The tweaked secret signs for the output key.
    mpz_class tweaked = TweakSecret(curve, internal.d, root);
    CHECK(curve.MulG(tweaked) == commitment.output_key);

    // Script paths verify with their proofs and fail with the wrong script.
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        std::vector<Hash256> proof = MerkleProofFor(leaves, i);
        CHECK(VerifyScriptPath(curve, commitment, leaves[i], proof));
    }
    Script wrong;
    wrong.Add(OP_1);
    CHECK(!VerifyScriptPath(curve, commitment, wrong, MerkleProofFor(leaves, 0)));

    // Different trees produce different output keys.
    TaprootCommitment keyonly = TaprootOutput(curve, internal.Q, Hash256{});
    CHECK(keyonly.output_key != commitment.output_key);
    CHECK_THROWS_AS(TaprootOutput(curve, Point::Infinity(), root), std::invalid_argument);
}

TEST_CASE("taproot script pubkeys have the fixed two-op shape")
{
    const Curve& curve = DefaultCurve();
    KeyPair pair = curve.Keygen(DeterministicEntropy(ToBytes("spk")));
    Script spk = KeyOnlyScriptPubkey(curve, pair.Q);
    REQUIRE(spk.Ops().size() == 2);
    CHECK(spk.Ops()[0].data.size() == 33);
    CHECK(spk.Ops()[1].code == OP_CHECKSIG);
    CHECK(spk == TaprootScriptPubkey(curve, TaprootOutput(curve, pair.Q, Hash256{}).output_key));

    // The committed key-path secret is the zero-root tweak.
    mpz_class tweaked = TweakSecret(curve, pair.d, Hash256{});
    CHECK(curve.EncodePoint(curve.MulG(tweaked)) == Bytes(spk.Ops()[0].data));
}

TEST_CASE("deterministic entropy replays and system entropy draws vary")
{
    EntropySource a = DeterministicEntropy(ToBytes("seed"));
    EntropySource b = DeterministicEntropy(ToBytes("seed"));
    Bytes buf_a(64), buf_b(64);
    a(buf_a);
    b(buf_b);
    CHECK(buf_a == buf_b);

    EntropySource c = DeterministicEntropy(ToBytes("other"));
    Bytes buf_c(64);
    c(buf_c);
    CHECK(buf_a != buf_c);

    EntropySource sys = SystemEntropy();
    Bytes s1(32), s2(32);
    sys(s1);
    sys(s2);
    CHECK(s1 != s2);
}
