// Copyright (c) 2026 The ordforge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORDFORGE_SCRIPT_HPP
#define ORDFORGE_SCRIPT_HPP

#include <ordforge/util.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace ordforge {

// Supported opcode byte tags (standard assignments).
enum Opcode : std::uint8_t {
    OP_FALSE = 0x00, // also the empty push
    OP_PUSHDATA1 = 0x4c,
    OP_PUSHDATA2 = 0x4d,
    OP_1 = 0x51,
    OP_16 = 0x60,
    OP_IF = 0x63,
    OP_ENDIF = 0x68,
    OP_DROP = 0x75,
    OP_NUMEQUAL = 0x9c,
    OP_GREATERTHANOREQUAL = 0xa2,
    OP_CHECKSIG = 0xac,
    OP_CHECKSIGVERIFY = 0xad,
    OP_CHECKSEQUENCEVERIFY = 0xb2,
    OP_CHECKSIGADD = 0xba,
};

//! Executed stack elements and push payloads may not exceed this many bytes.
inline constexpr std::size_t MAX_PUSH_SIZE = 520;

//! One decoded script element. For push opcodes (0x00-0x4d) `data` carries the
//! payload; the recorded tag is preserved so decode(encode(ops)) == ops even
//! for non-minimal pushes.
struct Op {
    std::uint8_t code = OP_FALSE;
    Bytes data;

    bool IsPush() const { return code <= OP_PUSHDATA2; }
    bool operator==(const Op&) const = default;
};

class ScriptDecodeError : public ParseError {
public:
    ScriptDecodeError(const std::string& what, std::size_t offset)
        : ParseError(what + " at byte " + std::to_string(offset)), m_offset(offset) {}
    std::size_t Offset() const { return m_offset; }

private:
    std::size_t m_offset;
};

//! An ordered opcode sequence with a canonical byte serialization.
class Script {
public:
    Script() = default;
    explicit Script(std::vector<Op> ops) : m_ops(std::move(ops)) {}

    Script& Add(std::uint8_t code);
    //! Appends a minimally-encoded push of `data`.
    Script& Push(std::span<const std::uint8_t> data);
    Script& Push(std::string_view text);
    //! Appends a minimally-encoded push of the script-number encoding of `v`.
    Script& PushNum(std::int64_t v);

    const std::vector<Op>& Ops() const { return m_ops; }
    bool Empty() const { return m_ops.empty(); }

    Bytes Encode() const;
    static Script Decode(std::span<const std::uint8_t> bytes);

    std::string Hex() const { return HexEncode(Encode()); }
    static Script FromHex(std::string_view hex) { return Decode(HexDecode(hex)); }

    bool operator==(const Script&) const = default;

private:
    std::vector<Op> m_ops;
};

//! Minimal push encoding for a payload: OP_FALSE for empty, inline length for
//! up to 75 bytes, then OP_PUSHDATA1/2.
Op MakePush(std::span<const std::uint8_t> data);

// Script-number encoding: little-endian magnitude with a sign bit in the top
// byte, empty for zero. Decoding is capped at 8 bytes.
Bytes ScriptNumEncode(std::int64_t v);
std::optional<std::int64_t> ScriptNumDecode(std::span<const std::uint8_t> data);

enum class ScriptError {
    None,
    UnsupportedOpcode,
    StackUnderflow,
    UnbalancedConditional,
    PushSize,
    BadNumber,
    VerifyFailed,
    SequenceNotMet,
    EmptyFinalStack,
    EvalFalse,
};

const char* ScriptErrorName(ScriptError err);

struct ExecResult {
    bool accepted = false;
    ScriptError error = ScriptError::None;

    std::string Reason() const { return ScriptErrorName(error); }
};

//! Verifies a signature against a public key. The message binding (sighash or
//! fixture) is the implementation's concern. Implementations must be safe for
//! concurrent use or confined to one thread.
class SignatureChecker {
public:
    virtual ~SignatureChecker() = default;
    virtual bool CheckSig(std::span<const std::uint8_t> sig, std::span<const std::uint8_t> pubkey) const = 0;
};

//! Rejects every signature; stands in when no checker applies.
class RejectingChecker : public SignatureChecker {
public:
    bool CheckSig(std::span<const std::uint8_t>, std::span<const std::uint8_t>) const override { return false; }
};

struct ExecContext {
    const SignatureChecker* checker = nullptr; // null rejects all signatures
    std::uint64_t confirmations = 0;           // of the input being spent
};

//! Evaluates `script` with the witness stack as the initial stack. Accepts iff
//! execution completes with a truthy top element and no verify-style opcode
//! failed. OP_CHECKSIGADD pops pubkey, counter and signature, then pushes
//! counter plus one for a valid signature (an empty signature adds zero).
//! OP_CHECKSEQUENCEVERIFY fails unless ctx.confirmations covers the relative
//! delay on top of the stack; it does not pop its operand.
ExecResult ExecuteScript(const Script& script, std::vector<Bytes> witness_stack, const ExecContext& ctx);

//! Inscription payload: a MIME type plus raw content bytes.
struct Envelope {
    std::string mime;
    Bytes body;

    bool operator==(const Envelope&) const = default;
};

//! Lays out OP_FALSE OP_IF "ord" 0x01 <mime> 0x00 <chunk>* OP_ENDIF with the
//! body split into chunks of at most MAX_PUSH_SIZE bytes. The mime must be
//! non-empty printable ASCII of at most MAX_PUSH_SIZE bytes.
Script BuildEnvelope(const Envelope& envelope);
Script BuildEnvelope(std::string_view mime, std::span<const std::uint8_t> body);

//! Returns the envelope when the script contains one with exactly the layout
//! above; malformed or absent envelopes yield nullopt, never an error.
std::optional<Envelope> ParseEnvelope(const Script& script);

} // namespace ordforge

#endif // ORDFORGE_SCRIPT_HPP
