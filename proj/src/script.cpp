// Copyright (c) 2026 The ordforge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <ordforge/script.hpp>

#include <algorithm>
#include <cstring>

namespace ordforge {

namespace {

bool IsKnownNonPush(std::uint8_t code)
{
    if (code >= OP_1 && code <= OP_16) return true;
    switch (code) {
    case OP_IF:
    case OP_ENDIF:
    case OP_DROP:
    case OP_NUMEQUAL:
    case OP_GREATERTHANOREQUAL:
    case OP_CHECKSIG:
    case OP_CHECKSIGVERIFY:
    case OP_CHECKSEQUENCEVERIFY:
    case OP_CHECKSIGADD:
        return true;
    default:
        return false;
    }
}

bool CastToBool(const Bytes& value)
{
    for (std::size_t i = 0; i < value.size(); ++i) {
        if (value[i] != 0) {
            // negative zero
            if (i == value.size() - 1 && value[i] == 0x80) return false;
            return true;
        }
    }
    return false;
}

bool IsPrintableAscii(std::string_view text)
{
    return std::all_of(text.begin(), text.end(), [](char c) { return c >= 0x20 && c <= 0x7e; });
}

} // namespace

Op MakePush(std::span<const std::uint8_t> data)
{
    Op op;
    op.data.assign(data.begin(), data.end());
    if (data.empty()) {
        op.code = OP_FALSE;
    } else if (data.size() <= 75) {
        op.code = static_cast<std::uint8_t>(data.size());
    } else if (data.size() <= 0xff) {
        op.code = OP_PUSHDATA1;
    } else if (data.size() <= 0xffff) {
        op.code = OP_PUSHDATA2;
    } else {
        throw std::invalid_argument("push payload exceeds 65535 bytes");
    }
    return op;
}

Script& Script::Add(std::uint8_t code)
{
    m_ops.push_back(Op{code, {}});
    return *this;
}

Script& Script::Push(std::span<const std::uint8_t> data)
{
    m_ops.push_back(MakePush(data));
    return *this;
}

Script& Script::Push(std::string_view text)
{
    return Push(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

Script& Script::PushNum(std::int64_t v)
{
    Bytes enc = ScriptNumEncode(v);
    return Push(enc);
}

Bytes Script::Encode() const
{
    ByteWriter w;
    for (const Op& op : m_ops) {
        if (!op.IsPush()) {
            if (!op.data.empty()) throw std::invalid_argument("non-push opcode carries a payload");
            w.U8(op.code);
            continue;
        }
        if (op.code == OP_FALSE) {
            if (!op.data.empty()) throw std::invalid_argument("OP_FALSE carries a payload");
            w.U8(op.code);
        } else if (op.code <= 75) {
            if (op.data.size() != op.code) throw std::invalid_argument("inline push length mismatch");
            w.U8(op.code);
            w.Raw(op.data);
        } else if (op.code == OP_PUSHDATA1) {
            if (op.data.size() > 0xff) throw std::invalid_argument("OP_PUSHDATA1 payload too long");
            w.U8(op.code);
            w.U8(static_cast<std::uint8_t>(op.data.size()));
            w.Raw(op.data);
        } else { // OP_PUSHDATA2
            if (op.data.size() > 0xffff) throw std::invalid_argument("OP_PUSHDATA2 payload too long");
            w.U8(op.code);
            w.U16LE(static_cast<std::uint16_t>(op.data.size()));
            w.Raw(op.data);
        }
    }
    return w.Take();
}

Script Script::Decode(std::span<const std::uint8_t> bytes)
{
    std::vector<Op> ops;
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        std::size_t op_start = pos;
        std::uint8_t code = bytes[pos++];
        Op op{code, {}};
        std::size_t len = 0;
        if (code == OP_FALSE) {
            ops.push_back(std::move(op));
            continue;
        } else if (code <= 75) {
            len = code;
        } else if (code == OP_PUSHDATA1) {
            if (pos >= bytes.size()) throw ScriptDecodeError("truncated push length", op_start);
            len = bytes[pos++];
        } else if (code == OP_PUSHDATA2) {
            if (pos + 2 > bytes.size()) throw ScriptDecodeError("truncated push length", op_start);
            len = static_cast<std::size_t>(bytes[pos]) | (static_cast<std::size_t>(bytes[pos + 1]) << 8);
            pos += 2;
        } else if (IsKnownNonPush(code)) {
            ops.push_back(std::move(op));
            continue;
        } else {
            throw ScriptDecodeError("unknown opcode", op_start);
        }
        if (pos + len > bytes.size()) throw ScriptDecodeError("truncated push", op_start);
        op.data.assign(bytes.begin() + pos, bytes.begin() + pos + len);
        pos += len;
        ops.push_back(std::move(op));
    }
    return Script(std::move(ops));
}

Bytes ScriptNumEncode(std::int64_t v)
{
    if (v == 0) return {};
    Bytes out;
    bool negative = v < 0;
    std::uint64_t abs = negative ? ~static_cast<std::uint64_t>(v) + 1 : static_cast<std::uint64_t>(v);
    while (abs > 0) {
        out.push_back(static_cast<std::uint8_t>(abs & 0xff));
        abs >>= 8;
    }
    if (out.back() & 0x80) {
        out.push_back(negative ? 0x80 : 0x00);
    } else if (negative) {
        out.back() |= 0x80;
    }
    return out;
}

std::optional<std::int64_t> ScriptNumDecode(std::span<const std::uint8_t> data)
{
    if (data.empty()) return 0;
    if (data.size() > 8) return std::nullopt;
    std::uint64_t abs = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        std::uint8_t byte = (i == data.size() - 1) ? (data[i] & 0x7f) : data[i];
        abs |= static_cast<std::uint64_t>(byte) << (8 * i);
    }
    bool negative = data.back() & 0x80;
    if (abs > static_cast<std::uint64_t>(INT64_MAX)) return std::nullopt;
    std::int64_t magnitude = static_cast<std::int64_t>(abs);
    return negative ? -magnitude : magnitude;
}

const char* ScriptErrorName(ScriptError err)
{
    switch (err) {
    case ScriptError::None: return "ok";
    case ScriptError::UnsupportedOpcode: return "unsupported opcode";
    case ScriptError::StackUnderflow: return "stack underflow";
    case ScriptError::UnbalancedConditional: return "unbalanced conditional";
    case ScriptError::PushSize: return "push size exceeded";
    case ScriptError::BadNumber: return "malformed script number";
    case ScriptError::VerifyFailed: return "verify opcode failed";
    case ScriptError::SequenceNotMet: return "relative delay not met";
    case ScriptError::EmptyFinalStack: return "empty final stack";
    case ScriptError::EvalFalse: return "script evaluated to false";
    }
    return "ok";
}

ExecResult ExecuteScript(const Script& script, std::vector<Bytes> witness_stack, const ExecContext& ctx)
{
    static const RejectingChecker reject_all;
    const SignatureChecker& checker = ctx.checker ? *ctx.checker : reject_all;

    auto fail = [](ScriptError err) { return ExecResult{false, err}; };

    std::vector<Bytes>& stack = witness_stack;
    for (const Bytes& item : stack) {
        if (item.size() > MAX_PUSH_SIZE) return fail(ScriptError::PushSize);
    }

    std::vector<bool> exec_branch;
    auto executing = [&] { return std::find(exec_branch.begin(), exec_branch.end(), false) == exec_branch.end(); };
    auto pop = [&](Bytes& out) {
        if (stack.empty()) return false;
        out = std::move(stack.back());
        stack.pop_back();
        return true;
    };
    auto check_signature = [&](const Bytes& sig, const Bytes& pubkey) {
        return !sig.empty() && checker.CheckSig(sig, pubkey);
    };

    for (const Op& op : script.Ops()) {
        bool exec = executing();

        if (op.code == OP_IF) {
            if (exec) {
                Bytes cond;
                if (!pop(cond)) return fail(ScriptError::StackUnderflow);
                exec_branch.push_back(CastToBool(cond));
            } else {
                exec_branch.push_back(false);
            }
            continue;
        }
        if (op.code == OP_ENDIF) {
            if (exec_branch.empty()) return fail(ScriptError::UnbalancedConditional);
            exec_branch.pop_back();
            continue;
        }
        if (!exec) continue;

        if (op.IsPush()) {
            if (op.data.size() > MAX_PUSH_SIZE) return fail(ScriptError::PushSize);
            stack.push_back(op.data);
            continue;
        }
        if (op.code >= OP_1 && op.code <= OP_16) {
            stack.push_back(ScriptNumEncode(op.code - (OP_1 - 1)));
            continue;
        }

        switch (op.code) {
        case OP_DROP: {
            Bytes ignored;
            if (!pop(ignored)) return fail(ScriptError::StackUnderflow);
            break;
        }
        case OP_NUMEQUAL:
        case OP_GREATERTHANOREQUAL: {
            Bytes rhs_raw, lhs_raw;
            if (!pop(rhs_raw) || !pop(lhs_raw)) return fail(ScriptError::StackUnderflow);
            auto rhs = ScriptNumDecode(rhs_raw);
            auto lhs = ScriptNumDecode(lhs_raw);
            if (!rhs || !lhs) return fail(ScriptError::BadNumber);
            bool result = op.code == OP_NUMEQUAL ? *lhs == *rhs : *lhs >= *rhs;
            stack.push_back(ScriptNumEncode(result ? 1 : 0));
            break;
        }
        case OP_CHECKSIG:
        case OP_CHECKSIGVERIFY: {
            Bytes pubkey, sig;
            if (!pop(pubkey) || !pop(sig)) return fail(ScriptError::StackUnderflow);
            bool ok = check_signature(sig, pubkey);
            if (op.code == OP_CHECKSIGVERIFY) {
                if (!ok) return fail(ScriptError::VerifyFailed);
            } else {
                stack.push_back(ScriptNumEncode(ok ? 1 : 0));
            }
            break;
        }
        case OP_CHECKSIGADD: {
            Bytes pubkey, counter_raw, sig;
            if (!pop(pubkey) || !pop(counter_raw) || !pop(sig)) return fail(ScriptError::StackUnderflow);
            auto counter = ScriptNumDecode(counter_raw);
            if (!counter) return fail(ScriptError::BadNumber);
            stack.push_back(ScriptNumEncode(*counter + (check_signature(sig, pubkey) ? 1 : 0)));
            break;
        }
        case OP_CHECKSEQUENCEVERIFY: {
            if (stack.empty()) return fail(ScriptError::StackUnderflow);
            auto delay = ScriptNumDecode(stack.back());
            if (!delay || *delay < 0) return fail(ScriptError::BadNumber);
            if (ctx.confirmations < static_cast<std::uint64_t>(*delay)) {
                return fail(ScriptError::SequenceNotMet);
            }
            break;
        }
        default:
            return fail(ScriptError::UnsupportedOpcode);
        }
    }

    if (!exec_branch.empty()) return fail(ScriptError::UnbalancedConditional);
    if (stack.empty()) return fail(ScriptError::EmptyFinalStack);
    if (!CastToBool(stack.back())) return fail(ScriptError::EvalFalse);
    return ExecResult{true, ScriptError::None};
}

namespace {

constexpr std::uint8_t ENVELOPE_CONTENT_TYPE_TAG = 0x01;

bool ValidMime(std::string_view mime)
{
    return !mime.empty() && mime.size() <= MAX_PUSH_SIZE && IsPrintableAscii(mime);
}

//! Strict match of the envelope layout starting at ops[at]; nullopt on any deviation.
std::optional<Envelope> MatchEnvelopeAt(const std::vector<Op>& ops, std::size_t at)
{
    std::size_t i = at;
    auto remaining = [&] { return ops.size() - i; };
    if (remaining() < 7) return std::nullopt;
    if (!(ops[i].code == OP_FALSE && ops[i].data.empty())) return std::nullopt;
    if (ops[++i].code != OP_IF) return std::nullopt;
    ++i;
    if (!ops[i].IsPush() || ops[i].data != ToBytes("ord")) return std::nullopt;
    ++i;
    if (!ops[i].IsPush() || ops[i].data != Bytes{ENVELOPE_CONTENT_TYPE_TAG}) return std::nullopt;
    ++i;
    if (!ops[i].IsPush()) return std::nullopt;
    std::string mime(ops[i].data.begin(), ops[i].data.end());
    if (!ValidMime(mime)) return std::nullopt;
    ++i;
    if (!(ops[i].IsPush() && ops[i].data.empty())) return std::nullopt; // body separator
    ++i;
    Bytes body;
    while (i < ops.size() && ops[i].IsPush()) {
        if (ops[i].data.empty() || ops[i].data.size() > MAX_PUSH_SIZE) return std::nullopt;
        body.insert(body.end(), ops[i].data.begin(), ops[i].data.end());
        ++i;
    }
    if (i >= ops.size() || ops[i].code != OP_ENDIF) return std::nullopt;
    return Envelope{std::move(mime), std::move(body)};
}

} // namespace

Script BuildEnvelope(const Envelope& envelope)
{
    return BuildEnvelope(envelope.mime, envelope.body);
}

Script BuildEnvelope(std::string_view mime, std::span<const std::uint8_t> body)
{
    if (mime.empty()) throw std::invalid_argument("envelope mime must be non-empty");
    if (mime.size() > MAX_PUSH_SIZE) throw std::invalid_argument("envelope mime exceeds 520 bytes");
    if (!IsPrintableAscii(mime)) throw std::invalid_argument("envelope mime must be printable ASCII");

    Script script;
    script.Add(OP_FALSE).Add(OP_IF);
    script.Push("ord");
    script.Push(Bytes{ENVELOPE_CONTENT_TYPE_TAG});
    script.Push(mime);
    script.Add(OP_FALSE);
    for (std::size_t at = 0; at < body.size(); at += MAX_PUSH_SIZE) {
        script.Push(body.subspan(at, std::min(MAX_PUSH_SIZE, body.size() - at)));
    }
    script.Add(OP_ENDIF);
    return script;
}

std::optional<Envelope> ParseEnvelope(const Script& script)
{
    const std::vector<Op>& ops = script.Ops();
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (auto env = MatchEnvelopeAt(ops, i)) return env;
    }
    return std::nullopt;
}

} // namespace ordforge
