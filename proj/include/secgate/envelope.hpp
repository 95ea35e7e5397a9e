#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

#include "secgate/crypto.hpp"
#include "secgate/types.hpp"

namespace secgate {

// Wire format, shared by the HTTP request body and the on-disk test fixtures.
//
// A document is a magic line followed by a fixed sequence of fields:
//
//   SREQ1\n
//   client_id:5:alice\n
//   ...
//
// Each field is `name:length:raw-bytes\n` with the length in decimal and the
// bytes copied verbatim (they may contain newlines), or `name:-\n` for an
// absent optional field. Exactly one canonical serialization exists per
// value: fields appear in a fixed order, lengths carry no leading zeros,
// integers are plain base-10, hex is lowercase. The decoder rejects anything
// else, so equal bytes mean equal requests and vice versa.

struct MalformedEnvelope : std::runtime_error {
    std::size_t position;

    MalformedEnvelope(std::size_t pos, const std::string& reason)
        : std::runtime_error("malformed envelope at byte " + std::to_string(pos) + ": " + reason),
          position(pos) {}
};

namespace detail {

inline constexpr std::string_view kRequestMagic = "SREQ1\n";
inline constexpr std::string_view kResponseMagic = "SRSP1\n";
inline constexpr std::string_view kCertMagic = "CERT1\n";
inline constexpr std::size_t kMaxFieldBytes = 4u << 20;

inline void append_field(std::string& out, std::string_view name, std::string_view value) {
    out += name;
    out += ':';
    out += std::to_string(value.size());
    out += ':';
    out += value;
    out += '\n';
}

inline void append_absent(std::string& out, std::string_view name) {
    out += name;
    out += ":-\n";
}

/// Sequential reader for the field grammar. Every violation throws
/// MalformedEnvelope with the offset it was detected at.
class FieldReader {
public:
    explicit FieldReader(std::string_view data) : data_(data) {}

    void expect_magic(std::string_view magic) {
        if (data_.substr(0, magic.size()) != magic) {
            throw MalformedEnvelope(0, "bad magic");
        }
        pos_ = magic.size();
    }

    /// Reads the next field, which must be named `name`. Returns false for
    /// an absent optional field (`name:-`).
    bool next(std::string_view name, std::string& value) {
        std::size_t field_start = pos_;
        if (pos_ >= data_.size()) {
            throw MalformedEnvelope(pos_, "truncated: expected field '" + std::string(name) + "'");
        }
        std::size_t colon = data_.find(':', pos_);
        if (colon == std::string_view::npos) {
            throw MalformedEnvelope(pos_, "truncated field header");
        }
        std::string_view got = data_.substr(pos_, colon - pos_);
        if (got != name) {
            throw MalformedEnvelope(field_start, "expected field '" + std::string(name) +
                                                     "', found '" + std::string(got) + "'");
        }
        pos_ = colon + 1;
        if (pos_ < data_.size() && data_[pos_] == '-') {
            ++pos_;
            require_newline();
            return false;
        }
        std::size_t len = read_length();
        if (data_.size() - pos_ < len) {
            throw MalformedEnvelope(pos_, "truncated field body");
        }
        value.assign(data_.substr(pos_, len));
        pos_ += len;
        require_newline();
        return true;
    }

    std::string require(std::string_view name) {
        std::string value;
        if (!next(name, value)) {
            throw MalformedEnvelope(pos_, "field '" + std::string(name) + "' may not be absent");
        }
        return value;
    }

    void expect_end() const {
        if (pos_ != data_.size()) {
            throw MalformedEnvelope(pos_, "trailing bytes after last field");
        }
    }

    std::size_t position() const { return pos_; }

private:
    std::size_t read_length() {
        std::size_t start = pos_;
        while (pos_ < data_.size() && data_[pos_] >= '0' && data_[pos_] <= '9') ++pos_;
        std::size_t ndigits = pos_ - start;
        if (ndigits == 0) {
            throw MalformedEnvelope(start, "missing field length");
        }
        if (ndigits > 1 && data_[start] == '0') {
            throw MalformedEnvelope(start, "non-canonical length (leading zero)");
        }
        if (ndigits > 7) {
            throw MalformedEnvelope(start, "field length too large");
        }
        std::size_t len = 0;
        for (std::size_t k = start; k < pos_; ++k) len = len * 10 + (data_[k] - '0');
        if (len > kMaxFieldBytes) {
            throw MalformedEnvelope(start, "field length too large");
        }
        if (pos_ >= data_.size() || data_[pos_] != ':') {
            throw MalformedEnvelope(pos_, "expected ':' after field length");
        }
        ++pos_;
        return len;
    }

    void require_newline() {
        if (pos_ >= data_.size() || data_[pos_] != '\n') {
            throw MalformedEnvelope(pos_, "expected newline after field");
        }
        ++pos_;
    }

    std::string_view data_;
    std::size_t pos_ = 0;
};

/// Canonical base-10 integer: no sign, no leading zeros, fits in int64.
inline std::int64_t parse_canonical_int(std::string_view s, std::size_t at,
                                        std::string_view what) {
    if (s.empty() || s.size() > 19) {
        throw MalformedEnvelope(at, std::string(what) + ": bad integer");
    }
    if (s.size() > 1 && s[0] == '0') {
        throw MalformedEnvelope(at, std::string(what) + ": leading zero");
    }
    if (s.size() == 19 && s > std::string_view("9223372036854775807")) {
        throw MalformedEnvelope(at, std::string(what) + ": integer overflow");
    }
    std::int64_t value = 0;
    for (char c : s) {
        if (c < '0' || c > '9') {
            throw MalformedEnvelope(at, std::string(what) + ": bad integer");
        }
        value = value * 10 + (c - '0');
    }
    return value;
}

inline void check_hex_field(std::string_view s, std::size_t want_chars, std::size_t at,
                            std::string_view what) {
    if (s.size() != want_chars || !crypto::is_lower_hex(s)) {
        throw MalformedEnvelope(at, std::string(what) + ": expected " +
                                        std::to_string(want_chars) + " lowercase hex characters");
    }
}

}  // namespace detail

/// The byte string certificate tags are computed over. Fields are
/// length-prefixed so no choice of subject can collide with another field
/// tuple. cert_id is passed as its 32-character hex form.
inline std::string canonical_auth_string(std::string_view subject, std::int64_t issued_at,
                                         std::int64_t expires_at, std::string_view cert_id_hex) {
    auto piece = [](std::string_view f) {
        std::string out = std::to_string(f.size());
        out += ':';
        out += f;
        return out;
    };
    std::string out = piece(subject);
    out += piece(std::to_string(issued_at));
    out += piece(std::to_string(expires_at));
    out += piece(cert_id_hex);
    return out;
}

/// Checks the ServiceRequest invariants; returns an error description or
/// empty if the request is encodable.
inline std::string validate_request(const ServiceRequest& r) {
    if (!is_valid_ipv4(r.source_ip)) return "source_ip is not a dotted quad";
    if (r.service.empty() || r.service.size() > 128) return "service must be 1..128 bytes";
    if (r.action.empty() || r.action.size() > 128) return "action must be 1..128 bytes";
    if (r.nonce.size() != 32 || !crypto::is_lower_hex(r.nonce)) {
        return "nonce must be 32 lowercase hex characters";
    }
    if (r.timestamp < 0) return "timestamp must be non-negative";
    if (r.certificate) {
        const auto& c = *r.certificate;
        if (c.issued_at < 0 || c.expires_at <= c.issued_at) return "certificate validity window";
        if (c.cert_id.size() != 32 || !crypto::is_lower_hex(c.cert_id)) return "certificate id";
        if (c.tag.size() != 64 || !crypto::is_lower_hex(c.tag)) return "certificate tag";
    }
    return "";
}

inline std::string encode_certificate(const AuthCertificate& c) {
    std::string out(detail::kCertMagic);
    detail::append_field(out, "subject", c.subject);
    detail::append_field(out, "issued_at", std::to_string(c.issued_at));
    detail::append_field(out, "expires_at", std::to_string(c.expires_at));
    detail::append_field(out, "cert_id", c.cert_id);
    detail::append_field(out, "tag", c.tag);
    return out;
}

inline AuthCertificate decode_certificate(std::string_view bytes) {
    detail::FieldReader rd(bytes);
    rd.expect_magic(detail::kCertMagic);
    AuthCertificate c;
    c.subject = rd.require("subject");
    std::size_t at = rd.position();
    c.issued_at = detail::parse_canonical_int(rd.require("issued_at"), at, "issued_at");
    at = rd.position();
    c.expires_at = detail::parse_canonical_int(rd.require("expires_at"), at, "expires_at");
    if (c.expires_at <= c.issued_at) {
        throw MalformedEnvelope(at, "certificate expires_at must be after issued_at");
    }
    at = rd.position();
    std::string cert_id = rd.require("cert_id");
    detail::check_hex_field(cert_id, 32, at, "cert_id");
    c.cert_id = std::move(cert_id);
    at = rd.position();
    std::string tag = rd.require("tag");
    detail::check_hex_field(tag, 64, at, "tag");
    c.tag = std::move(tag);
    rd.expect_end();
    return c;
}

/// Canonical encoding. Requests that violate the type invariants are a
/// construction bug and are rejected with std::invalid_argument.
inline std::string encode(const ServiceRequest& r) {
    if (std::string err = validate_request(r); !err.empty()) {
        throw std::invalid_argument("unencodable request: " + err);
    }
    std::string out(detail::kRequestMagic);
    detail::append_field(out, "client_id", r.client_id);
    detail::append_field(out, "source_ip", r.source_ip);
    detail::append_field(out, "service", r.service);
    detail::append_field(out, "action", r.action);
    detail::append_field(out, "payload", r.payload);
    if (r.certificate) {
        detail::append_field(out, "certificate", encode_certificate(*r.certificate));
    } else {
        detail::append_absent(out, "certificate");
    }
    detail::append_field(out, "nonce", r.nonce);
    detail::append_field(out, "timestamp", std::to_string(r.timestamp));
    return out;
}

inline ServiceRequest decode(std::string_view bytes) {
    detail::FieldReader rd(bytes);
    rd.expect_magic(detail::kRequestMagic);
    ServiceRequest r;
    r.client_id = rd.require("client_id");
    std::size_t at = rd.position();
    r.source_ip = rd.require("source_ip");
    if (!is_valid_ipv4(r.source_ip)) {
        throw MalformedEnvelope(at, "source_ip is not a dotted quad");
    }
    at = rd.position();
    r.service = rd.require("service");
    if (r.service.empty() || r.service.size() > 128) {
        throw MalformedEnvelope(at, "service must be 1..128 bytes");
    }
    at = rd.position();
    r.action = rd.require("action");
    if (r.action.empty() || r.action.size() > 128) {
        throw MalformedEnvelope(at, "action must be 1..128 bytes");
    }
    r.payload = rd.require("payload");
    at = rd.position();
    std::string cert_bytes;
    if (rd.next("certificate", cert_bytes)) {
        try {
            r.certificate = decode_certificate(cert_bytes);
        } catch (const MalformedEnvelope& inner) {
            throw MalformedEnvelope(at, "certificate: " + std::string(inner.what()));
        }
    }
    at = rd.position();
    std::string nonce = rd.require("nonce");
    detail::check_hex_field(nonce, 32, at, "nonce");
    r.nonce = std::move(nonce);
    at = rd.position();
    r.timestamp = detail::parse_canonical_int(rd.require("timestamp"), at, "timestamp");
    rd.expect_end();
    return r;
}

inline std::string encode_response(const ServiceResponse& r) {
    std::string out(detail::kResponseMagic);
    detail::append_field(out, "status", to_string(r.status));
    detail::append_field(out, "stage", r.stage);
    detail::append_field(out, "reason", r.reason);
    detail::append_field(out, "body", r.body);
    return out;
}

inline ServiceResponse decode_response(std::string_view bytes) {
    detail::FieldReader rd(bytes);
    rd.expect_magic(detail::kResponseMagic);
    ServiceResponse r;
    std::size_t at = rd.position();
    std::string status = rd.require("status");
    auto st = parse_status(status);
    if (!st) throw MalformedEnvelope(at, "unknown status '" + status + "'");
    r.status = *st;
    r.stage = rd.require("stage");
    at = rd.position();
    r.reason = rd.require("reason");
    if (r.status == Status::Denied && (r.stage.empty() || r.reason.empty())) {
        throw MalformedEnvelope(at, "denied response requires stage and reason");
    }
    r.body = rd.require("body");
    rd.expect_end();
    return r;
}

}  // namespace secgate
