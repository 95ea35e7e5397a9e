#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace secgate {

enum class ThreatClass {
    Forgery,
    Replay,
    Expired,
    XSS,
    RFI,
    LFI,
    Injection,
    UnknownService,
    RateFlood,
};

inline std::string_view to_string(ThreatClass t) {
    switch (t) {
        case ThreatClass::Forgery: return "Forgery";
        case ThreatClass::Replay: return "Replay";
        case ThreatClass::Expired: return "Expired";
        case ThreatClass::XSS: return "XSS";
        case ThreatClass::RFI: return "RFI";
        case ThreatClass::LFI: return "LFI";
        case ThreatClass::Injection: return "Injection";
        case ThreatClass::UnknownService: return "UnknownService";
        case ThreatClass::RateFlood: return "RateFlood";
    }
    return "?";
}

inline std::optional<ThreatClass> parse_threat_class(std::string_view s) {
    if (s == "Forgery") return ThreatClass::Forgery;
    if (s == "Replay") return ThreatClass::Replay;
    if (s == "Expired") return ThreatClass::Expired;
    if (s == "XSS") return ThreatClass::XSS;
    if (s == "RFI") return ThreatClass::RFI;
    if (s == "LFI") return ThreatClass::LFI;
    if (s == "Injection") return ThreatClass::Injection;
    if (s == "UnknownService") return ThreatClass::UnknownService;
    if (s == "RateFlood") return ThreatClass::RateFlood;
    return std::nullopt;
}

enum class Decision { Allow, Deny };

/// Outcome of one security check. A Deny always names the threat class it
/// was denied for.
struct Verdict {
    Decision decision = Decision::Allow;
    std::optional<ThreatClass> threat;
    std::string detail;

    static Verdict allow() { return Verdict{}; }

    static Verdict deny(ThreatClass t, std::string detail) {
        return Verdict{Decision::Deny, t, std::move(detail)};
    }

    bool allowed() const { return decision == Decision::Allow; }
    bool denied() const { return decision == Decision::Deny; }
};

/// Credential issued by the identity service. `cert_id` is 32 lowercase hex
/// characters (16 bytes), `tag` is 64 (HMAC-SHA256 over the canonical auth
/// string). Validity window is half-open: [issued_at, expires_at).
struct AuthCertificate {
    std::string subject;
    std::int64_t issued_at = 0;
    std::int64_t expires_at = 0;
    std::string cert_id;
    std::string tag;

    bool operator==(const AuthCertificate&) const = default;
};

struct ServiceRequest {
    std::string client_id;
    std::string source_ip;
    std::string service;
    std::string action;
    std::string payload;
    std::optional<AuthCertificate> certificate;
    std::string nonce;  // 32 lowercase hex characters
    std::int64_t timestamp = 0;

    bool operator==(const ServiceRequest&) const = default;
};

enum class Status { Ok, Denied, Error };

inline std::string_view to_string(Status s) {
    switch (s) {
        case Status::Ok: return "Ok";
        case Status::Denied: return "Denied";
        case Status::Error: return "Error";
    }
    return "?";
}

inline std::optional<Status> parse_status(std::string_view s) {
    if (s == "Ok") return Status::Ok;
    if (s == "Denied") return Status::Denied;
    if (s == "Error") return Status::Error;
    return std::nullopt;
}

struct ServiceResponse {
    Status status = Status::Ok;
    std::string stage;
    std::string reason;
    std::string body;

    bool operator==(const ServiceResponse&) const = default;
};

inline ServiceResponse denied_response(std::string stage, const Verdict& v) {
    std::string reason(to_string(*v.threat));
    if (!v.detail.empty()) {
        reason += ": ";
        reason += v.detail;
    }
    return ServiceResponse{Status::Denied, std::move(stage), std::move(reason), ""};
}

inline ServiceResponse error_response(std::string stage, std::string reason) {
    return ServiceResponse{Status::Error, std::move(stage), std::move(reason), ""};
}

/// Strict dotted-quad check: four decimal octets in [0,255], no leading
/// zeros, nothing else.
inline bool is_valid_ipv4(std::string_view s) {
    int octets = 0;
    std::size_t i = 0;
    while (i <= s.size()) {
        std::size_t start = i;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
        std::size_t len = i - start;
        if (len == 0 || len > 3) return false;
        if (len > 1 && s[start] == '0') return false;
        int value = 0;
        for (std::size_t k = start; k < i; ++k) value = value * 10 + (s[k] - '0');
        if (value > 255) return false;
        ++octets;
        if (i == s.size()) break;
        if (s[i] != '.') return false;
        ++i;
    }
    return octets == 4;
}

}  // namespace secgate
