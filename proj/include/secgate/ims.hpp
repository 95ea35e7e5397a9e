#pragma once

#include <cstdint>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "secgate/config.hpp"
#include "secgate/crypto.hpp"
#include "secgate/envelope.hpp"
#include "secgate/types.hpp"

namespace secgate {

/// Raised for any credential failure. One type, one message: a caller can
/// not tell an unknown user from a wrong password.
struct BadCredentials : std::runtime_error {
    BadCredentials() : std::runtime_error("authentication failed") {}
};

/// client_id -> salted digest, loaded from a text file with one
/// `client_id:hex(salt):hex(digest)` line per user. Digest is
/// SHA-256(salt || password); no plaintext is ever stored.
class CredentialTable {
public:
    struct Entry {
        std::vector<unsigned char> salt;
        std::array<unsigned char, 32> digest;
    };

    static std::array<unsigned char, 32> digest_for(const std::vector<unsigned char>& salt,
                                                    std::string_view password) {
        std::string buf(reinterpret_cast<const char*>(salt.data()), salt.size());
        buf += password;
        return crypto::sha256(buf);
    }

    static CredentialTable parse(std::string_view text) {
        CredentialTable table;
        std::size_t lineno = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t nl = text.find('\n', pos);
            std::string_view line =
                nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
            ++lineno;
            std::string t = trim(line);
            if (!t.empty() && t[0] != '#') {
                std::size_t c1 = t.find(':');
                std::size_t c2 = c1 == std::string::npos ? std::string::npos : t.find(':', c1 + 1);
                if (c1 == std::string::npos || c2 == std::string::npos || c1 == 0) {
                    throw std::runtime_error("credential file line " + std::to_string(lineno) +
                                             ": expected client_id:salt:digest");
                }
                std::string id = t.substr(0, c1);
                auto salt = crypto::from_hex(std::string_view(t).substr(c1 + 1, c2 - c1 - 1));
                auto digest = crypto::from_hex(std::string_view(t).substr(c2 + 1));
                if (!salt || salt->empty() || !digest || digest->size() != 32) {
                    throw std::runtime_error("credential file line " + std::to_string(lineno) +
                                             ": bad salt or digest");
                }
                Entry e;
                e.salt = std::move(*salt);
                std::copy(digest->begin(), digest->end(), e.digest.begin());
                table.entries_[std::move(id)] = std::move(e);
            }
            if (nl == std::string_view::npos) break;
            pos = nl + 1;
        }
        return table;
    }

    static CredentialTable load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open credential file: " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }

    void add(const std::string& client_id, std::string_view password) {
        if (client_id.empty() || client_id.find(':') != std::string::npos) {
            throw std::invalid_argument("client_id must be non-empty and contain no ':'");
        }
        Entry e;
        e.salt.resize(16);
        crypto::random_bytes(e.salt.data(), e.salt.size());
        e.digest = digest_for(e.salt, password);
        entries_[client_id] = std::move(e);
    }

    /// Digest check. Unknown users burn a comparison against a dummy entry
    /// so both failure causes run the same code path.
    bool check(const std::string& client_id, std::string_view password) const {
        static const Entry dummy{std::vector<unsigned char>(16, 0xa5), {}};
        auto it = entries_.find(client_id);
        const Entry& entry = it == entries_.end() ? dummy : it->second;
        auto digest = digest_for(entry.salt, password);
        bool match = crypto::ct_equal(digest, entry.digest);
        return it != entries_.end() && match;
    }

    std::string serialize() const {
        std::string out;
        for (const auto& [id, e] : entries_) {
            out += id;
            out += ':';
            out += crypto::to_hex(e.salt);
            out += ':';
            out += crypto::to_hex(e.digest);
            out += '\n';
        }
        return out;
    }

    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

private:
    std::unordered_map<std::string, Entry> entries_;
};

/// Once-only filter on (cert_id, nonce) pairs. Pairs older than the horizon
/// are evicted and may be accepted again; anything younger is a replay.
class ReplayCache {
public:
    explicit ReplayCache(std::int64_t horizon_s) : horizon_us_(horizon_s * 1'000'000) {}

    Verdict check_and_record(std::string_view cert_id, std::string_view nonce,
                             std::int64_t now_us) {
        std::string key;
        key.reserve(cert_id.size() + nonce.size() + 1);
        key.append(cert_id);
        key.push_back('/');
        key.append(nonce);

        std::lock_guard lock(mu_);
        maybe_evict(now_us);
        auto [it, inserted] = seen_.try_emplace(std::move(key), now_us);
        if (!inserted) {
            if (now_us - it->second <= horizon_us_) {
                return Verdict::deny(ThreatClass::Replay, "certificate/nonce pair already seen");
            }
            it->second = now_us;  // past the horizon: treat as first sight
        }
        return Verdict::allow();
    }

    std::size_t size() const {
        std::lock_guard lock(mu_);
        return seen_.size();
    }

private:
    void maybe_evict(std::int64_t now_us) {
        if (++ops_since_sweep_ < 1024) return;
        ops_since_sweep_ = 0;
        for (auto it = seen_.begin(); it != seen_.end();) {
            if (now_us - it->second > horizon_us_) {
                it = seen_.erase(it);
            } else {
                ++it;
            }
        }
    }

    std::int64_t horizon_us_;
    mutable std::mutex mu_;
    std::unordered_map<std::string, std::int64_t> seen_;
    unsigned ops_since_sweep_ = 0;
};

/// Issues and verifies authentication certificates. The MAC key never
/// leaves this object; verify recomputes the tag and compares in constant
/// time so a verifier learns nothing about where a forged tag diverges.
class IdentityService {
public:
    IdentityService(crypto::Key256 key, CredentialTable creds, std::int64_t ttl_s,
                    std::int64_t replay_horizon_s)
        : key_(key), creds_(std::move(creds)), ttl_s_(ttl_s), replay_(replay_horizon_s) {}

    static crypto::Key256 load_key(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open key file: " + path);
        crypto::Key256 key{};
        in.read(reinterpret_cast<char*>(key.data()), static_cast<std::streamsize>(key.size()));
        if (in.gcount() != static_cast<std::streamsize>(key.size()) || in.peek() != EOF) {
            throw std::runtime_error("key file must be exactly 32 bytes: " + path);
        }
        return key;
    }

    std::string compute_tag(std::string_view subject, std::int64_t issued_at,
                            std::int64_t expires_at, std::string_view cert_id_hex) const {
        auto mac = crypto::hmac_sha256(
            key_, canonical_auth_string(subject, issued_at, expires_at, cert_id_hex));
        return crypto::to_hex(mac);
    }

    /// Throws BadCredentials on any failure; the error is identical for
    /// unknown users and wrong passwords.
    AuthCertificate authenticate(const std::string& client_id, std::string_view password,
                                 std::int64_t now_s) const {
        if (!creds_.check(client_id, password)) {
            throw BadCredentials();
        }
        AuthCertificate cert;
        cert.subject = client_id;
        cert.issued_at = now_s;
        cert.expires_at = now_s + ttl_s_;
        cert.cert_id = crypto::random_hex(16);
        cert.tag = compute_tag(cert.subject, cert.issued_at, cert.expires_at, cert.cert_id);
        return cert;
    }

    Verdict verify_certificate(const AuthCertificate& cert, std::int64_t now_s) const {
        if (cert.cert_id.size() != 32 || !crypto::is_lower_hex(cert.cert_id)) {
            return Verdict::deny(ThreatClass::Forgery, "malformed certificate id");
        }
        auto presented = crypto::from_hex(cert.tag);
        if (!presented || presented->size() != 32) {
            return Verdict::deny(ThreatClass::Forgery, "malformed tag");
        }
        auto expected = crypto::hmac_sha256(
            key_, canonical_auth_string(cert.subject, cert.issued_at, cert.expires_at,
                                        cert.cert_id));
        if (!crypto::ct_equal(presented->data(), expected.data(), expected.size())) {
            return Verdict::deny(ThreatClass::Forgery, "tag mismatch");
        }
        if (now_s < cert.issued_at || now_s >= cert.expires_at) {
            return Verdict::deny(ThreatClass::Expired, "outside validity window");
        }
        {
            std::lock_guard lock(revoked_mu_);
            if (revoked_.count(cert.cert_id) != 0) {
                return Verdict::deny(ThreatClass::Expired, "certificate revoked");
            }
        }
        return Verdict::allow();
    }

    Verdict check_replay(std::string_view cert_id, std::string_view nonce, std::int64_t now_us) {
        return replay_.check_and_record(cert_id, nonce, now_us);
    }

    void revoke(const std::string& cert_id) {
        std::lock_guard lock(revoked_mu_);
        revoked_.insert(cert_id);
    }

    std::int64_t ttl_s() const { return ttl_s_; }

private:
    crypto::Key256 key_;
    CredentialTable creds_;
    std::int64_t ttl_s_;
    ReplayCache replay_;
    mutable std::mutex revoked_mu_;
    std::set<std::string> revoked_;
};

}  // namespace secgate
