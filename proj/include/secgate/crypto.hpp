#pragma once

#include <sodium.h>

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace secgate::crypto {

using Key256 = std::array<unsigned char, 32>;

inline void init() {
    static const int rc = sodium_init();
    if (rc < 0) {
        throw std::runtime_error("libsodium initialization failed");
    }
}

inline std::string to_hex(const unsigned char* data, std::size_t len) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (std::size_t i = 0; i < len; ++i) {
        out.push_back(digits[data[i] >> 4]);
        out.push_back(digits[data[i] & 0x0f]);
    }
    return out;
}

template <std::size_t N>
std::string to_hex(const std::array<unsigned char, N>& a) {
    return to_hex(a.data(), N);
}

inline std::string to_hex(const std::vector<unsigned char>& v) {
    return to_hex(v.data(), v.size());
}

inline bool is_lower_hex(std::string_view s) {
    for (char c : s) {
        const bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
        if (!ok) return false;
    }
    return true;
}

/// Strict decode: even length, lowercase hex only.
inline std::optional<std::vector<unsigned char>> from_hex(std::string_view s) {
    if (s.size() % 2 != 0 || !is_lower_hex(s)) return std::nullopt;
    auto nibble = [](char c) -> unsigned {
        return c <= '9' ? static_cast<unsigned>(c - '0') : static_cast<unsigned>(c - 'a' + 10);
    };
    std::vector<unsigned char> out(s.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<unsigned char>((nibble(s[2 * i]) << 4) | nibble(s[2 * i + 1]));
    }
    return out;
}

inline void random_bytes(unsigned char* p, std::size_t n) {
    init();
    randombytes_buf(p, n);
}

inline std::string random_hex(std::size_t nbytes) {
    std::vector<unsigned char> buf(nbytes);
    random_bytes(buf.data(), buf.size());
    return to_hex(buf);
}

inline std::array<unsigned char, 32> sha256(std::string_view msg) {
    init();
    std::array<unsigned char, 32> out{};
    crypto_hash_sha256(out.data(), reinterpret_cast<const unsigned char*>(msg.data()), msg.size());
    return out;
}

inline std::array<unsigned char, 32> hmac_sha256(const Key256& key, std::string_view msg) {
    init();
    std::array<unsigned char, 32> out{};
    crypto_auth_hmacsha256_state st;
    crypto_auth_hmacsha256_init(&st, key.data(), key.size());
    crypto_auth_hmacsha256_update(&st, reinterpret_cast<const unsigned char*>(msg.data()),
                                  msg.size());
    crypto_auth_hmacsha256_final(&st, out.data());
    return out;
}

/// Constant-time comparison over the full length. Length mismatch is public
/// information and may return early.
inline bool ct_equal(const unsigned char* a, const unsigned char* b, std::size_t len) {
    init();
    return sodium_memcmp(a, b, len) == 0;
}

inline bool ct_equal(const std::array<unsigned char, 32>& a,
                     const std::array<unsigned char, 32>& b) {
    return ct_equal(a.data(), b.data(), 32);
}

inline constexpr std::size_t kAeadNonceBytes = 12;
inline constexpr std::size_t kAeadTagBytes = 16;

using AeadNonce = std::array<unsigned char, kAeadNonceBytes>;

inline std::vector<unsigned char> aead_seal(const Key256& key, const AeadNonce& nonce,
                                            std::string_view plaintext, std::string_view ad) {
    init();
    std::vector<unsigned char> out(plaintext.size() + kAeadTagBytes);
    unsigned long long clen = 0;
    crypto_aead_chacha20poly1305_ietf_encrypt(
        out.data(), &clen, reinterpret_cast<const unsigned char*>(plaintext.data()),
        plaintext.size(), reinterpret_cast<const unsigned char*>(ad.data()), ad.size(), nullptr,
        nonce.data(), key.data());
    out.resize(static_cast<std::size_t>(clen));
    return out;
}

inline std::optional<std::string> aead_open(const Key256& key, const AeadNonce& nonce,
                                            const std::vector<unsigned char>& ciphertext,
                                            std::string_view ad) {
    init();
    if (ciphertext.size() < kAeadTagBytes) return std::nullopt;
    std::vector<unsigned char> out(ciphertext.size() - kAeadTagBytes + 1);
    unsigned long long mlen = 0;
    const int rc = crypto_aead_chacha20poly1305_ietf_decrypt(
        out.data(), &mlen, nullptr, ciphertext.data(), ciphertext.size(),
        reinterpret_cast<const unsigned char*>(ad.data()), ad.size(), nonce.data(), key.data());
    if (rc != 0) return std::nullopt;
    return std::string(reinterpret_cast<const char*>(out.data()), static_cast<std::size_t>(mlen));
}

}  // namespace secgate::crypto
