#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <sys/stat.h>

#include "acw/errors.hpp"

namespace acw {

using Digest = std::array<unsigned char, 32>;

/// 32-byte secret seeding rule ordering and every hash-randomized rewrite
/// decision. The raw bytes never appear in reports or watermarked output;
/// logs identify the key by its short fingerprint only.
class SecretKey {
public:
    static SecretKey from_bytes(const std::array<unsigned char, 32>& bytes) {
        SecretKey k;
        k.bytes_ = bytes;
        return k;
    }

    static SecretKey from_hex(std::string_view hex);
    static SecretKey generate();
    static SecretKey load(const std::string& path);

    void save(const std::string& path) const;

    const std::array<unsigned char, 32>& bytes() const { return bytes_; }
    std::string hex() const;
    std::string key_id() const;

private:
    std::array<unsigned char, 32> bytes_{};
};

inline std::string to_hex(const unsigned char* data, std::size_t len) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(len * 2, '0');
    for (std::size_t i = 0; i < len; ++i) {
        out[2 * i] = digits[data[i] >> 4];
        out[2 * i + 1] = digits[data[i] & 0xf];
    }
    return out;
}

inline std::string to_hex(const Digest& d) { return to_hex(d.data(), d.size()); }

/// SHA-256(key_bytes || payload); the secret prefix makes every derived
/// decision unpredictable without the key.
inline Digest digest(const SecretKey& key, std::string_view payload) {
    Digest out{};
    unsigned int out_len = 0;
    std::vector<unsigned char> buf;
    buf.reserve(key.bytes().size() + payload.size());
    buf.insert(buf.end(), key.bytes().begin(), key.bytes().end());
    buf.insert(buf.end(), payload.begin(), payload.end());
    if (EVP_Digest(buf.data(), buf.size(), out.data(), &out_len, EVP_sha256(), nullptr) != 1 ||
        out_len != out.size())
        throw Error(ErrorCode::Internal, "SHA-256 computation failed");
    return out;
}

inline std::string digest_hex(const SecretKey& key, std::string_view payload) {
    return to_hex(digest(key, payload));
}

/// Lowest-order bit of the digest; drives odd/even decisions.
inline bool digest_odd(const SecretKey& key, std::string_view payload) {
    return digest(key, payload).back() & 1;
}

inline SecretKey SecretKey::from_hex(std::string_view hex) {
    if (hex.size() != 64)
        throw Error(ErrorCode::KeyError, "key must be 64 hex characters");
    std::array<unsigned char, 32> bytes{};
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        return -1;
    };
    for (std::size_t i = 0; i < 32; ++i) {
        int hi = nibble(hex[2 * i]);
        int lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0)
            throw Error(ErrorCode::KeyError, "key must be lowercase hex");
        bytes[i] = static_cast<unsigned char>(hi << 4 | lo);
    }
    return from_bytes(bytes);
}

inline SecretKey SecretKey::generate() {
    std::array<unsigned char, 32> bytes{};
    if (RAND_bytes(bytes.data(), static_cast<int>(bytes.size())) != 1)
        throw Error(ErrorCode::Internal, "system RNG unavailable");
    return from_bytes(bytes);
}

inline SecretKey SecretKey::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open key file: " + path);
    std::string line;
    std::getline(in, line);
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
    return from_hex(line);
}

inline void SecretKey::save(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write key file: " + path);
    out << hex() << "\n";
    out.close();
    ::chmod(path.c_str(), 0600);
}

inline std::string SecretKey::hex() const { return to_hex(bytes_.data(), bytes_.size()); }

inline std::string SecretKey::key_id() const { return digest_hex(*this, "key-id").substr(0, 8); }

/// Keyed permutation of the applicable rule set; identical for embedder and
/// detector given the same key, opaque to anyone else.
struct RuleOrdering {
    std::vector<std::string> ordered_rule_ids;
    std::string key_id;
};

/// Ascending lexicographic order of digest(key, rule_id). A digest collision
/// between distinct rule ids would make the order ambiguous, so it is fatal.
inline RuleOrdering sort_rules(const SecretKey& key, const std::vector<std::string>& rule_ids) {
    std::vector<std::pair<std::string, std::string>> keyed;
    keyed.reserve(rule_ids.size());
    for (const auto& id : rule_ids) keyed.emplace_back(digest_hex(key, id), id);
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t i = 0; i + 1 < keyed.size(); ++i)
        if (keyed[i].first == keyed[i + 1].first && keyed[i].second != keyed[i + 1].second)
            throw Error(ErrorCode::Internal, "digest collision between rule ids");
    RuleOrdering out;
    out.key_id = key.key_id();
    out.ordered_rule_ids.reserve(keyed.size());
    for (auto& [h, id] : keyed) out.ordered_rule_ids.push_back(std::move(id));
    return out;
}

enum class OperandOrder { Keep, Swap };

/// Larger digest first: Keep iff digest(left) >= digest(right); equal
/// digests (including identical operand texts) keep the code unchanged.
/// Operand texts must already be canonical (whitespace-free).
inline OperandOrder operand_order(const SecretKey& key, std::string_view left,
                                  std::string_view right) {
    Digest dl = digest(key, left);
    Digest dr = digest(key, right);
    return dl >= dr ? OperandOrder::Keep : OperandOrder::Swap;
}

} // namespace acw
