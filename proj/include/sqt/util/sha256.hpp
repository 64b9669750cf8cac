#ifndef SQT_UTIL_SHA256_HPP
#define SQT_UTIL_SHA256_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace sqt {

/// Incremental SHA-256. All content digests in this project (prompt specs,
/// chat requests, run-record sets) are hex-encoded SHA-256.
class Sha256 {
public:
    Sha256() { reset(); }

    void reset();
    void update(const void* data, size_t len);
    void update(std::string_view s) { update(s.data(), s.size()); }

    /// Finalizes and returns the lowercase hex digest. The object must be
    /// reset() before reuse.
    std::string hex_digest();

private:
    void process_block(const uint8_t* block);

    uint32_t state_[8];
    uint64_t bit_count_ = 0;
    uint8_t buffer_[64];
    size_t buffer_len_ = 0;
};

/// One-shot convenience.
std::string sha256_hex(std::string_view data);

} // namespace sqt

#endif
