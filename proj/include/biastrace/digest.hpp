#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace biastrace {

// FNV-1a 64-bit. Used for run-manifest input digests and determinism
// comparisons, not for anything adversarial.
std::uint64_t fnv1a64(std::string_view bytes);

// Hex form, 16 lowercase digits.
std::string digest_hex(std::string_view bytes);

// Digest of a file's raw bytes. Throws UsageError if unreadable.
std::string digest_file(const std::filesystem::path& path);

} // namespace biastrace
