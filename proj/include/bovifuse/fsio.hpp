#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace bovifuse {

std::vector<uint8_t> read_file_bytes(const std::filesystem::path& path);
std::string read_file_text(const std::filesystem::path& path);

/// Writes via a sibling temp file plus rename, so readers never observe a
/// half-written file.
void write_file_atomic(const std::filesystem::path& path, const void* data, size_t size);
void write_file_atomic(const std::filesystem::path& path, const std::string& text);
void write_file_atomic(const std::filesystem::path& path, const std::vector<uint8_t>& bytes);

/// SHA-256 of a byte buffer, as 64 lowercase hex characters.
std::string sha256_hex(const void* data, size_t size);
std::string sha256_hex(const std::vector<uint8_t>& bytes);
std::string sha256_hex(const std::string& text);
std::string sha256_hex_file(const std::filesystem::path& path);

}  // namespace bovifuse
