#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

namespace listreward {

std::string sha256_hex(std::string_view data);
// Throws std::runtime_error when the file cannot be read.
std::string sha256_file(const std::filesystem::path& path);
std::string read_file(const std::filesystem::path& path);

// UTC, "2026-01-31T12:00:00Z".
std::string utc_timestamp();

// Runs body(i) for i in [0, n) over up to `workers` threads. The first
// exception thrown by any body is rethrown after all workers stop.
void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace listreward
