#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace listreward {

class TemplateMissing : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Plain-text prompt assets loaded from a directory tree, addressed by their
// relative path without extension ("judge/full_mrr"). Lookups are
// thread-safe.
class AssetStore {
 public:
  explicit AssetStore(std::filesystem::path root);

  // Asset store rooted at $LISTREWARD_ASSETS, or the build's asset directory.
  static AssetStore from_environment();

  // Throws TemplateMissing.
  const std::string& get(const std::string& name) const;
  // Hex SHA-256 of the asset bytes. Throws TemplateMissing.
  std::string checksum(const std::string& name) const;
  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
  std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();
  mutable std::map<std::string, std::string> cache_;
};

// Replaces every {{key}} in `text`. Unknown placeholders are left in place.
std::string substitute(
    std::string_view text,
    const std::vector<std::pair<std::string, std::string>>& values);

}  // namespace listreward
