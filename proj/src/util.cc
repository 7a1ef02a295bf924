#include "listreward/util.h"

#include <openssl/evp.h>

#include <atomic>
#include <chrono>
#include <ctime>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "listreward/assets.h"

namespace listreward {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_file(const std::filesystem::path& path) {
  return sha256_hex(read_file(path));
}

std::string utc_timestamp() {
  std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      while (!failed.load()) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

AssetStore::AssetStore(std::filesystem::path root) : root_(std::move(root)) {}

AssetStore AssetStore::from_environment() {
  if (const char* dir = std::getenv("LISTREWARD_ASSETS"); dir && *dir) {
    return AssetStore(dir);
  }
  return AssetStore(LISTREWARD_DEFAULT_ASSET_DIR);
}

const std::string& AssetStore::get(const std::string& name) const {
  std::lock_guard<std::mutex> lock(*mu_);
  if (auto it = cache_.find(name); it != cache_.end()) return it->second;
  std::filesystem::path path = root_ / (name + ".txt");
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw TemplateMissing("prompt asset '" + name + "' not found at " +
                          path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return cache_.emplace(name, ss.str()).first->second;
}

std::string AssetStore::checksum(const std::string& name) const {
  return sha256_hex(get(name));
}

std::string substitute(
    std::string_view text,
    const std::vector<std::pair<std::string, std::string>>& values) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t open = text.find("{{", i);
    if (open == std::string_view::npos) {
      out.append(text.substr(i));
      break;
    }
    out.append(text.substr(i, open - i));
    std::size_t close = text.find("}}", open + 2);
    if (close == std::string_view::npos) {
      out.append(text.substr(open));
      break;
    }
    std::string_view key = text.substr(open + 2, close - open - 2);
    bool replaced = false;
    for (const auto& [k, v] : values) {
      if (k == key) {
        out.append(v);
        replaced = true;
        break;
      }
    }
    if (!replaced) out.append(text.substr(open, close + 2 - open));
    i = close + 2;
  }
  return out;
}

}  // namespace listreward
