#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mftlex/forge/providers.hpp"

namespace mftlex::forge {

// Fetches `http://host[:port]/path...` with `{q}` replaced by the
// percent-encoded query. The response body is read as one word per line;
// 404 means "no words". Answers are cached on disk, one file per query,
// under `cacheDir` (defaulting to $MFTLEX_CACHE_DIR when set). Failed
// requests are retried with doubling backoff before ProviderFailure.
struct HttpEndpoint {
  std::string urlTemplate;
  std::optional<std::filesystem::path> cacheDir;
  int attempts = 3;
  std::chrono::milliseconds backoff{200};
  std::chrono::seconds timeout{10};
};

std::optional<std::filesystem::path> default_cache_dir();

class HttpFetcher {
 public:
  HttpFetcher(HttpEndpoint endpoint, std::string cache_namespace);
  std::vector<std::string> fetch(std::string_view query) const;

 private:
  std::string request(std::string_view query) const;

  HttpEndpoint endpoint_;
  std::string namespace_;
  std::string host_;
  int port_ = 80;
  std::string path_template_;
};

class HttpWordList : public WordListProvider {
 public:
  explicit HttpWordList(HttpEndpoint endpoint);
  std::vector<std::string> words_with_prefix(std::string_view prefix) const override;

 private:
  HttpFetcher fetcher_;
};

class HttpBilingual : public BilingualProvider {
 public:
  HttpBilingual(HttpEndpoint translate, HttpEndpoint reverse);
  std::vector<std::string> translate(std::string_view source_word) const override;
  std::vector<std::string> reverse(std::string_view target_word) const override;

 private:
  HttpFetcher translate_;
  HttpFetcher reverse_;
};

}  // namespace mftlex::forge
