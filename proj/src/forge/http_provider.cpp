#include "mftlex/forge/http_provider.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "mftlex/error.hpp"
#include "mftlex/io.hpp"
#include "mftlex/text.hpp"

namespace mftlex::forge {

namespace {

std::string percent_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '_' ||
        c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

// FNV-1a, stable across platforms, names cache files.
std::string cache_key(std::string_view text) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

std::vector<std::string> parse_body(std::string_view body) {
  std::vector<std::string> words;
  std::istringstream in{std::string(body)};
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view word = trim(line);
    if (!word.empty()) words.push_back(normalize_term(word));
  }
  return words;
}

}  // namespace

std::optional<std::filesystem::path> default_cache_dir() {
  if (const char* dir = std::getenv("MFTLEX_CACHE_DIR"); dir && *dir) return std::filesystem::path(dir);
  return std::nullopt;
}

HttpFetcher::HttpFetcher(HttpEndpoint endpoint, std::string cache_namespace)
    : endpoint_(std::move(endpoint)), namespace_(std::move(cache_namespace)) {
  if (!endpoint_.cacheDir) endpoint_.cacheDir = default_cache_dir();
  std::string_view url = endpoint_.urlTemplate;
  constexpr std::string_view kScheme = "http://";
  if (!url.starts_with(kScheme)) {
    throw Error(ErrorCode::Config, "provider URL must start with http:// (got '" + endpoint_.urlTemplate + "')");
  }
  url.remove_prefix(kScheme.size());
  const std::size_t slash = url.find('/');
  std::string_view authority = url.substr(0, slash);
  path_template_ = slash == std::string_view::npos ? "/" : std::string(url.substr(slash));
  if (const std::size_t colon = authority.rfind(':'); colon != std::string_view::npos) {
    port_ = std::atoi(std::string(authority.substr(colon + 1)).c_str());
    authority = authority.substr(0, colon);
  }
  host_ = std::string(authority);
  if (host_.empty() || port_ <= 0) throw Error(ErrorCode::Config, "bad provider URL '" + endpoint_.urlTemplate + "'");
  if (path_template_.find("{q}") == std::string::npos) {
    throw Error(ErrorCode::Config, "provider URL needs a {q} placeholder: '" + endpoint_.urlTemplate + "'");
  }
}

std::string HttpFetcher::request(std::string_view query) const {
  std::string path = path_template_;
  path.replace(path.find("{q}"), 3, percent_encode(query));

  httplib::Client client(host_, port_);
  client.set_connection_timeout(endpoint_.timeout);
  client.set_read_timeout(endpoint_.timeout);

  auto delay = endpoint_.backoff;
  std::string last_error;
  for (int attempt = 1; attempt <= std::max(1, endpoint_.attempts); ++attempt) {
    if (auto response = client.Get(path)) {
      if (response->status == 200) return response->body;
      if (response->status == 404) return {};
      last_error = "HTTP " + std::to_string(response->status);
      if (response->status < 500 && response->status != 429) break;
    } else {
      last_error = httplib::to_string(response.error());
    }
    if (attempt < endpoint_.attempts) {
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }
  }
  throw Error(ErrorCode::ProviderFailure, "GET " + host_ + path + " failed: " + last_error);
}

std::vector<std::string> HttpFetcher::fetch(std::string_view query) const {
  const std::string normalized = normalize_term(query);
  std::optional<std::filesystem::path> cached;
  if (endpoint_.cacheDir) {
    cached = *endpoint_.cacheDir / namespace_ / (cache_key(endpoint_.urlTemplate + '\n' + normalized) + ".txt");
    if (std::filesystem::exists(*cached)) return parse_body(read_file(*cached));
  }
  const std::string body = request(normalized);
  if (cached) {
    std::filesystem::create_directories(cached->parent_path());
    write_file_atomic(*cached, body);
  }
  return parse_body(body);
}

HttpWordList::HttpWordList(HttpEndpoint endpoint) : fetcher_(std::move(endpoint), "words") {}

std::vector<std::string> HttpWordList::words_with_prefix(std::string_view prefix) const {
  const std::string key = normalize_term(prefix);
  std::vector<std::string> words;
  for (std::string& w : fetcher_.fetch(key)) {
    if (w.starts_with(key) && std::find(words.begin(), words.end(), w) == words.end()) words.push_back(std::move(w));
  }
  std::sort(words.begin(), words.end());
  return words;
}

HttpBilingual::HttpBilingual(HttpEndpoint translate, HttpEndpoint reverse)
    : translate_(std::move(translate), "translate"), reverse_(std::move(reverse), "reverse") {}

std::vector<std::string> HttpBilingual::translate(std::string_view source_word) const {
  return translate_.fetch(source_word);
}

std::vector<std::string> HttpBilingual::reverse(std::string_view target_word) const {
  return reverse_.fetch(target_word);
}

}  // namespace mftlex::forge
