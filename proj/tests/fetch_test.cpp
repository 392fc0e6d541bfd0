// Copyright 2026 The emocolor Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "emocolor/fetch.hpp"

#include <gtest/gtest.h>

#include <thread>

#include "test_support.hpp"

namespace emocolor {
namespace {

class LocalServer {
 public:
  LocalServer() {
    server_.Get("/img.bin", [this](const httplib::Request&, httplib::Response& res) {
      ++hits_;
      res.set_content("\x01\x02\x03payload", 10, "application/octet-stream");
    });
    server_.Get("/moved", [](const httplib::Request&, httplib::Response& res) {
      res.set_redirect("/img.bin");
    });
    server_.Get("/gone", [](const httplib::Request&, httplib::Response& res) { res.status = 404; });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    thread_.join();
  }
  std::string url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }
  int hits() const { return hits_; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::atomic<int> hits_{0};
  std::thread thread_;
};

TEST(Fetch, DownloadsAndCaches) {
  testing::TempDir dir("fetch");
  LocalServer server;
  FetchClient client(dir.path());
  const auto url = server.url("/img.bin");
  EXPECT_FALSE(client.cached(url));
  const auto a = client.fetch(url);
  EXPECT_EQ(a.size(), 10u);
  EXPECT_EQ(a[0], 1);
  EXPECT_TRUE(client.cached(url));
  EXPECT_EQ(client.cache_path(url).filename().string().size(), 64u);
  const auto b = client.fetch(url);
  EXPECT_EQ(a, b);
  EXPECT_EQ(server.hits(), 1);
}

TEST(Fetch, FollowsRedirects) {
  testing::TempDir dir("fetch");
  LocalServer server;
  FetchClient client(dir.path());
  EXPECT_EQ(client.fetch(server.url("/moved")).size(), 10u);
}

TEST(Fetch, ErrorsAreNotCached) {
  testing::TempDir dir("fetch");
  LocalServer server;
  FetchClient client(dir.path());
  EXPECT_THROW(client.fetch(server.url("/gone")), FetchError);
  EXPECT_FALSE(client.cached(server.url("/gone")));
  EXPECT_THROW(client.fetch("ftp://example.org/x"), FetchError);
  EXPECT_THROW(client.fetch("not a url"), FetchError);
  // Nothing listens on port 9 of localhost in the test sandbox.
  EXPECT_THROW(client.fetch("http://127.0.0.1:9/x"), FetchError);
}

TEST(Fetch, ParseUrl) {
  const auto u = parse_url("https://uploads.example.org/images/a b.jpg?x=1");
  EXPECT_EQ(u.origin, "https://uploads.example.org");
  EXPECT_EQ(u.path, "/images/a b.jpg?x=1");
  EXPECT_EQ(parse_url("http://host").path, "/");
}

TEST(Fetch, CacheDirFromEnvironment) {
  testing::TempDir dir("fetch-env");
  ::setenv(kCacheDirEnv, dir.path().c_str(), 1);
  FetchClient client;
  ::unsetenv(kCacheDirEnv);
  EXPECT_EQ(client.cache_dir(), dir.path());
}

}  // namespace
}  // namespace emocolor
