#pragma once

// In-process HTTP stub implementing the chat/image endpoints the adapters
// talk to. Deterministic: decomposition prompts are answered with the rule
// decomposer's block (mirroring the mock backend), judge rubrics with a fixed
// score object, image calls with content-hashed URLs. Requests must carry
// `Authorization: Bearer test-key` or they get a 401. A failure budget can be
// armed to make the next N chat calls return 500 (for retry tests).

#include <atomic>
#include <memory>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace decot::testsupport {

class StubServer {
 public:
  StubServer();
  ~StubServer();

  StubServer(const StubServer&) = delete;
  StubServer& operator=(const StubServer&) = delete;

  std::string base_url() const;
  static const char* api_key() { return "test-key"; }

  int llm_calls() const { return llm_calls_.load(); }
  int image_calls() const { return image_calls_.load(); }

  /// The next `n` chat completions answer 500.
  void fail_next_llm_calls(int n) { llm_failures_.store(n); }

 private:
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> llm_calls_{0};
  std::atomic<int> image_calls_{0};
  std::atomic<int> llm_failures_{0};
};

}  // namespace decot::testsupport
