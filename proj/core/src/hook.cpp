// Copyright 2026-present the growset authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "growset/hook.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include <nlohmann/json.hpp>

#include "growset/errors.hpp"

namespace growset {

namespace {

struct Pipe {
  int fds[2] = {-1, -1};
  Pipe() {
    if (pipe(fds) != 0) {
      throw HookFailure(std::string("pipe: ") + std::strerror(errno));
    }
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  void close_read() {
    if (fds[0] >= 0) {
      ::close(fds[0]);
      fds[0] = -1;
    }
  }
  void close_write() {
    if (fds[1] >= 0) {
      ::close(fds[1]);
      fds[1] = -1;
    }
  }
};

}  // namespace

std::optional<RelabelResult> ExternalCommandHook::operator()(
    const DataRecord& record) const {
  nlohmann::json request;
  request["id"] = record.id;
  if (record.payload_ref) {
    request["payload_ref"] = *record.payload_ref;
  }
  if (record.label) {
    request["label"] = *record.label;
  }
  const std::string request_line = request.dump() + "\n";

  Pipe to_child;
  Pipe from_child;
  const pid_t pid = fork();
  if (pid < 0) {
    throw HookFailure(std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    dup2(to_child.fds[0], STDIN_FILENO);
    dup2(from_child.fds[1], STDOUT_FILENO);
    ::close(to_child.fds[0]);
    ::close(to_child.fds[1]);
    ::close(from_child.fds[0]);
    ::close(from_child.fds[1]);
    execl("/bin/sh", "sh", "-c", command_.c_str(), nullptr);
    _exit(127);
  }
  to_child.close_read();
  from_child.close_write();

  ssize_t written = ::write(to_child.fds[1], request_line.data(),
                            request_line.size());
  to_child.close_write();
  if (written != static_cast<ssize_t>(request_line.size())) {
    kill(pid, SIGKILL);
    waitpid(pid, nullptr, 0);
    throw HookFailure("short write to hook stdin");
  }

  std::string output;
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  char buf[4096];
  while (true) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      kill(pid, SIGKILL);
      waitpid(pid, nullptr, 0);
      throw HookFailure("hook timed out");
    }
    struct pollfd pfd{from_child.fds[0], POLLIN, 0};
    const int pr = poll(&pfd, 1, static_cast<int>(left.count()));
    if (pr == 0) {
      continue;  // re-check the deadline
    }
    if (pr < 0) {
      if (errno == EINTR) {
        continue;
      }
      kill(pid, SIGKILL);
      waitpid(pid, nullptr, 0);
      throw HookFailure(std::string("poll: ") + std::strerror(errno));
    }
    const ssize_t n = ::read(from_child.fds[0], buf, sizeof(buf));
    if (n < 0) {
      if (errno == EINTR) {
        continue;
      }
      kill(pid, SIGKILL);
      waitpid(pid, nullptr, 0);
      throw HookFailure(std::string("read: ") + std::strerror(errno));
    }
    if (n == 0) {
      break;
    }
    output.append(buf, static_cast<std::size_t>(n));
    if (output.find('\n') != std::string::npos) {
      break;
    }
  }

  int status = 0;
  waitpid(pid, &status, 0);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw HookFailure("hook command exited with status " +
                      std::to_string(WIFEXITED(status) ? WEXITSTATUS(status)
                                                       : -1));
  }

  const auto eol = output.find('\n');
  const std::string line =
      eol == std::string::npos ? output : output.substr(0, eol);
  if (line.empty()) {
    throw HookFailure("hook produced no output line");
  }

  nlohmann::json response = nlohmann::json::parse(line, nullptr, false);
  if (response.is_discarded() || !response.is_object()) {
    throw HookFailure("hook output is not a JSON object: " + line);
  }
  RelabelResult result;
  if (response.contains("paired_embedding")) {
    const auto& arr = response["paired_embedding"];
    if (!arr.is_array()) {
      throw HookFailure("paired_embedding is not an array");
    }
    EmbeddingVector v;
    v.values.reserve(arr.size());
    for (const auto& x : arr) {
      v.values.push_back(x.get<float>());
    }
    result.paired = std::move(v);
  }
  if (response.contains("label")) {
    result.label = response["label"].get<std::int32_t>();
  }
  if (!result.paired && !result.label) {
    return std::nullopt;
  }
  return result;
}

}  // namespace growset
