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

#pragma once

#include <chrono>
#include <string>

#include "growset/cleaner.hpp"

namespace growset {

/// Relabel hook backed by an external command, run once per record via
/// `sh -c`. The record is written to the child's stdin as one JSON line
/// {"id": ..., "payload_ref"?: ..., "label"?: ...}; the replacement is read
/// from its stdout as one JSON line: {"paired_embedding": [floats]},
/// {"label": int}, or {} for no replacement. Crash, timeout, or malformed
/// output raises HookFailure.
class ExternalCommandHook {
 public:
  explicit ExternalCommandHook(
      std::string command,
      std::chrono::milliseconds timeout = std::chrono::seconds(30))
      : command_(std::move(command)), timeout_(timeout) {}

  std::optional<RelabelResult> operator()(const DataRecord& record) const;

 private:
  std::string command_;
  std::chrono::milliseconds timeout_;
};

}  // namespace growset
