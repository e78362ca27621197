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

#include <stdexcept>
#include <string>

namespace growset {

// Base for all recoverable engine errors. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define GROWSET_ERROR(NAME)                                        \
  struct NAME : Error {                                            \
    explicit NAME(const std::string& w) : Error(#NAME, w) {}       \
  }

GROWSET_ERROR(ZeroVector);
GROWSET_ERROR(NonFinite);
GROWSET_ERROR(DimMismatch);
GROWSET_ERROR(EmptyNeighborhood);
GROWSET_ERROR(MissingPart);
GROWSET_ERROR(MissingPair);
GROWSET_ERROR(EmptyCleanSet);
GROWSET_ERROR(HookFailure);
GROWSET_ERROR(TargetTooLarge);
GROWSET_ERROR(OutOfRange);
GROWSET_ERROR(CorruptSnapshot);
GROWSET_ERROR(CorruptCheckpoint);
GROWSET_ERROR(BadMagic);
GROWSET_ERROR(VersionUnsupported);
GROWSET_ERROR(TruncatedRecord);
GROWSET_ERROR(MalformedLine);
GROWSET_ERROR(BadSpec);
GROWSET_ERROR(BadConfig);

#undef GROWSET_ERROR

}  // namespace growset
