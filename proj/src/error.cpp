// Copyright 2026 The faplearn Authors. All Rights Reserved.
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

#include "faplearn/error.hpp"

namespace faplearn {

MalformedLine::MalformedLine(std::size_t line, const std::string& why)
    : DataError("line " + std::to_string(line) + ": " + why), line_(line) {}

DuplicateId::DuplicateId(const std::string& id)
    : DataError("duplicate trace id '" + id + "'") {}

CorpusTooSmall::CorpusTooSmall(std::size_t have, std::size_t need)
    : DataError("corpus has " + std::to_string(have) +
                " traces, need at least " + std::to_string(need)) {}

MissingVocabToken::MissingVocabToken(const std::string& token)
    : DataError("token '" + token + "' is not in the vocabulary") {}

UnknownFapId::UnknownFapId(const std::string& id)
    : DataError("unknown FAP id '" + id + "'") {}

IndexOutOfVocab::IndexOutOfVocab(std::size_t index, std::size_t size)
    : DataError("index " + std::to_string(index) +
                " out of vocabulary of size " + std::to_string(size)) {}

}  // namespace faplearn
