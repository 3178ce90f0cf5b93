/*
  Copyright 2026 The soapguard Authors

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

  Unless required by applicable law or agreed to in writing, software
  distributed under the License is distributed on an "AS IS" BASIS,
  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
  See the License for the specific language governing permissions and
  limitations under the License.
*/

#ifndef SOAPGUARD_ERROR_HPP
#define SOAPGUARD_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace soapguard {

// Every failure the core can report. The C API maps these one-to-one onto
// sg_status values, so keep the order in sync with soapguard.h.
enum class ErrorCode {
  malformed_xml = 1,
  node_not_in_document,
  target_not_found,
  ambiguous_path,
  already_signed,
  no_signature,
  unknown_key,
  no_signed_body,
  header_not_found,
  no_timestamp,
  not_enough_signed_siblings,
  bad_permutation,
  no_soap_account,
  cannot_preserve_counts,
  ambiguous_body,
  not_applicable,
  insufficient_data,
  invalid_argument,
  io,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

struct TextPosition {
  std::size_t offset = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

class MalformedXml : public Error {
public:
  MalformedXml(TextPosition pos, const std::string& reason);

  const TextPosition& position() const noexcept { return pos_; }
  const std::string& reason() const noexcept { return reason_; }

private:
  TextPosition pos_;
  std::string reason_;
};

} // namespace soapguard

#endif
