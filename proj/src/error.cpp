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

#include "error.hpp"
#include "names.hpp"

namespace soapguard {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::malformed_xml: return "MalformedXml";
  case ErrorCode::node_not_in_document: return "NodeNotInDocument";
  case ErrorCode::target_not_found: return "TargetNotFound";
  case ErrorCode::ambiguous_path: return "AmbiguousPath";
  case ErrorCode::already_signed: return "AlreadySigned";
  case ErrorCode::no_signature: return "NoSignature";
  case ErrorCode::unknown_key: return "UnknownKey";
  case ErrorCode::no_signed_body: return "NoSignedBody";
  case ErrorCode::header_not_found: return "HeaderNotFound";
  case ErrorCode::no_timestamp: return "NoTimestamp";
  case ErrorCode::not_enough_signed_siblings: return "NotEnoughSignedSiblings";
  case ErrorCode::bad_permutation: return "BadPermutation";
  case ErrorCode::no_soap_account: return "NoSoapAccount";
  case ErrorCode::cannot_preserve_counts: return "CannotPreserveCounts";
  case ErrorCode::ambiguous_body: return "AmbiguousBody";
  case ErrorCode::not_applicable: return "NotApplicable";
  case ErrorCode::insufficient_data: return "InsufficientData";
  case ErrorCode::invalid_argument: return "InvalidArgument";
  case ErrorCode::io: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string describe(const TextPosition& pos, const std::string& reason) {
  return "malformed XML at line " + std::to_string(pos.line) + ", column " +
         std::to_string(pos.column) + ": " + reason;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

} // namespace

MalformedXml::MalformedXml(TextPosition pos, const std::string& reason)
    : Error(ErrorCode::malformed_xml, describe(pos, reason)), pos_(pos), reason_(reason) {}

namespace role {

bool is_none(std::string_view value) noexcept { return ends_with(value, "/none"); }

bool is_ultimate_receiver(std::string_view value) noexcept {
  return ends_with(value, "/ultimateReceiver");
}

} // namespace role

} // namespace soapguard
