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

#ifndef SOAPGUARD_NAMES_HPP
#define SOAPGUARD_NAMES_HPP

#include <string_view>

// Namespace URIs and algorithm identifiers. These strings are part of the
// wire format: signed documents embed them, so changing one invalidates every
// stored signature.
namespace soapguard::ns {

// SOAP envelope namespace as written in the classic envelope skeleton.
inline constexpr std::string_view soap = "http://www.w3.org/2001/12/soap-envelope";
inline constexpr std::string_view soap_encoding = "http://www.w3.org/2001/12/soap-encoding";
inline constexpr std::string_view ds = "http://www.w3.org/2000/09/xmldsig#";
inline constexpr std::string_view wsse =
    "http://docs.oasis-open.org/wss/2004/01/oasis-200401-wss-wssecurity-secext-1.0.xsd";
inline constexpr std::string_view wsu =
    "http://docs.oasis-open.org/wss/2004/01/oasis-200401-wss-wssecurity-utility-1.0.xsd";
inline constexpr std::string_view wsa = "http://www.w3.org/2005/08/addressing";
inline constexpr std::string_view xml = "http://www.w3.org/XML/1998/namespace";

// Header entries produced by this library (SOAP account, count fillers) and
// by the sample fixtures (transfer instructions, trace hops).
inline constexpr std::string_view sg = "urn:soapguard:2026:header";
inline constexpr std::string_view ex = "urn:soapguard:2026:example";

} // namespace soapguard::ns

namespace soapguard::role {

// Full role URIs. Role matching is done on the suffix ("/none",
// "/ultimateReceiver") so abbreviated spellings are recognised as well.
inline constexpr std::string_view none = "http://www.w3.org/2003/05/soap-envelope/role/none";
inline constexpr std::string_view ultimate_receiver =
    "http://www.w3.org/2003/05/soap-envelope/role/ultimateReceiver";

bool is_none(std::string_view value) noexcept;
bool is_ultimate_receiver(std::string_view value) noexcept;

} // namespace soapguard::role

namespace soapguard::alg {

inline constexpr std::string_view c14n = "urn:soapguard:c14n:simplified-exclusive";
inline constexpr std::string_view exclude_signature =
    "http://www.w3.org/2000/09/xmldsig#enveloped-signature";
inline constexpr std::string_view xpath = "http://www.w3.org/TR/1999/REC-xpath-19991116";
inline constexpr std::string_view sha256 = "http://www.w3.org/2001/04/xmlenc#sha256";
inline constexpr std::string_view ed25519 = "http://www.w3.org/2021/04/xmldsig-more#eddsa-ed25519";

} // namespace soapguard::alg

#endif
