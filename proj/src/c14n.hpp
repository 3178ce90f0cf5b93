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

#ifndef SOAPGUARD_C14N_HPP
#define SOAPGUARD_C14N_HPP

#include "xml.hpp"

#include <span>
#include <string>

namespace soapguard::xml {

/// Canonical form of a subtree.
///
/// Rules:
///  - namespace declarations are emitted on the element where a prefix is
///    first visibly used (element name or attribute), sorted by prefix, and
///    only if no output ancestor already declared the same binding; the
///    prefixes named in a ds:XPath expression count as used by that element;
///  - attributes are sorted by (namespace URI, local name);
///  - text is trimmed and internal whitespace runs collapse to one space;
///    text that becomes empty is dropped;
///  - empty elements are written as a start/end tag pair;
///  - only &amp; &lt; &gt; &quot; are produced as escapes.
///
/// Nodes listed in `excluded` are omitted together with their subtrees.
/// Throws NodeNotInDocument if `node` is not part of `doc`.
std::string canonicalize(const Node& node, const Document& doc, std::span<const NodeId> excluded = {});

// Same rules, without the document membership check. Used for detached
// subtrees.
void canonicalize_into(std::string& out, const Node& node, std::span<const NodeId> excluded = {});

} // namespace soapguard::xml

#endif
