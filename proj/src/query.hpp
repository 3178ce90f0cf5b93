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

#ifndef SOAPGUARD_QUERY_HPP
#define SOAPGUARD_QUERY_HPP

#include "xml.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace soapguard::xml {

/// First element in document order whose wsu:Id equals `id`. The whole tree
/// is searched, header included, and the first hit wins even if the id is
/// duplicated further down.
const Node* find_by_id(const Document& doc, std::string_view id);
Node* find_by_id(Document& doc, std::string_view id);

const std::string* wsu_id(const Node& node) noexcept;

struct PathPredicate {
  enum class Kind {
    attribute_equals, // [@p:name="value"]
    role_equals,      // [@soap:role=".../suffix"], matched on the role suffix
  };
  Kind kind = Kind::attribute_equals;
  std::string prefix;
  QName attribute;
  std::string value;
};

struct PathStep {
  std::string prefix;
  QName name;
  std::optional<PathPredicate> predicate;
};

/// Restricted absolute location path: /p:a/p:b[@p:attr="v"]/...
struct AbsolutePath {
  std::vector<PathStep> steps;

  std::string to_string() const;
};

using PrefixResolver = std::function<std::optional<std::string>(std::string_view prefix)>;

// Resolver that knows soap, ds, wsse, wsu, wsa, sg and ex.
std::optional<std::string> well_known_prefix(std::string_view prefix);

// Resolver that looks at the in-scope declarations of `context` first and
// falls back to the well-known prefixes.
PrefixResolver scope_resolver(const Node& context);

/// Throws invalid_argument on syntax errors or unknown prefixes.
AbsolutePath parse_path(std::string_view text, const PrefixResolver& resolve = well_known_prefix);

bool step_matches(const PathStep& step, const Node& node) noexcept;

/// All elements reached by following the steps from the document root, in
/// document order. An element relocated elsewhere no longer matches its old
/// path.
std::vector<const Node*> evaluate_path(const Document& doc, const AbsolutePath& path);

/// Whether `node`'s own ancestor chain spells out the path exactly.
bool matches_path(const Node& node, const AbsolutePath& path) noexcept;

/// Absolute path of an element built from its ancestor chain. If the plain
/// path is ambiguous, the last step gets a wsu:Id predicate; if that does not
/// help either, invalid_argument is thrown.
AbsolutePath path_to(const Document& doc, const Node& node);

/// Number of element descendants, excluding the node itself.
std::size_t count_descendants(const Node& node) noexcept;

} // namespace soapguard::xml

#endif
