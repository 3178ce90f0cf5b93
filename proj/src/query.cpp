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

#include "query.hpp"

#include "error.hpp"
#include "names.hpp"

#include <algorithm>

namespace soapguard::xml {

const std::string* wsu_id(const Node& node) noexcept {
  return node.is_element() ? node.attribute_value(ns::wsu, "Id") : nullptr;
}

namespace {

const Node* first_with_id(const Node& n, std::string_view id) {
  if (!n.is_element())
    return nullptr;
  if (const std::string* v = wsu_id(n); v && *v == id)
    return &n;
  for (std::size_t i = 0; i < n.child_count(); ++i)
    if (const Node* hit = first_with_id(n.child(i), id))
      return hit;
  return nullptr;
}

} // namespace

const Node* find_by_id(const Document& doc, std::string_view id) {
  return first_with_id(doc.root(), id);
}

Node* find_by_id(Document& doc, std::string_view id) {
  return const_cast<Node*>(first_with_id(doc.root(), id));
}

std::optional<std::string> well_known_prefix(std::string_view prefix) {
  if (prefix == "soap") return std::string(ns::soap);
  if (prefix == "ds") return std::string(ns::ds);
  if (prefix == "wsse") return std::string(ns::wsse);
  if (prefix == "wsu") return std::string(ns::wsu);
  if (prefix == "wsa") return std::string(ns::wsa);
  if (prefix == "sg") return std::string(ns::sg);
  if (prefix == "ex") return std::string(ns::ex);
  if (prefix.empty()) return std::string();
  return std::nullopt;
}

PrefixResolver scope_resolver(const Node& context) {
  return [&context](std::string_view prefix) -> std::optional<std::string> {
    if (!prefix.empty())
      if (const std::string* uri = context.lookup_namespace(prefix))
        return *uri;
    return well_known_prefix(prefix);
  };
}

std::string AbsolutePath::to_string() const {
  std::string out;
  for (const auto& s : steps) {
    out += '/';
    if (!s.prefix.empty())
      out += s.prefix + ":";
    out += s.name.local;
    if (s.predicate) {
      out += "[@";
      if (!s.predicate->prefix.empty())
        out += s.predicate->prefix + ":";
      out += s.predicate->attribute.local;
      out += "=\"" + s.predicate->value + "\"]";
    }
  }
  return out;
}

namespace {

class PathParser {
public:
  PathParser(std::string_view text, const PrefixResolver& resolve) : s_(text), resolve_(resolve) {}

  AbsolutePath run() {
    AbsolutePath path;
    if (s_.empty() || s_[0] != '/')
      fail("path must start with '/'");
    while (i_ < s_.size()) {
      if (s_[i_] != '/')
        fail("expected '/'");
      ++i_;
      PathStep step;
      auto [prefix, local] = qname();
      step.prefix = prefix;
      step.name = QName{uri(prefix, false), local};
      if (i_ < s_.size() && s_[i_] == '[') {
        ++i_;
        expect('@');
        auto [ap, al] = qname();
        expect('=');
        std::string value = quoted();
        expect(']');
        PathPredicate pred;
        pred.prefix = ap;
        pred.attribute = QName{uri(ap, true), al};
        pred.value = value;
        if (pred.attribute.is(ns::soap, "role") && value.rfind(".../", 0) == 0)
          pred.kind = PathPredicate::Kind::role_equals;
        step.predicate = std::move(pred);
      }
      path.steps.push_back(std::move(step));
    }
    if (path.steps.empty())
      fail("path has no steps");
    return path;
  }

private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::invalid_argument,
                "bad path '" + std::string(s_) + "' at offset " + std::to_string(i_) + ": " + why);
  }

  void expect(char c) {
    if (i_ >= s_.size() || s_[i_] != c)
      fail(std::string("expected '") + c + "'");
    ++i_;
  }

  std::pair<std::string, std::string> qname() {
    std::size_t start = i_;
    while (i_ < s_.size() && s_[i_] != '/' && s_[i_] != '[' && s_[i_] != ']' && s_[i_] != '=')
      ++i_;
    std::string_view q = s_.substr(start, i_ - start);
    if (q.empty())
      fail("empty name");
    auto colon = q.find(':');
    if (colon == std::string_view::npos)
      return {"", std::string(q)};
    return {std::string(q.substr(0, colon)), std::string(q.substr(colon + 1))};
  }

  std::string uri(const std::string& prefix, bool attribute) {
    if (prefix.empty())
      return attribute ? std::string() : resolve_("").value_or("");
    auto u = resolve_(prefix);
    if (!u)
      fail("unknown prefix '" + prefix + "'");
    return *u;
  }

  std::string quoted() {
    if (i_ >= s_.size() || (s_[i_] != '"' && s_[i_] != '\''))
      fail("expected quoted value");
    char q = s_[i_++];
    std::size_t end = s_.find(q, i_);
    if (end == std::string_view::npos)
      fail("unterminated value");
    std::string v(s_.substr(i_, end - i_));
    i_ = end + 1;
    return v;
  }

  std::string_view s_;
  const PrefixResolver& resolve_;
  std::size_t i_ = 0;
};

} // namespace

AbsolutePath parse_path(std::string_view text, const PrefixResolver& resolve) {
  return PathParser(text, resolve).run();
}

bool step_matches(const PathStep& step, const Node& node) noexcept {
  if (!node.is_element() || node.name() != step.name)
    return false;
  if (!step.predicate)
    return true;
  const PathPredicate& p = *step.predicate;
  const std::string* v = node.attribute_value(p.attribute.ns, p.attribute.local);
  if (!v)
    return false;
  if (p.kind == PathPredicate::Kind::role_equals) {
    std::string_view suffix = std::string_view(p.value).substr(3); // drop "..."
    return v->size() >= suffix.size() && v->compare(v->size() - suffix.size(), suffix.size(), suffix) == 0;
  }
  return *v == p.value;
}

std::vector<const Node*> evaluate_path(const Document& doc, const AbsolutePath& path) {
  std::vector<const Node*> current;
  if (path.steps.empty() || !step_matches(path.steps[0], doc.root()))
    return current;
  current.push_back(&doc.root());
  for (std::size_t s = 1; s < path.steps.size() && !current.empty(); ++s) {
    std::vector<const Node*> next;
    for (const Node* n : current)
      for (std::size_t i = 0; i < n->child_count(); ++i)
        if (step_matches(path.steps[s], n->child(i)))
          next.push_back(&n->child(i));
    current = std::move(next);
  }
  return current;
}

bool matches_path(const Node& node, const AbsolutePath& path) noexcept {
  const Node* n = &node;
  for (std::size_t s = path.steps.size(); s-- > 0;) {
    if (!n || !step_matches(path.steps[s], *n))
      return false;
    n = n->parent();
  }
  return n == nullptr;
}

AbsolutePath path_to(const Document& doc, const Node& node) {
  if (!node.is_element() || !doc.contains(node))
    throw Error(ErrorCode::node_not_in_document, "path_to: element is not part of the document");
  std::vector<const Node*> chain;
  for (const Node* n = &node; n; n = n->parent())
    chain.push_back(n);
  AbsolutePath path;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it)
    path.steps.push_back({(*it)->prefix(), (*it)->name(), std::nullopt});
  if (evaluate_path(doc, path).size() == 1)
    return path;
  const std::string* id = wsu_id(node);
  if (id) {
    const Node* ctx = &node;
    PathPredicate pred;
    pred.attribute = QName{std::string(ns::wsu), "Id"};
    pred.prefix = "wsu";
    for (const auto& a : ctx->attributes())
      if (a.name == pred.attribute)
        pred.prefix = a.prefix;
    pred.value = *id;
    path.steps.back().predicate = pred;
    if (evaluate_path(doc, path).size() == 1)
      return path;
  }
  throw Error(ErrorCode::invalid_argument, "path_to: no unambiguous absolute path for element '" +
                                               node.qualified_name() + "'");
}

std::size_t count_descendants(const Node& node) noexcept {
  std::size_t n = 0;
  for (std::size_t i = 0; i < node.child_count(); ++i) {
    const Node& c = node.child(i);
    if (c.is_element())
      n += 1 + count_descendants(c);
  }
  return n;
}

} // namespace soapguard::xml
