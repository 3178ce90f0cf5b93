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

#include "c14n.hpp"

#include "error.hpp"
#include "names.hpp"

#include <algorithm>

namespace soapguard::xml {

namespace {

struct Binding {
  std::string_view prefix;
  std::string_view uri;
};

bool is_ws(char c) noexcept { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

// Prefixes named in a restricted location path: "p" in "/p:a" and in
// "[@p:attr=...]".
std::vector<std::string> path_prefixes(std::string_view text) {
  std::vector<std::string> out;
  auto take = [&](std::size_t from, std::size_t stop) {
    std::size_t colon = text.find(':', from);
    if (colon != std::string_view::npos && colon < stop && colon > from)
      out.emplace_back(text.substr(from, colon - from));
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '/') {
      std::size_t stop = text.find_first_of("/[", i + 1);
      take(i + 1, stop == std::string_view::npos ? text.size() : stop);
    } else if (text[i] == '@') {
      std::size_t stop = text.find('=', i + 1);
      take(i + 1, stop == std::string_view::npos ? text.size() : stop);
    }
  }
  return out;
}

const NamespaceDecl* find_declaration(const Node& n, std::string_view prefix) {
  for (const Node* a = &n; a; a = a->parent())
    for (const auto& d : a->namespaces())
      if (d.prefix == prefix)
        return &d;
  return nullptr;
}

void escape(std::string& out, std::string_view s, bool attribute) {
  std::size_t run = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char* rep = nullptr;
    switch (s[i]) {
    case '&': rep = "&amp;"; break;
    case '<': rep = "&lt;"; break;
    case '>': rep = "&gt;"; break;
    case '"': rep = attribute ? "&quot;" : nullptr; break;
    default: break;
    }
    if (rep) {
      out.append(s.substr(run, i - run));
      out += rep;
      run = i + 1;
    }
  }
  out.append(s.substr(run));
}

void normalized_text(std::string& out, std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_ws(s[b]))
    ++b;
  while (e > b && is_ws(s[e - 1]))
    --e;
  std::string collapsed;
  collapsed.reserve(e - b);
  bool in_ws = false;
  for (std::size_t i = b; i < e; ++i) {
    if (is_ws(s[i])) {
      if (!in_ws)
        collapsed += ' ';
      in_ws = true;
    } else {
      collapsed += s[i];
      in_ws = false;
    }
  }
  escape(out, collapsed, false);
}

class Canonicalizer {
public:
  Canonicalizer(std::string& out, std::span<const NodeId> excluded) : out_(out), excluded_(excluded) {}

  void node(const Node& n) {
    if (is_excluded(n))
      return;
    if (n.is_text()) {
      normalized_text(out_, n.text());
      return;
    }
    element(n);
  }

private:
  bool is_excluded(const Node& n) const noexcept {
    return !excluded_.empty() &&
           std::find(excluded_.begin(), excluded_.end(), n.id()) != excluded_.end();
  }

  const std::string_view* rendered(std::string_view prefix) const noexcept {
    for (auto it = rendered_.rbegin(); it != rendered_.rend(); ++it)
      if (it->prefix == prefix)
        return &it->uri;
    return nullptr;
  }

  void element(const Node& n) {
    std::size_t mark = rendered_.size();

    // Visibly utilised bindings that are not rendered yet.
    needed_.clear();
    auto need = [&](std::string_view prefix, std::string_view uri) {
      const std::string_view* cur = rendered(prefix);
      if (cur ? *cur == uri : uri.empty())
        return;
      for (const auto& b : needed_)
        if (b.prefix == prefix)
          return;
      needed_.push_back({prefix, uri});
    };
    need(n.prefix(), n.name().ns);
    for (const auto& a : n.attributes())
      if (!a.prefix.empty() && a.prefix != "xml")
        need(a.prefix, a.name.ns);
    // The prefixes of an XPath filter expression are part of what it means,
    // so they are rendered as if the element used them.
    if (n.is(ns::ds, "XPath"))
      for (const std::string& p : path_prefixes(n.text_content()))
        if (const NamespaceDecl* d = find_declaration(n, p))
          need(d->prefix, d->uri);
    std::sort(needed_.begin(), needed_.end(),
              [](const Binding& x, const Binding& y) { return x.prefix < y.prefix; });

    out_ += '<';
    if (!n.prefix().empty()) {
      out_ += n.prefix();
      out_ += ':';
    }
    out_ += n.name().local;
    for (const auto& b : needed_) {
      if (b.prefix.empty()) {
        out_ += " xmlns=\"";
      } else {
        out_ += " xmlns:";
        out_ += b.prefix;
        out_ += "=\"";
      }
      escape(out_, b.uri, true);
      out_ += '"';
      rendered_.push_back(b);
    }

    const auto& attrs = n.attributes();
    if (attrs.size() == 1) {
      attribute(attrs[0]);
    } else if (!attrs.empty()) {
      std::vector<const Attribute*> sorted;
      sorted.reserve(attrs.size());
      for (const auto& a : attrs)
        sorted.push_back(&a);
      std::sort(sorted.begin(), sorted.end(),
                [](const Attribute* x, const Attribute* y) { return x->name < y->name; });
      for (const Attribute* a : sorted)
        attribute(*a);
    }
    out_ += '>';
    for (std::size_t i = 0; i < n.child_count(); ++i)
      node(n.child(i));
    out_ += "</";
    if (!n.prefix().empty()) {
      out_ += n.prefix();
      out_ += ':';
    }
    out_ += n.name().local;
    out_ += '>';
    rendered_.resize(mark);
  }

  void attribute(const Attribute& a) {
    out_ += ' ';
    if (!a.prefix.empty()) {
      out_ += a.prefix;
      out_ += ':';
    }
    out_ += a.name.local;
    out_ += "=\"";
    escape(out_, a.value, true);
    out_ += '"';
  }

  std::string& out_;
  std::span<const NodeId> excluded_;
  std::vector<Binding> rendered_;
  std::vector<Binding> needed_;
};

} // namespace

void canonicalize_into(std::string& out, const Node& node, std::span<const NodeId> excluded) {
  Canonicalizer(out, excluded).node(node);
}

std::string canonicalize(const Node& node, const Document& doc, std::span<const NodeId> excluded) {
  if (!doc.contains(node))
    throw Error(ErrorCode::node_not_in_document, "canonicalize: node does not belong to the document");
  std::string out;
  canonicalize_into(out, node, excluded);
  return out;
}

} // namespace soapguard::xml
