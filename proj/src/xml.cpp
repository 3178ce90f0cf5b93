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

#include "xml.hpp"

#include "error.hpp"
#include "names.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>

namespace soapguard::xml {

std::string Attribute::qualified_name() const {
  return prefix.empty() ? name.local : prefix + ":" + name.local;
}

std::string Node::qualified_name() const {
  return prefix_.empty() ? name_.local : prefix_ + ":" + name_.local;
}

const Attribute* Node::find_attribute(std::string_view uri, std::string_view local) const noexcept {
  for (const auto& a : attributes_)
    if (a.name.local == local && a.name.ns == uri)
      return &a;
  return nullptr;
}

const std::string* Node::attribute_value(std::string_view uri, std::string_view local) const noexcept {
  const Attribute* a = find_attribute(uri, local);
  return a ? &a->value : nullptr;
}

void Node::set_attribute(std::string prefix, QName name, std::string value) {
  for (auto& a : attributes_) {
    if (a.name == name) {
      a.value = std::move(value);
      return;
    }
  }
  attributes_.push_back({std::move(prefix), std::move(name), std::move(value)});
}

bool Node::remove_attribute(std::string_view uri, std::string_view local) {
  auto it = std::find_if(attributes_.begin(), attributes_.end(), [&](const Attribute& a) {
    return a.name.local == local && a.name.ns == uri;
  });
  if (it == attributes_.end())
    return false;
  attributes_.erase(it);
  return true;
}

void Node::declare_namespace(std::string prefix, std::string uri) {
  for (auto& d : namespaces_) {
    if (d.prefix == prefix) {
      d.uri = std::move(uri);
      return;
    }
  }
  namespaces_.push_back({std::move(prefix), std::move(uri)});
}

std::vector<const Node*> Node::element_children() const {
  std::vector<const Node*> out;
  for (const auto& c : children_)
    if (c->is_element())
      out.push_back(c.get());
  return out;
}

std::vector<Node*> Node::element_children() {
  std::vector<Node*> out;
  for (auto& c : children_)
    if (c->is_element())
      out.push_back(c.get());
  return out;
}

const Node* Node::first_child_element(std::string_view uri, std::string_view local) const {
  for (const auto& c : children_)
    if (c->is(uri, local))
      return c.get();
  return nullptr;
}

Node* Node::first_child_element(std::string_view uri, std::string_view local) {
  for (auto& c : children_)
    if (c->is(uri, local))
      return c.get();
  return nullptr;
}

std::size_t Node::index_in_parent() const {
  if (!parent_)
    return 0;
  const auto& siblings = parent_->children_;
  for (std::size_t i = 0; i < siblings.size(); ++i)
    if (siblings[i].get() == this)
      return i;
  return 0;
}

std::string Node::text_content() const {
  if (is_text())
    return text_;
  std::string out;
  for (const auto& c : children_)
    if (c->is_text())
      out += c->text_;
  return out;
}

const std::string* Node::lookup_namespace(std::string_view prefix) const noexcept {
  for (const Node* n = this; n; n = n->parent_) {
    for (const auto& d : n->namespaces_)
      if (d.prefix == prefix)
        return &d.uri;
  }
  return nullptr;
}

Document::Document(std::unique_ptr<Node> root, std::uint64_t next_id)
    : root_(std::move(root)), next_id_(next_id) {}

Document Document::with_root(std::string prefix, std::string ns, std::string local) {
  std::unique_ptr<Node> root(new Node(NodeKind::element, static_cast<NodeId>(1)));
  root->prefix_ = std::move(prefix);
  root->name_ = QName{std::move(ns), std::move(local)};
  return Document(std::move(root), 2);
}

Document::Document(const Document& other)
    : root_(nullptr), next_id_(other.next_id_) {
  root_ = clone(*other.root_, nullptr, true);
}

Document& Document::operator=(const Document& other) {
  if (this != &other) {
    next_id_ = other.next_id_;
    root_ = clone(*other.root_, nullptr, true);
  }
  return *this;
}

std::unique_ptr<Node> Document::clone(const Node& src, Node* parent, bool keep_ids) {
  std::unique_ptr<Node> n(
      new Node(src.kind_, keep_ids ? src.id_ : static_cast<NodeId>(next_id_++)));
  n->parent_ = parent;
  n->prefix_ = src.prefix_;
  n->name_ = src.name_;
  n->namespaces_ = src.namespaces_;
  n->attributes_ = src.attributes_;
  n->text_ = src.text_;
  n->children_.reserve(src.children_.size());
  for (const auto& c : src.children_)
    n->children_.push_back(clone(*c, n.get(), keep_ids));
  return n;
}

std::unique_ptr<Node> Document::create_element(std::string prefix, std::string ns,
                                               std::string local) {
  std::unique_ptr<Node> n(new Node(NodeKind::element, static_cast<NodeId>(next_id_++)));
  n->prefix_ = std::move(prefix);
  n->name_ = QName{std::move(ns), std::move(local)};
  return n;
}

std::unique_ptr<Node> Document::create_text(std::string text) {
  std::unique_ptr<Node> n(new Node(NodeKind::text, static_cast<NodeId>(next_id_++)));
  n->text_ = std::move(text);
  return n;
}

std::unique_ptr<Node> Document::import_subtree(const Node& source) {
  return clone(source, nullptr, false);
}

Node& Document::append_child(Node& parent, std::unique_ptr<Node> child) {
  return insert_child(parent, parent.children_.size(), std::move(child));
}

Node& Document::insert_child(Node& parent, std::size_t index, std::unique_ptr<Node> child) {
  if (!parent.is_element())
    throw Error(ErrorCode::invalid_argument, "cannot add children to a text node");
  index = std::min(index, parent.children_.size());
  child->parent_ = &parent;
  Node& ref = *child;
  parent.children_.insert(parent.children_.begin() + static_cast<std::ptrdiff_t>(index),
                          std::move(child));
  return ref;
}

std::unique_ptr<Node> Document::detach(Node& node) {
  if (!node.parent_)
    throw Error(ErrorCode::invalid_argument, "cannot detach the document root");
  auto& siblings = node.parent_->children_;
  auto it = std::find_if(siblings.begin(), siblings.end(),
                         [&](const std::unique_ptr<Node>& p) { return p.get() == &node; });
  if (it == siblings.end())
    throw Error(ErrorCode::node_not_in_document, "node is not attached to its parent");
  std::unique_ptr<Node> out = std::move(*it);
  siblings.erase(it);
  out->parent_ = nullptr;
  return out;
}

bool walk(const Node& node, const std::function<bool(const Node&)>& visit) {
  if (!visit(node))
    return false;
  for (std::size_t i = 0; i < node.child_count(); ++i)
    if (!walk(node.child(i), visit))
      return false;
  return true;
}

const Node* Document::find(NodeId id) const noexcept {
  const Node* found = nullptr;
  walk(*root_, [&](const Node& n) {
    if (n.id() == id) {
      found = &n;
      return false;
    }
    return true;
  });
  return found;
}

Node* Document::find(NodeId id) noexcept {
  return const_cast<Node*>(static_cast<const Document*>(this)->find(id));
}

bool Document::contains(const Node& node) const noexcept {
  const Node* top = &node;
  while (top->parent())
    top = top->parent();
  return top == root_.get();
}

std::map<std::string, std::string> Document::declared_namespaces() const {
  std::map<std::string, std::string> out;
  walk(*root_, [&](const Node& n) {
    for (const auto& d : n.namespaces())
      out.emplace(d.prefix, d.uri);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
  explicit Parser(std::string_view in) : in_(in) {}

  Document run();

private:
  [[noreturn]] void fail(const std::string& reason) const { fail_at(pos_, reason); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& reason) const;

  bool eof() const noexcept { return pos_ >= in_.size(); }
  char peek() const noexcept { return eof() ? '\0' : in_[pos_]; }
  bool starts_with(std::string_view s) const noexcept { return in_.substr(pos_, s.size()) == s; }
  void expect(char c);
  void skip_ws() noexcept;
  std::string_view read_name();
  std::string read_attribute_value();
  void read_reference(std::string& out);
  void skip_prolog();
  void read_declaration();
  std::unique_ptr<Node> read_element(Node* parent);
  void read_text(Node& parent);

  std::unique_ptr<Node> make(NodeKind kind) {
    return std::unique_ptr<Node>(new Node(kind, static_cast<NodeId>(next_id_++)));
  }

  std::string_view in_;
  std::size_t pos_ = 0;
  std::uint64_t next_id_ = 1;
};

namespace {

bool is_ws(char c) noexcept { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_name_start(char c) noexcept {
  auto u = static_cast<unsigned char>(c);
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':' || u >= 0x80;
}

bool is_name_char(char c) noexcept {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::pair<std::string_view, std::string_view> split_qname(std::string_view qname) {
  auto colon = qname.find(':');
  if (colon == std::string_view::npos)
    return {{}, qname};
  return {qname.substr(0, colon), qname.substr(colon + 1)};
}

bool only_whitespace(std::string_view s) noexcept {
  return std::all_of(s.begin(), s.end(), is_ws);
}

} // namespace

void Parser::fail_at(std::size_t at, const std::string& reason) const {
  TextPosition p;
  p.offset = at;
  for (std::size_t i = 0; i < at && i < in_.size(); ++i) {
    if (in_[i] == '\n') {
      ++p.line;
      p.column = 1;
    } else {
      ++p.column;
    }
  }
  throw MalformedXml(p, reason);
}

void Parser::expect(char c) {
  if (peek() != c)
    fail(std::string("expected '") + c + "'");
  ++pos_;
}

void Parser::skip_ws() noexcept {
  while (!eof() && is_ws(in_[pos_]))
    ++pos_;
}

std::string_view Parser::read_name() {
  std::size_t start = pos_;
  if (eof() || !is_name_start(in_[pos_]))
    fail("expected a name");
  while (!eof() && is_name_char(in_[pos_]))
    ++pos_;
  std::string_view name = in_.substr(start, pos_ - start);
  auto colon = name.find(':');
  if (colon != std::string_view::npos &&
      (colon == 0 || colon + 1 == name.size() || name.find(':', colon + 1) != std::string_view::npos))
    fail_at(start, "invalid qualified name '" + std::string(name) + "'");
  return name;
}

void Parser::read_reference(std::string& out) {
  std::size_t start = pos_;
  ++pos_; // '&'
  std::size_t semi = in_.find(';', pos_);
  if (semi == std::string_view::npos || semi - pos_ > 10)
    fail_at(start, "unterminated character reference");
  std::string_view ref = in_.substr(pos_, semi - pos_);
  pos_ = semi + 1;
  if (ref == "lt") out += '<';
  else if (ref == "gt") out += '>';
  else if (ref == "amp") out += '&';
  else if (ref == "quot") out += '"';
  else if (ref == "apos") out += '\'';
  else if (ref.size() > 1 && ref[0] == '#') {
    std::uint32_t cp = 0;
    bool hex = ref[1] == 'x';
    std::string_view digits = ref.substr(hex ? 2 : 1);
    if (digits.empty())
      fail_at(start, "empty character reference");
    for (char c : digits) {
      int v;
      if (c >= '0' && c <= '9') v = c - '0';
      else if (hex && c >= 'a' && c <= 'f') v = c - 'a' + 10;
      else if (hex && c >= 'A' && c <= 'F') v = c - 'A' + 10;
      else fail_at(start, "invalid character reference");
      cp = cp * (hex ? 16u : 10u) + static_cast<std::uint32_t>(v);
      if (cp > 0x10FFFF)
        fail_at(start, "character reference out of range");
    }
    if (cp == 0)
      fail_at(start, "character reference to NUL");
    append_utf8(out, cp);
  } else {
    fail_at(start, "unknown entity '&" + std::string(ref) + ";' (entity expansion is not supported)");
  }
}

std::string Parser::read_attribute_value() {
  char quote = peek();
  if (quote != '"' && quote != '\'')
    fail("expected quoted attribute value");
  ++pos_;
  std::string out;
  while (true) {
    if (eof())
      fail("unterminated attribute value");
    char c = in_[pos_];
    if (c == quote) {
      ++pos_;
      break;
    }
    if (c == '<')
      fail("'<' not allowed in attribute value");
    if (c == '&') {
      read_reference(out);
      continue;
    }
    out += is_ws(c) ? ' ' : c;
    ++pos_;
  }
  return out;
}

// <?xml version="1.0" encoding="UTF-8" standalone="yes"?>, with encoding
// and standalone optional. Only XML 1.0 in UTF-8 is accepted.
void Parser::read_declaration() {
  pos_ += 5;
  auto pseudo_attribute = [&](std::string_view name, bool required) -> std::optional<std::string> {
    std::size_t save = pos_;
    std::size_t ws = pos_;
    while (pos_ < in_.size() && is_ws(in_[pos_]))
      ++pos_;
    if (pos_ == ws || !starts_with(name)) {
      if (required)
        fail("XML declaration needs " + std::string(name));
      pos_ = save;
      return std::nullopt;
    }
    pos_ += name.size();
    skip_ws();
    if (peek() != '=')
      fail("expected '=' in XML declaration");
    ++pos_;
    skip_ws();
    char quote = peek();
    if (quote != '"' && quote != '\'')
      fail("expected quoted value in XML declaration");
    std::size_t end = in_.find(quote, pos_ + 1);
    if (end == std::string_view::npos)
      fail("unterminated value in XML declaration");
    std::string value(in_.substr(pos_ + 1, end - pos_ - 1));
    pos_ = end + 1;
    return value;
  };
  if (*pseudo_attribute("version", true) != "1.0")
    fail("only XML version 1.0 is supported");
  if (auto enc = pseudo_attribute("encoding", false)) {
    std::string upper = *enc;
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
    if (upper != "UTF-8")
      fail("unsupported encoding '" + *enc + "'");
  }
  if (auto sa = pseudo_attribute("standalone", false); sa && *sa != "yes" && *sa != "no")
    fail("standalone must be yes or no");
  skip_ws();
  if (!starts_with("?>"))
    fail("malformed XML declaration");
  pos_ += 2;
}

void Parser::skip_prolog() {
  if (starts_with("\xEF\xBB\xBF"))
    pos_ += 3;
  if (starts_with("<?xml") && pos_ + 5 < in_.size() && (is_ws(in_[pos_ + 5]) || in_[pos_ + 5] == '?'))
    read_declaration();
  skip_ws();
  if (starts_with("<!DOCTYPE"))
    fail("document type declarations are not supported");
  if (starts_with("<!--"))
    fail("comments are not supported");
  if (starts_with("<?"))
    fail("processing instructions are not supported");
}

std::unique_ptr<Node> Parser::read_element(Node* parent) {
  std::size_t tag_start = pos_;
  expect('<');
  std::string_view qname = read_name();
  auto node = make(NodeKind::element);
  node->parent_ = parent;

  struct RawAttr {
    std::string_view qname;
    std::string value;
    std::size_t at;
  };
  std::vector<RawAttr> raw;
  bool self_closing = false;
  while (true) {
    bool had_ws = is_ws(peek());
    skip_ws();
    if (eof())
      fail("unterminated start tag");
    if (peek() == '/') {
      ++pos_;
      expect('>');
      self_closing = true;
      break;
    }
    if (peek() == '>') {
      ++pos_;
      break;
    }
    if (!had_ws)
      fail("expected whitespace before attribute");
    std::size_t at = pos_;
    std::string_view an = read_name();
    skip_ws();
    expect('=');
    skip_ws();
    std::string value = read_attribute_value();
    for (const auto& r : raw)
      if (r.qname == an)
        fail_at(at, "duplicate attribute '" + std::string(an) + "'");
    raw.push_back({an, std::move(value), at});
  }

  for (auto& r : raw) {
    if (r.qname == "xmlns") {
      node->namespaces_.push_back({"", std::move(r.value)});
    } else if (r.qname.substr(0, 6) == "xmlns:") {
      if (r.value.empty())
        fail_at(r.at, "namespace prefix cannot be undeclared");
      node->namespaces_.push_back({std::string(r.qname.substr(6)), std::move(r.value)});
    }
  }

  auto resolve = [&](std::string_view prefix, std::size_t at, bool is_attr) -> std::string {
    if (prefix == "xml")
      return std::string(ns::xml);
    if (prefix.empty() && is_attr)
      return {};
    const std::string* uri = node->lookup_namespace(prefix);
    if (!uri) {
      if (prefix.empty())
        return {};
      fail_at(at, "undeclared namespace prefix '" + std::string(prefix) + "'");
    }
    return *uri;
  };

  auto [eprefix, elocal] = split_qname(qname);
  node->prefix_ = std::string(eprefix);
  node->name_ = QName{resolve(eprefix, tag_start + 1, false), std::string(elocal)};

  for (auto& r : raw) {
    if (r.qname == "xmlns" || r.qname.substr(0, 6) == "xmlns:")
      continue;
    auto [p, l] = split_qname(r.qname);
    Attribute a{std::string(p), QName{resolve(p, r.at, true), std::string(l)}, std::move(r.value)};
    for (const auto& existing : node->attributes_)
      if (existing.name == a.name)
        fail_at(r.at, "duplicate attribute '" + a.name.local + "' in namespace '" + a.name.ns + "'");
    node->attributes_.push_back(std::move(a));
  }

  if (self_closing)
    return node;

  while (true) {
    if (eof())
      fail_at(tag_start, "element '" + std::string(qname) + "' is never closed");
    if (starts_with("</")) {
      std::size_t close_at = pos_;
      pos_ += 2;
      std::string_view closing = read_name();
      if (closing != qname)
        fail_at(close_at, "mismatched end tag: expected </" + std::string(qname) + "> but found </" +
                              std::string(closing) + ">");
      skip_ws();
      expect('>');
      return node;
    }
    if (starts_with("<!--"))
      fail("comments are not supported");
    if (starts_with("<!DOCTYPE"))
      fail("document type declarations are not supported");
    if (starts_with("<?"))
      fail("processing instructions are not supported");
    if (starts_with("<![CDATA[")) {
      std::size_t end = in_.find("]]>", pos_ + 9);
      if (end == std::string_view::npos)
        fail("unterminated CDATA section");
      auto t = make(NodeKind::text);
      t->text_ = std::string(in_.substr(pos_ + 9, end - pos_ - 9));
      t->parent_ = node.get();
      pos_ = end + 3;
      if (!node->children_.empty() && node->children_.back()->is_text())
        node->children_.back()->text_ += t->text_;
      else
        node->children_.push_back(std::move(t));
      continue;
    }
    if (peek() == '<') {
      node->children_.push_back(read_element(node.get()));
      continue;
    }
    read_text(*node);
  }
}

void Parser::read_text(Node& parent) {
  std::string text;
  while (!eof() && in_[pos_] != '<') {
    if (in_[pos_] == '&') {
      read_reference(text);
      continue;
    }
    if (in_[pos_] == '>' && pos_ >= 2 && in_.substr(pos_ - 2, 3) == "]]>")
      fail("']]>' not allowed in character data");
    text += in_[pos_++];
  }
  if (!parent.children_.empty() && parent.children_.back()->is_text()) {
    parent.children_.back()->text_ += text;
    return;
  }
  if (only_whitespace(text))
    return;
  auto t = make(NodeKind::text);
  t->text_ = std::move(text);
  t->parent_ = &parent;
  parent.children_.push_back(std::move(t));
}

Document Parser::run() {
  skip_prolog();
  if (peek() != '<')
    fail(eof() ? "document has no root element" : "content before the root element");
  auto root = read_element(nullptr);
  skip_ws();
  if (!eof()) {
    if (starts_with("<!--"))
      fail("comments are not supported");
    if (starts_with("<?"))
      fail("processing instructions are not supported");
    fail("content after the root element");
  }
  return Document(std::move(root), next_id_);
}

Document parse(std::string_view input) { return Parser(input).run(); }

// ---------------------------------------------------------------------------
// Serializer

namespace {

void escape_into(std::string& out, std::string_view s, bool attribute) {
  for (char c : s) {
    switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"':
      if (attribute) out += "&quot;";
      else out += c;
      break;
    default: out += c;
    }
  }
}

class Writer {
public:
  Writer(std::string& out, const SerializeOptions& opt) : out_(out), opt_(opt) {}

  void element(const Node& n, int depth) {
    std::size_t scope_mark = scope_.size();
    out_ += '<';
    out_ += n.qualified_name();
    for (const auto& d : n.namespaces()) {
      write_decl(d.prefix, d.uri);
      scope_.push_back({d.prefix, d.uri});
    }
    // Declare any prefix the element or its attributes use that is not in
    // scope with the right URI, so edited trees always serialise to
    // namespace-well-formed XML.
    ensure(n.prefix(), n.name().ns, true);
    for (const auto& a : n.attributes())
      if (!a.prefix.empty() && a.prefix != "xml")
        ensure(a.prefix, a.name.ns, false);
    for (const auto& a : n.attributes()) {
      out_ += ' ';
      out_ += a.qualified_name();
      out_ += "=\"";
      escape_into(out_, a.value, true);
      out_ += '"';
    }
    if (n.child_count() == 0) {
      out_ += "></";
      out_ += n.qualified_name();
      out_ += '>';
      scope_.resize(scope_mark);
      return;
    }
    out_ += '>';
    bool mixed = false;
    for (std::size_t i = 0; i < n.child_count(); ++i)
      mixed = mixed || n.child(i).is_text();
    bool pretty = opt_.indent > 0 && !mixed;
    for (std::size_t i = 0; i < n.child_count(); ++i) {
      const Node& c = n.child(i);
      if (pretty)
        newline(depth + 1);
      if (c.is_text())
        escape_into(out_, c.text(), false);
      else
        element(c, depth + 1);
    }
    if (pretty)
      newline(depth);
    out_ += "</";
    out_ += n.qualified_name();
    out_ += '>';
    scope_.resize(scope_mark);
  }

private:
  const std::string* in_scope(std::string_view prefix) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->prefix == prefix)
        return &it->uri;
    return nullptr;
  }

  void ensure(const std::string& prefix, const std::string& uri, bool element) {
    const std::string* cur = in_scope(prefix);
    if (cur ? *cur == uri : (uri.empty() || (!element && prefix.empty())))
      return;
    write_decl(prefix, uri);
    scope_.push_back({prefix, uri});
  }

  void write_decl(const std::string& prefix, const std::string& uri) {
    out_ += prefix.empty() ? " xmlns" : " xmlns:" + prefix;
    out_ += "=\"";
    escape_into(out_, uri, true);
    out_ += '"';
  }

  void newline(int depth) {
    out_ += '\n';
    out_.append(static_cast<std::size_t>(depth * opt_.indent), ' ');
  }

  std::string& out_;
  const SerializeOptions& opt_;
  std::vector<NamespaceDecl> scope_;
};

} // namespace

std::string serialize(const Node& node, const SerializeOptions& options) {
  std::string out;
  if (options.xml_declaration)
    out += options.indent > 0 ? "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                              : "<?xml version=\"1.0\" encoding=\"UTF-8\"?>";
  if (node.is_text()) {
    escape_into(out, node.text(), false);
    return out;
  }
  Writer(out, options).element(node, 0);
  if (options.indent > 0)
    out += '\n';
  return out;
}

std::string serialize(const Document& doc, const SerializeOptions& options) {
  return serialize(doc.root(), options);
}

Document load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::io, "cannot open '" + path + "' for reading");
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse(data);
}

void save_file(const std::string& path, const Document& doc, const SerializeOptions& options) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error(ErrorCode::io, "cannot open '" + path + "' for writing");
  std::string data = serialize(doc, options);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out)
    throw Error(ErrorCode::io, "failed writing '" + path + "'");
}

} // namespace soapguard::xml
