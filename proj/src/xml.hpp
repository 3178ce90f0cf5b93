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

#ifndef SOAPGUARD_XML_HPP
#define SOAPGUARD_XML_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace soapguard::xml {

/// Identity token of a node. Stable across edits and preserved by
/// Document copies, so a node can be traced from an original document into
/// a transformed copy.
enum class NodeId : std::uint64_t {};

enum class NodeKind { element, text };

struct QName {
  std::string ns;
  std::string local;

  friend bool operator==(const QName&, const QName&) = default;
  friend auto operator<=>(const QName&, const QName&) = default;

  bool is(std::string_view uri, std::string_view name) const noexcept {
    return local == name && ns == uri;
  }
};

struct Attribute {
  std::string prefix;
  QName name;
  std::string value;

  std::string qualified_name() const;
};

struct NamespaceDecl {
  std::string prefix; // empty for the default namespace
  std::string uri;

  friend bool operator==(const NamespaceDecl&, const NamespaceDecl&) = default;
};

class Document;

class Node {
public:
  NodeKind kind() const noexcept { return kind_; }
  bool is_element() const noexcept { return kind_ == NodeKind::element; }
  bool is_text() const noexcept { return kind_ == NodeKind::text; }
  NodeId id() const noexcept { return id_; }
  const Node* parent() const noexcept { return parent_; }
  Node* parent() noexcept { return parent_; }

  // Element accessors.
  const std::string& prefix() const noexcept { return prefix_; }
  const QName& name() const noexcept { return name_; }
  std::string qualified_name() const;
  bool is(std::string_view uri, std::string_view local) const noexcept {
    return is_element() && name_.is(uri, local);
  }

  const std::vector<NamespaceDecl>& namespaces() const noexcept { return namespaces_; }
  const std::vector<Attribute>& attributes() const noexcept { return attributes_; }
  const Attribute* find_attribute(std::string_view uri, std::string_view local) const noexcept;
  const std::string* attribute_value(std::string_view uri, std::string_view local) const noexcept;

  // Adds the attribute or overwrites the value of an existing one with the
  // same expanded name.
  void set_attribute(std::string prefix, QName name, std::string value);
  bool remove_attribute(std::string_view uri, std::string_view local);
  void declare_namespace(std::string prefix, std::string uri);

  std::size_t child_count() const noexcept { return children_.size(); }
  const Node& child(std::size_t i) const { return *children_[i]; }
  Node& child(std::size_t i) { return *children_[i]; }
  std::vector<const Node*> element_children() const;
  std::vector<Node*> element_children();
  const Node* first_child_element(std::string_view uri, std::string_view local) const;
  Node* first_child_element(std::string_view uri, std::string_view local);
  std::size_t index_in_parent() const;

  // Text accessors.
  const std::string& text() const noexcept { return text_; }
  void set_text(std::string text) { text_ = std::move(text); }

  // Concatenated text of the direct text children of an element.
  std::string text_content() const;

  // Resolves a prefix against the declarations of this element and its
  // ancestors. Returns nullptr when the prefix is not in scope.
  const std::string* lookup_namespace(std::string_view prefix) const noexcept;

private:
  friend class Document;
  friend class Parser;

  Node(NodeKind kind, NodeId id) : kind_(kind), id_(id) {}

  NodeKind kind_;
  NodeId id_;
  Node* parent_ = nullptr;
  std::string prefix_;
  QName name_;
  std::vector<NamespaceDecl> namespaces_;
  std::vector<Attribute> attributes_;
  std::vector<std::unique_ptr<Node>> children_;
  std::string text_;
};

/// An ordered element tree with exactly one root. Copying a document copies
/// the whole tree and keeps every node id.
class Document {
public:
  explicit Document(std::unique_ptr<Node> root, std::uint64_t next_id);
  // Document holding a single empty root element.
  static Document with_root(std::string prefix, std::string ns, std::string local);
  Document(const Document& other);
  Document& operator=(const Document& other);
  Document(Document&&) noexcept = default;
  Document& operator=(Document&&) noexcept = default;
  ~Document() = default;

  const Node& root() const noexcept { return *root_; }
  Node& root() noexcept { return *root_; }

  std::unique_ptr<Node> create_element(std::string prefix, std::string ns, std::string local);
  std::unique_ptr<Node> create_text(std::string text);

  // Deep copy of a subtree, possibly from another document. The copy gets
  // fresh ids from this document.
  std::unique_ptr<Node> import_subtree(const Node& source);

  Node& append_child(Node& parent, std::unique_ptr<Node> child);
  Node& insert_child(Node& parent, std::size_t index, std::unique_ptr<Node> child);
  std::unique_ptr<Node> detach(Node& node);

  // Node lookup by id; linear in the document size.
  const Node* find(NodeId id) const noexcept;
  Node* find(NodeId id) noexcept;
  bool contains(const Node& node) const noexcept;

  // Union of all prefix declarations in the tree. When a prefix is declared
  // more than once the first declaration in document order wins.
  std::map<std::string, std::string> declared_namespaces() const;

  std::uint64_t next_id() const noexcept { return next_id_; }

private:
  std::unique_ptr<Node> clone(const Node& src, Node* parent, bool keep_ids);

  std::unique_ptr<Node> root_;
  std::uint64_t next_id_;
};

/// Visits nodes in document order (pre-order). The visitor returns false to
/// stop the walk early; walk() then returns false as well.
bool walk(const Node& node, const std::function<bool(const Node&)>& visit);

Document parse(std::string_view input);

struct SerializeOptions {
  bool xml_declaration = false;
  int indent = 0; // spaces per level; 0 writes everything on one line
};

std::string serialize(const Document& doc, const SerializeOptions& options = {});
std::string serialize(const Node& node, const SerializeOptions& options = {});

Document load_file(const std::string& path);
void save_file(const std::string& path, const Document& doc, const SerializeOptions& options);

} // namespace soapguard::xml

#endif
