// Copyright 2026 The crisp Authors
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

#include "crisp/mjcf/xml.hpp"

#include <cctype>

#include "crisp/errors.hpp"

namespace crisp::mjcf {

const std::string* XmlNode::attribute(std::string_view name) const {
  for (const auto& [key, value] : attributes) {
    if (key == name) return &value;
  }
  return nullptr;
}

const XmlNode* XmlNode::first_child(std::string_view tag_name) const {
  for (const auto& child : children) {
    if (child.tag == tag_name) return &child;
  }
  return nullptr;
}

std::vector<const XmlNode*> XmlNode::children_named(
    std::string_view tag_name) const {
  std::vector<const XmlNode*> out;
  for (const auto& child : children) {
    if (child.tag == tag_name) out.push_back(&child);
  }
  return out;
}

namespace {

bool is_name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}

bool is_name_char(char c) {
  return is_name_start(c) || std::isdigit(static_cast<unsigned char>(c)) ||
         c == '-' || c == '.';
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  XmlNode parse_document() {
    skip_misc();
    if (at_end()) fail("document contains no root element");
    XmlNode root = parse_element();
    skip_misc();
    if (!at_end()) fail("trailing content after root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::kMalformedXml,
                what + " (line " + std::to_string(line_) + ")");
  }

  bool at_end() const { return pos_ >= text_.size(); }

  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  bool consume(std::string_view token) {
    if (text_.substr(pos_, token.size()) != token) return false;
    for (size_t i = 0; i < token.size(); ++i) advance();
    return true;
  }

  void skip_whitespace() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) {
      advance();
    }
  }

  void skip_until(std::string_view terminator, const char* what) {
    while (!at_end()) {
      if (consume(terminator)) return;
      advance();
    }
    fail(std::string("unterminated ") + what);
  }

  // Skips whitespace, comments, PIs and DOCTYPE between elements.
  void skip_misc() {
    for (;;) {
      skip_whitespace();
      if (text_.substr(pos_, 4) == "<!--") {
        consume("<!--");
        skip_until("-->", "comment");
      } else if (text_.substr(pos_, 2) == "<?") {
        consume("<?");
        skip_until("?>", "processing instruction");
      } else if (text_.substr(pos_, 9) == "<!DOCTYPE") {
        consume("<!DOCTYPE");
        skip_until(">", "DOCTYPE declaration");
      } else {
        return;
      }
    }
  }

  std::string parse_name() {
    if (at_end() || !is_name_start(peek())) fail("expected a name");
    std::string name;
    while (!at_end() && is_name_char(peek())) name.push_back(advance());
    return name;
  }

  std::string parse_attribute_value() {
    if (peek() != '"' && peek() != '\'') fail("expected quoted value");
    const char quote = advance();
    std::string value;
    for (;;) {
      if (at_end()) fail("unterminated attribute value");
      char c = advance();
      if (c == quote) break;
      if (c == '<') fail("'<' in attribute value");
      if (c == '&') {
        value += parse_entity();
      } else {
        value.push_back(c);
      }
    }
    return value;
  }

  std::string parse_entity() {
    std::string entity;
    while (!at_end() && peek() != ';' && entity.size() < 8) {
      entity.push_back(advance());
    }
    if (at_end() || peek() != ';') fail("unterminated entity reference");
    advance();
    if (entity == "lt") return "<";
    if (entity == "gt") return ">";
    if (entity == "amp") return "&";
    if (entity == "quot") return "\"";
    if (entity == "apos") return "'";
    fail("unknown entity '&" + entity + ";'");
  }

  XmlNode parse_element() {
    if (peek() != '<') fail("expected '<'");
    XmlNode node;
    node.line = line_;
    advance();
    node.tag = parse_name();

    for (;;) {
      skip_whitespace();
      if (at_end()) fail("unterminated start tag <" + node.tag + ">");
      if (peek() == '>') {
        advance();
        parse_children(node);
        return node;
      }
      if (consume("/>")) return node;
      std::string key = parse_name();
      skip_whitespace();
      if (peek() != '=') fail("expected '=' after attribute '" + key + "'");
      advance();
      skip_whitespace();
      std::string value = parse_attribute_value();
      for (const auto& [existing, unused] : node.attributes) {
        if (existing == key) {
          fail("duplicate attribute '" + key + "' on <" + node.tag + ">");
        }
      }
      node.attributes.emplace_back(std::move(key), std::move(value));
    }
  }

  void parse_children(XmlNode& node) {
    for (;;) {
      // Text content is scanned for markup and otherwise dropped.
      while (!at_end() && peek() != '<') {
        if (peek() == '&') {
          advance();
          parse_entity();
        } else {
          advance();
        }
      }
      if (at_end()) fail("missing closing tag </" + node.tag + ">");
      if (text_.substr(pos_, 4) == "<!--") {
        consume("<!--");
        skip_until("-->", "comment");
        continue;
      }
      if (text_.substr(pos_, 9) == "<![CDATA[") {
        consume("<![CDATA[");
        skip_until("]]>", "CDATA section");
        continue;
      }
      if (text_.substr(pos_, 2) == "</") {
        consume("</");
        std::string closing = parse_name();
        if (closing != node.tag) {
          fail("mismatched closing tag </" + closing + "> for <" + node.tag +
               ">");
        }
        skip_whitespace();
        if (peek() != '>') fail("malformed closing tag </" + closing + ">");
        advance();
        return;
      }
      node.children.push_back(parse_element());
    }
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace

XmlNode parse_xml(std::string_view text) { return Reader(text).parse_document(); }

}  // namespace crisp::mjcf
