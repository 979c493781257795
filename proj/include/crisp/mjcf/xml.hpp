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

#ifndef CRISP_MJCF_XML_HPP_
#define CRISP_MJCF_XML_HPP_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace crisp::mjcf {

// A parsed XML element. Text content is discarded: robot description files
// carry everything in attributes. Attribute order and child order match the
// document. `line` is 1-based and points at the element's opening '<'.
struct XmlNode {
  std::string tag;
  int line = 0;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<XmlNode> children;

  const std::string* attribute(std::string_view name) const;
  const XmlNode* first_child(std::string_view tag_name) const;
  std::vector<const XmlNode*> children_named(std::string_view tag_name) const;
};

// Parses a standalone XML document and returns its root element.
// Supports elements, attributes (single or double quoted, with the five
// predefined entities), comments, processing instructions, DOCTYPE and
// CDATA sections. Throws Error(kMalformedXml) with a line number otherwise.
XmlNode parse_xml(std::string_view text);

}  // namespace crisp::mjcf

#endif  // CRISP_MJCF_XML_HPP_
