/*
   Copyright 2026 The s2nbar authors

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

// Minimal DOM on top of expat, tailored to Sentinel-2 metadata documents.
// Element and attribute names are reduced to their local part (namespace
// prefixes stripped) so lookups work against any n1:/gml: prefixing.

#ifndef S2NBAR_XML_DOM_HPP
#define S2NBAR_XML_DOM_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace s2nbar::xml {

struct node {
    std::string name;  // local name
    std::vector<std::pair<std::string, std::string>> attrs;
    std::vector<node> children;
    std::string text;  // concatenated character data of this element only

    std::optional<std::string_view> attr(std::string_view key) const;

    /// First direct child with the given local name, or nullptr.
    const node* child(std::string_view local_name) const;

    /// First descendant (document order, self excluded) with the local name.
    const node* find(std::string_view local_name) const;

    /// All descendants with the local name, document order.
    std::vector<const node*> find_all(std::string_view local_name) const;
};

/// Parses a whole document; throws s2nbar::error(errc::malformed_xml) with
/// the expat diagnostic and line number on failure.
node parse(std::string_view bytes);

}  // namespace s2nbar::xml

#endif
