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

#include "xml_dom.hpp"

#include <expat.h>

#include <cstring>

#include "s2nbar/errors.hpp"

namespace s2nbar::xml {

namespace {

std::string local_name(const char* qualified) {
    const char* colon = std::strrchr(qualified, ':');
    return colon ? std::string(colon + 1) : std::string(qualified);
}

struct builder {
    node root;                  // synthetic container; document element is its only child
    std::vector<node*> stack;   // open elements

    static void XMLCALL on_start(void* user, const XML_Char* name, const XML_Char** atts) {
        auto* b = static_cast<builder*>(user);
        node& parent = *b->stack.back();
        node& n = parent.children.emplace_back();
        n.name = local_name(name);
        for (const XML_Char** a = atts; a && *a; a += 2) {
            n.attrs.emplace_back(local_name(a[0]), a[1]);
        }
        b->stack.push_back(&n);
    }

    static void XMLCALL on_end(void* user, const XML_Char*) {
        static_cast<builder*>(user)->stack.pop_back();
    }

    static void XMLCALL on_text(void* user, const XML_Char* s, int len) {
        auto* b = static_cast<builder*>(user);
        b->stack.back()->text.append(s, static_cast<std::size_t>(len));
    }
};

}  // namespace

node parse(std::string_view bytes) {
    if (bytes.empty()) fail(errc::malformed_xml, "empty document");

    XML_Parser parser = XML_ParserCreate(nullptr);
    if (!parser) fail(errc::malformed_xml, "could not create parser");

    builder b;
    b.stack.push_back(&b.root);
    XML_SetUserData(parser, &b);
    XML_SetElementHandler(parser, builder::on_start, builder::on_end);
    XML_SetCharacterDataHandler(parser, builder::on_text);

    const XML_Status status =
        XML_Parse(parser, bytes.data(), static_cast<int>(bytes.size()), /*isFinal=*/1);
    if (status != XML_STATUS_OK) {
        std::string what = XML_ErrorString(XML_GetErrorCode(parser));
        what += " at line " + std::to_string(XML_GetCurrentLineNumber(parser));
        XML_ParserFree(parser);
        fail(errc::malformed_xml, what);
    }
    XML_ParserFree(parser);

    if (b.root.children.size() != 1) fail(errc::malformed_xml, "no document element");
    return std::move(b.root.children.front());
}

std::optional<std::string_view> node::attr(std::string_view key) const {
    for (const auto& [k, v] : attrs) {
        if (k == key) return std::string_view(v);
    }
    return std::nullopt;
}

const node* node::child(std::string_view name_) const {
    for (const node& c : children) {
        if (c.name == name_) return &c;
    }
    return nullptr;
}

const node* node::find(std::string_view name_) const {
    for (const node& c : children) {
        if (c.name == name_) return &c;
        if (const node* hit = c.find(name_)) return hit;
    }
    return nullptr;
}

std::vector<const node*> node::find_all(std::string_view name_) const {
    std::vector<const node*> out;
    auto walk = [&](auto&& self, const node& n) -> void {
        for (const node& c : n.children) {
            if (c.name == name_) out.push_back(&c);
            self(self, c);
        }
    };
    walk(walk, *this);
    return out;
}

}  // namespace s2nbar::xml
