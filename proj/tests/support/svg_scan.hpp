#pragma once

// Re-parses rendered SVG with expat and collects the dot glyphs.

#include <expat.h>

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ppmtest {

struct SvgElement {
  std::string tag;
  std::map<std::string, std::string> attrs;

  bool has_class(const std::string& cls) const {
    auto it = attrs.find("class");
    if (it == attrs.end()) return false;
    const std::string& all = it->second;
    std::size_t pos = 0;
    while (pos <= all.size()) {
      const std::size_t end = std::min(all.find(' ', pos), all.size());
      if (all.compare(pos, end - pos, cls) == 0 && end - pos == cls.size()) return true;
      pos = end + 1;
    }
    return false;
  }
};

/// Every element of the document in order. Throws on malformed XML.
inline std::vector<SvgElement> parse_svg(const std::string& svg) {
  std::vector<SvgElement> out;
  std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(XML_ParserCreate("UTF-8"), &XML_ParserFree);
  XML_SetUserData(parser.get(), &out);
  XML_SetStartElementHandler(parser.get(), [](void* data, const XML_Char* name, const XML_Char** attrs) {
    SvgElement el{name, {}};
    for (std::size_t i = 0; attrs[i]; i += 2) el.attrs[attrs[i]] = attrs[i + 1];
    static_cast<std::vector<SvgElement>*>(data)->push_back(std::move(el));
  });
  if (XML_Parse(parser.get(), svg.data(), static_cast<int>(svg.size()), XML_TRUE) != XML_STATUS_OK)
    throw std::runtime_error(std::string("invalid SVG: ") + XML_ErrorString(XML_GetErrorCode(parser.get())));
  return out;
}

/// Dot glyphs only (legend glyphs excluded).
inline std::vector<SvgElement> dot_glyphs(const std::string& svg) {
  std::vector<SvgElement> dots;
  for (auto& el : parse_svg(svg))
    if (el.has_class("dot")) dots.push_back(std::move(el));
  return dots;
}

}  // namespace ppmtest
