#pragma once

#include <string>
#include <string_view>

namespace wigi::celebrity {

struct StrippedText {
  std::string text;
  bool unbalanced = false;  // an unclosed template, ref or comment ran to end of input
};

/// Reduces wikitext to plain prose: drops templates (nested), <ref> elements,
/// HTML comments and bold/italic quote runs, unwraps [[target|label]] links to
/// their label and collapses whitespace. Applying it twice gives the same text.
StrippedText strip_wikitext(std::string_view raw);

}  // namespace wigi::celebrity
