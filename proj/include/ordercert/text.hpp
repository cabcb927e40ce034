#pragma once

// Text syntax for groups and elements.
//
// Groups:    free:N  abelian:N  cyclic:N  klein  heisenberg  laurent-z
//            product(spec,spec,...)
// Elements:  whitespace-separated generator tokens with optional ^int
//            exponents ("a b^-1 a^2"); "id" is the identity.
//            laurent-z also accepts "poly:1*t^0+2*t^3;z:0".
//            Products also accept "[e1|e2|...]", one entry per factor, or
//            tokens with factor suffixes ("a_1 a_2^-1").

#include <string>
#include <string_view>
#include <vector>

#include "ordercert/group.hpp"

namespace ordercert {

Group parse_group(std::string_view spec);

Element parse_element(std::string_view text, Group g);
std::string render(Element const& e);

/// Splits on `sep`, trimming whitespace, honoring () and [] nesting.
std::vector<std::string> split_top_level(std::string_view text, char sep);

}  // namespace ordercert
