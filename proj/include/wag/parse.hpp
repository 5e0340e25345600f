#pragma once

#include <string>

#include "wag/game.hpp"

namespace wag {

// Parses a UTF-8 JSON game document. Wildcard '*' entries are expanded to a
// total transition table; two entries covering the same tuple with different
// targets are a validation error. Syntax errors carry the byte position.
GameDoc parse_game(const std::string& text);

// Canonical serialization; parse(serialize(g)) is structurally identical
// to g. Absorbing wildcard compression is not attempted: the table is
// emitted tuple by tuple in document order.
std::string serialize_game(const GameDoc& doc);

} // namespace wag
