#pragma once

#include <string>

#include "ratiokit/params.hpp"

namespace ratiokit {

/// Compact JSON encoding {"p":..,"q":..,"N":..,"xs":[[re,im],..],
/// "ys":[[re,im],..]}.  Doubles use shortest round-trip formatting, so
/// decode(encode(r)) reproduces r bitwise.  indent >= 0 pretty-prints.
std::string params_to_json(const RawParams& raw, int indent = -1);

/// Inverse of params_to_json.  Throws ValueError on malformed text,
/// missing or extra keys, or wrong element shapes; the record is
/// returned unvalidated (feed it to validate()).
RawParams params_from_json(const std::string& text);

/// Same encoding with the unequal-count fields "pprime" and "qprime".
std::string extended_params_to_json(const ExtendedRawParams& raw, int indent = -1);

ExtendedRawParams extended_params_from_json(const std::string& text);

}  // namespace ratiokit
