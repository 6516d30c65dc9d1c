#pragma once

#include "dendro/bijection.hpp"
#include "dendro/distortion.hpp"
#include "dendro/tree.hpp"
#include "dendro/ultrametric.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

namespace dendro::io {

using Json = nlohmann::ordered_json;

/// Input problem, carrying a byte offset when one is known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " (byte " + std::to_string(position) + ")"),
        position_(position) {}
  explicit ParseError(const std::string& message)
      : std::runtime_error(message), position_(0) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_ = 0;
};

// --- ultrametric space JSON -------------------------------------------------
// { "points": [...], "heights": [[null, "1", ...], ...] }
// Heights are rationals as strings ("p/q" or integer); SELF is null.

UltrametricSpace parse_space(const std::string& text);
std::string serialize_space(const UltrametricSpace& space);

// --- tree JSON ---------------------------------------------------------------
// { "root": "r", "vertices": [{"label", "parent", "length"}...],
//   "truncation_depth": "3" | absent }

RootedTree parse_tree_json(const std::string& text);
std::string serialize_tree_json(const RootedTree& tree);

// --- Newick subset -----------------------------------------------------------
// Rooted, unquoted labels, mandatory branch lengths as exact rationals
// ("p/q", integer, or plain decimal), no comments. Unlabeled vertices get
// fresh "_k" labels at parse time.

RootedTree parse_newick(const std::string& text);
std::string serialize_newick(const RootedTree& tree);

// --- auto-detection ----------------------------------------------------------

using ParsedFile = std::variant<UltrametricSpace, RootedTree>;
ParsedFile parse_any(const std::string& text);

/// A tree input becomes its end space; a space passes through.
UltrametricSpace as_space(const std::string& text);

// --- result payloads ---------------------------------------------------------

Json bijection_to_json(const BijectionMap& f, const UltrametricSpace& from,
                       const UltrametricSpace& to);
Json validation_to_json(const Validation& v);
Json distortion_report_to_json(const DistortionReport& report,
                               const UltrametricSpace& from);
Json kappa_result_to_json(const KappaResult& result, const UltrametricSpace& u,
                          const UltrametricSpace& u2);

// --- files and hashing -------------------------------------------------------

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
/// FNV-1a 64 over the raw bytes, lowercase hex.
std::string fnv1a64_hex(const std::string& bytes);

}  // namespace dendro::io
