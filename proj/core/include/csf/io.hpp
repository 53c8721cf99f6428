#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csf/frames.hpp"

namespace csf {

enum class FrameKind { vector_frame, operator_frame };

// On-disk frame description. Serialization is canonical: sorted keys, no
// whitespace, floats at 17 significant digits with a trailing ".0" when
// integral, complex numbers as [re, im] pairs, one trailing newline.
// Canonical bytes survive a load/save round trip unchanged.
struct FrameFile {
  int version = 1;
  std::vector<int> algebra;  // block dimensions
  int ambient_rank = 0;
  FrameKind kind = FrameKind::operator_frame;
  std::optional<ModuleOperator> codomain_projection;
  std::vector<ModuleOperator> operator_elements;
  std::vector<ModuleVector> vector_elements;
  std::map<std::string, std::string> metadata;
};

FrameFile to_frame_file(const OperatorFrame& f,
                        std::map<std::string, std::string> metadata = {});
FrameFile to_frame_file(const VectorFrame& vf,
                        std::map<std::string, std::string> metadata = {});
OperatorFrame to_operator_frame(const FrameFile& file,
                                const Tolerance& tol = {});
VectorFrame to_vector_frame(const FrameFile& file);

std::string serialize(const FrameFile& file);
// Throws ParseError on malformed text (with the offending position or key).
FrameFile parse_frame_file(const std::string& text);

FrameFile load_frame_file(const std::string& path);
void save_frame_file(const FrameFile& file, const std::string& path);

// The float formatting used by every serialized number: %.17g, "-0" folded
// to "0.0", ".0" appended to integral values; rejects non-finite input.
std::string format_float(double x);
// Operator encoded as nested JSON arrays in canonical form, for embedding
// in reports.
std::string operator_to_json(const ModuleOperator& op);

}  // namespace csf
